#pragma once

#include "amc/sampling/bandlimited.hpp"
#include "amc/sampling/baselines.hpp"
#include "amc/sampling/gcs.hpp"
#include "amc/sampling/igcs.hpp"
#include "amc/sampling/io.hpp"
#include "amc/sampling/sample_set.hpp"
#include "amc/sampling/split.hpp"
