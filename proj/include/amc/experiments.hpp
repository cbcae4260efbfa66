#pragma once

#include "amc/experiments/config.hpp"
#include "amc/experiments/metrics.hpp"
#include "amc/experiments/ratings_io.hpp"
#include "amc/experiments/runner.hpp"
#include "amc/experiments/split.hpp"
