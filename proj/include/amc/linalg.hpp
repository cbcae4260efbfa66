#pragma once

#include "amc/linalg/cg.hpp"
#include "amc/linalg/dense.hpp"
#include "amc/linalg/gershgorin.hpp"
#include "amc/linalg/lobpcg.hpp"
#include "amc/linalg/sparse.hpp"
#include "amc/linalg/types.hpp"
