#pragma once

#include "amc/graphs/builders.hpp"
#include "amc/graphs/index.hpp"
#include "amc/graphs/laplacian.hpp"
#include "amc/graphs/product.hpp"
#include "amc/graphs/rating.hpp"
#include "amc/graphs/synthetic.hpp"
