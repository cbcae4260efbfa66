#pragma once

#include "amc/completion/dglr.hpp"
#include "amc/completion/io.hpp"
