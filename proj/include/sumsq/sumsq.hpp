#pragma once

#include "sumsq/arith.hpp"
#include "sumsq/errors.hpp"
#include "sumsq/linforms.hpp"
#include "sumsq/mordell.hpp"
#include "sumsq/oracle.hpp"
#include "sumsq/sumsets.hpp"
