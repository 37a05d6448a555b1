#pragma once

#include "pipct/adaptive.hpp"
#include "pipct/chebyshev.hpp"
#include "pipct/config.hpp"
#include "pipct/error.hpp"
#include "pipct/experiments.hpp"
#include "pipct/expression.hpp"
#include "pipct/functions.hpp"
#include "pipct/interval.hpp"
#include "pipct/json_io.hpp"
#include "pipct/pade.hpp"
#include "pipct/piecewise.hpp"
#include "pipct/poles.hpp"
#include "pipct/svd.hpp"
