#pragma once

// Umbrella header for the whole toolkit.

#include "tsa/arima.hpp"
#include "tsa/date.hpp"
#include "tsa/errors.hpp"
#include "tsa/evaluation.hpp"
#include "tsa/io.hpp"
#include "tsa/linalg.hpp"
#include "tsa/series.hpp"
#include "tsa/simulate.hpp"
#include "tsa/spline.hpp"
#include "tsa/stats.hpp"
#include "tsa/unitroot.hpp"
