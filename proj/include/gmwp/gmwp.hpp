#pragma once

#include "gmwp/types.hpp"
#include "gmwp/gauge.hpp"
#include "gmwp/envelope.hpp"
#include "gmwp/solver_fixed.hpp"
#include "gmwp/solver_adaptive.hpp"
#include "gmwp/data.hpp"
#include "gmwp/metrics.hpp"
#include "gmwp/report_io.hpp"
#include "gmwp/plot.hpp"
