#pragma once

#include "ezguide/errors.hpp"
#include "ezguide/ez_geometry.hpp"
#include "ezguide/safety_aggregation.hpp"
#include "ezguide/guidance.hpp"
#include "ezguide/simulator.hpp"
#include "ezguide/analysis.hpp"
#include "ezguide/sweep.hpp"
#include "ezguide/number_format.hpp"
#include "ezguide/scenario_io.hpp"
#include "ezguide/trajectory_csv.hpp"
#include "ezguide/report_json.hpp"
#include "ezguide/svg_plot.hpp"
#include "ezguide/checks.hpp"
