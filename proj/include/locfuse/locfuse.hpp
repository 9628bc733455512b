#pragma once

#include "locfuse/adaptive_sensing.hpp"
#include "locfuse/bench.hpp"
#include "locfuse/errors.hpp"
#include "locfuse/estimation.hpp"
#include "locfuse/io/csv.hpp"
#include "locfuse/io/scenario_file.hpp"
#include "locfuse/io/sensor_log.hpp"
#include "locfuse/io/summary.hpp"
#include "locfuse/io/trace_csv.hpp"
#include "locfuse/metrics.hpp"
#include "locfuse/trace.hpp"
#include "locfuse/world/environment.hpp"
#include "locfuse/world/scenario.hpp"
#include "locfuse/world/sensors.hpp"
#include "locfuse/world/trajectory.hpp"
