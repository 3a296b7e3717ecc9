#pragma once

#include "zob/algorithms/projection.hpp"
#include "zob/algorithms/solver.hpp"
#include "zob/algorithms/tuning.hpp"
#include "zob/estimators/block_sample.hpp"
#include "zob/estimators/estimators.hpp"
#include "zob/estimators/radius_schedule.hpp"
#include "zob/metrics/metrics.hpp"
#include "zob/metrics/moreau.hpp"
#include "zob/problems/benchmarks.hpp"
#include "zob/problems/oracle_problem.hpp"
