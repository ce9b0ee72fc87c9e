#pragma once

#include "balbench/errors.hpp"
#include "balbench/fuzzy.hpp"
#include "balbench/lqr.hpp"
#include "balbench/metrics.hpp"
#include "balbench/numerics/care.hpp"
#include "balbench/numerics/matrix.hpp"
#include "balbench/numerics/poly.hpp"
#include "balbench/numerics/rk4.hpp"
#include "balbench/pid.hpp"
#include "balbench/plant.hpp"
#include "balbench/sim.hpp"
#include "balbench/trajectory_csv.hpp"
