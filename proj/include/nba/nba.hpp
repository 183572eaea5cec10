#pragma once

#include "nba/cost.hpp"
#include "nba/errors.hpp"
#include "nba/feasibility.hpp"
#include "nba/gen.hpp"
#include "nba/io.hpp"
#include "nba/milp.hpp"
#include "nba/model.hpp"
#include "nba/percentile.hpp"
#include "nba/rational.hpp"
#include "nba/rng.hpp"
#include "nba/scenarios/cdn.hpp"
#include "nba/scenarios/cloudwan.hpp"
#include "nba/scenarios/lvdn.hpp"
#include "nba/scenarios/rtcn.hpp"
#include "nba/solvers.hpp"
