#pragma once

#include "balpack/arb.hpp"
#include "balpack/connectivity.hpp"
#include "balpack/errors.hpp"
#include "balpack/flow.hpp"
#include "balpack/flow_pack.hpp"
#include "balpack/fpt_common.hpp"
#include "balpack/graph.hpp"
#include "balpack/instancegen.hpp"
#include "balpack/matroid.hpp"
#include "balpack/oracle.hpp"
#include "balpack/report.hpp"
#include "balpack/solve_support.hpp"
#include "balpack/tree.hpp"
