#pragma once

#include "ehsched/curve.hpp"
#include "ehsched/deadline.hpp"
#include "ehsched/multihop.hpp"
#include "ehsched/online.hpp"
#include "ehsched/oracle.hpp"
#include "ehsched/p2p.hpp"
#include "ehsched/rate.hpp"
#include "ehsched/scenario_io.hpp"
#include "ehsched/schedule.hpp"
