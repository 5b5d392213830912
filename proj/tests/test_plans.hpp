#pragma once

// Hand-built fixture plans shared by several test binaries.

#include "pv2vc/plan.hpp"

namespace pv2vc::testing {

inline PlanSet fixture_evrp_plans(const Instance& inst) {
    PlanSet plans = bare_plan_set(inst);
    plans[0] = make_plan(inst, {0, 2, 1, 3});
    plans[0].dwell[1] = 26.0 / 3.0;
    plans[1] = make_plan(inst, {0, 2, 3, 4});
    plans[1].dwell[1] = 19.0 / 3.0;
    return plans;
}

inline PlanSet fixture_evpp_plans(const Instance& inst) {
    PlanSet plans = bare_plan_set(inst);
    plans[0] = make_plan(inst, {0, 2, 1, 3});
    plans[0].dwell[1] = 24.4 / 3.0;
    plans[1] = make_plan(inst, {0, 2, 3, 4});
    plans[1].dwell[1] = 17.4 / 3.0;
    assign_group(plans, {{0, 0}, {1, 0}});
    return plans;
}

inline PlanSet fixture_pv2vc_plans(const Instance& inst) {
    PlanSet plans = bare_plan_set(inst);
    plans[0] = make_plan(inst, {0, 1, 3});
    plans[1] = make_plan(inst, {0, 1, 3, 4});
    plans[2] = make_plan(inst, {2, 1, 3, 4});
    plans[2].dwell[0] = (11.0 + 8.0 / 15.0) / 3.0;
    assign_group(plans, {{0, 0}, {1, 0}});
    assign_group(plans, {{0, 1}, {1, 1}, {2, 1}});
    assign_group(plans, {{1, 2}, {2, 2}});
    plans[2].paired[1] = 0;
    plans[2].fraction[1] = 0.36;
    plans[2].paired[2] = 1;
    plans[2].fraction[2] = 6.6 / 22.5;
    return plans;
}

}  // namespace pv2vc::testing
