#pragma once

#include "pv2vc/evaluator.hpp"

namespace pv2vc {

struct RepairOptions {
    Scenario scenario = Scenario::Pv2vc;
    std::vector<bool> active;  // empty: scenario default
    double dwell_resolution = 0.01;
    double fraction_resolution = 1e-4;
    int max_rounds = 64;
    bool tighten = true;
};

// Rounds up to a multiple of step (with a small guard against representation noise).
double quantize_up(double value, double step);

// Normalizes dwell, covers nodal shortages (more transfer on an existing pairing, then a
// free supplier in the same platoon, then CS dwell), and when feasible trims surplus
// charge: CS dwell of requests, then transfer fractions, then supplier CS dwell.
// Returns the evaluation of the resulting plan set.
Evaluation repair_and_tighten(PlanSet& plans, const Instance& inst, const RepairOptions& opts);

}  // namespace pv2vc
