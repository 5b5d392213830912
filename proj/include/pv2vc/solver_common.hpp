#pragma once

#include <string>
#include <vector>

#include "pv2vc/ga_engine.hpp"
#include "pv2vc/operators.hpp"
#include "pv2vc/repair.hpp"

namespace pv2vc {

struct SolveResult {
    Scenario scenario = Scenario::Evrp;
    PlanSet plans;
    Evaluation eval;
    std::vector<GenerationRecord> log;
    std::vector<std::string> notes;  // e.g. requests that cannot be served
    double seed_objective = kInf;    // EVRP seed the phased solvers started from
    bool fell_back = false;          // phased search did not beat the seed
};

struct PlanProblem {
    GaProblem<PlanSet> problem;
    std::vector<std::string> operator_names;

    // Weights by operator name; names not listed get 1.
    std::vector<double> weights(const std::vector<std::pair<std::string, double>>& boosts) const;
};

// GA problem whose fitness runs the repair/tighten step under the given scenario.
PlanProblem make_problem(const Instance& inst, Scenario scenario, const std::vector<bool>& active,
                         const std::vector<OperatorFamily>& families, double dwell_resolution,
                         std::vector<PlanSet> initial, std::uint64_t phase);

// Appends a phase log, renumbering generations after those already present.
void append_log(std::vector<GenerationRecord>& log, const std::vector<GenerationRecord>& phase);

}  // namespace pv2vc
