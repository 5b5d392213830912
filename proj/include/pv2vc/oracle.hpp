#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pv2vc/evaluator.hpp"

namespace pv2vc {

struct OracleOptions {
    std::size_t max_paths = 10'000;                 // simple walks per vehicle
    std::uint64_t max_configurations = 10'000'000;  // route tuples times platoon/pairing choices
};

struct ChargingPlan {
    bool feasible = false;
    std::vector<double> charge;  // kWh gained at each walk node
    std::vector<double> dwell;   // minutes at each walk node
};

struct OracleResult {
    bool feasible = false;
    double objective = kInf;    // evaluator value of `plans`
    double lower_bound = kInf;  // best linear-program value over all configurations
    PlanSet plans;
    Evaluation eval;
    std::uint64_t configurations = 0;
    std::vector<std::string> notes;
};

// Least charge that keeps vehicle v above its floor along a fixed node walk.
// Requires equal rates at every CS and non-negative cost weights.
ChargingPlan minimal_charging(const Instance& inst, int vehicle, const std::vector<int>& walk);

// Simple walks from the request origin through its tasks in order.
std::vector<std::vector<int>> request_walks(const Instance& inst, int request, std::size_t max_paths);
// Simple walks from the supplier origin, the one-node walk included.
std::vector<std::vector<int>> supplier_walks(const Instance& inst, int supplier, std::size_t max_paths);

// Plan whose visit positions are every node of the walk, one arc per segment.
Plan walk_plan(const Instance& inst, const std::vector<int>& walk);

// Per-request optimum without platoons or transfers.
OracleResult exact_evrp(const Instance& inst, const OracleOptions& opts = {});

// Exact optimum under a scenario: every tuple of simple walks, every grouping and
// pairing per shared arc, and a linear program for departures, charges and transfers.
OracleResult exact_small(const Instance& inst, Scenario scenario, const OracleOptions& opts = {});

}  // namespace pv2vc
