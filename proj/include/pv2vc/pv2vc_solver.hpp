#pragma once

#include "pv2vc/solver_common.hpp"

namespace pv2vc {

// Supplier assignment, platoon merging, insertion of remaining requests and platoon-only
// search, starting from the EVRP result (computed when not supplied). Extra seeds join the
// initial population. Falls back to the EVRP result when nothing better is found.
SolveResult solve_pv2vc(const Instance& inst, const GaConfig& config, const SolveResult* evrp_seed = nullptr,
                        const std::vector<PlanSet>& extra_seeds = {});

}  // namespace pv2vc
