#pragma once

#include "pv2vc/solver_common.hpp"

namespace pv2vc {

// Pairwise platoons, then merging, then insertion of remaining vehicles, starting from
// the EVRP result (computed when not supplied). Never returns worse than that seed.
SolveResult solve_evpp(const Instance& inst, const GaConfig& config, const SolveResult* evrp_seed = nullptr);

}  // namespace pv2vc
