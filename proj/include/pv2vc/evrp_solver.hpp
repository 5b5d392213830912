#pragma once

#include "pv2vc/solver_common.hpp"

namespace pv2vc {

// Seed plans for one request: the bare chain when no charging is needed, otherwise one
// min-detour CS (within the remaining range) per adjacent task pair with dwell at 25/50/75/100% of the full-charge time.
// Empty when the request cannot be served at all.
std::vector<Plan> construct_initial(const Instance& inst, int request);

// Each request is an independent GA run; runs are spread over config.threads workers.
SolveResult solve_evrp(const Instance& inst, const GaConfig& config);

}  // namespace pv2vc
