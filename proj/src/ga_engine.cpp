#include "pv2vc/ga_engine.hpp"

#include <cmath>

#include <fmt/format.h>

namespace pv2vc {

void GaConfig::validate(std::size_t operator_count) const {
    if (elite_count < 1 || population_size < elite_count)
        throw Error("GA config: need population_size >= elite_count >= 1");
    if (max_generations < 1) throw Error("GA config: max_generations must be at least 1");
    if (no_improve_limit < 1) throw Error("GA config: no_improve_limit must be at least 1");
    if (max_chain < 1) throw Error("GA config: max_chain must be at least 1");
    if (infeasible_reserve < 0 || infeasible_reserve >= population_size)
        throw Error("GA config: infeasible_reserve must lie in [0, population_size)");
    if (!(dwell_resolution > 0.0)) throw Error("GA config: dwell_resolution must be positive");
    if (!operator_weights.empty()) {
        if (operator_weights.size() != operator_count)
            throw Error(fmt::format("GA config: {} operator weights for {} operators", operator_weights.size(),
                                    operator_count));
        double sum = 0.0;
        for (double w : operator_weights) {
            if (!(w >= 0.0)) throw Error("GA config: operator weights must be non-negative");
            sum += w;
        }
        if (!(sum > 0.0)) throw Error("GA config: operator weights need a positive sum");
    }
}

int rank_class(const Evaluation& e) {
    if (e.feasible) return 0;
    return e.violations.empty() ? 1 : 2;
}

bool ranks_before(const Evaluation& a, const Evaluation& b) {
    const int ca = rank_class(a), cb = rank_class(b);
    if (ca != cb) return ca < cb;
    if (ca == 0) return a.objective < b.objective;
    if (ca == 1) return a.penalty < b.penalty;
    return false;
}

bool improves_on(const Evaluation& a, const Evaluation& b) {
    const int ca = rank_class(a), cb = rank_class(b);
    if (ca != cb) return ca < cb;
    if (ca == 0) return a.objective < b.objective - 1e-9;
    if (ca == 1) return a.penalty < b.penalty - 1e-9;
    return false;
}

std::string generation_log_csv(const std::vector<GenerationRecord>& log) {
    std::string out = "generation,best_objective,best_penalty,feasible_count\n";
    for (const auto& r : log) {
        const std::string obj = std::isfinite(r.best_objective) ? fmt::format("{:.6f}", r.best_objective) : "inf";
        out += fmt::format("{},{},{:.6f},{}\n", r.generation, obj, r.best_penalty, r.feasible_count);
    }
    return out;
}

}  // namespace pv2vc
