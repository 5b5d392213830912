#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "pv2vc/evaluator.hpp"
#include "pv2vc/random.hpp"

namespace pv2vc {

struct GaConfig {
    int population_size = 30;
    int max_generations = 200;
    int no_improve_limit = 50;
    int elite_count = 5;                   // top survivors that each parent one offspring per generation
    std::vector<double> operator_weights;  // empty: uniform
    std::uint64_t seed = 1;
    double dwell_resolution = 0.01;
    int infeasible_reserve = 6;  // survivor slots held for the best repairable infeasible members
    int max_chain = 3;           // operators applied to one offspring, at most
    int threads = 1;

    void validate(std::size_t operator_count) const;
};

struct GenerationRecord {
    int generation = 0;
    double best_objective = kInf;
    double best_penalty = 0.0;
    int feasible_count = 0;
};

// Feasible by objective, then penalty-only infeasible by penalty, then structurally broken.
int rank_class(const Evaluation& e);
bool ranks_before(const Evaluation& a, const Evaluation& b);
bool improves_on(const Evaluation& a, const Evaluation& b);

std::string generation_log_csv(const std::vector<GenerationRecord>& log);

template <class G>
struct Member {
    G genome;
    Evaluation eval;
    std::uint64_t order = 0;  // insertion index; breaks ranking ties
};

template <class G>
bool member_before(const Member<G>& a, const Member<G>& b) {
    if (ranks_before(a.eval, b.eval)) return true;
    if (ranks_before(b.eval, a.eval)) return false;
    return a.order < b.order;
}

// Top-k under the ranking. With reserve > 0, up to `reserve` penalty-only infeasible
// members replace the weakest feasible survivors.
template <class G>
std::vector<Member<G>> select(std::vector<Member<G>> pop, std::size_t k, std::size_t reserve = 0) {
    std::stable_sort(pop.begin(), pop.end(), member_before<G>);
    if (k >= pop.size()) return pop;
    std::vector<Member<G>> out(pop.begin(), pop.begin() + static_cast<long>(k));
    if (reserve == 0) return out;
    std::size_t have = 0;
    for (const auto& m : out)
        if (rank_class(m.eval) == 1) ++have;
    std::vector<const Member<G>*> extra;
    for (std::size_t i = k; i < pop.size() && have + extra.size() < reserve; ++i)
        if (rank_class(pop[i].eval) == 1) extra.push_back(&pop[i]);
    // Replace from the back, only over feasible members and never the best one.
    std::size_t slot = out.size();
    for (const Member<G>* m : extra) {
        while (slot > 1 && rank_class(out[slot - 1].eval) != 0) --slot;
        if (slot <= 1) break;
        out[--slot] = *m;
    }
    std::stable_sort(out.begin(), out.end(), member_before<G>);
    return out;
}

template <class G>
struct GaProblem {
    std::vector<G> initial;
    std::function<Evaluation(G&)> evaluate;  // may canonicalize the genome (repair); must be deterministic
    std::vector<std::function<bool(G&, const Evaluation&, Rng&)>> operators;
    std::function<std::uint64_t(const G&)> fingerprint;  // optional; used to drop duplicates
    std::uint64_t phase = 0;                             // separates random streams of chained runs
};

template <class G>
struct GaResult {
    G best;
    Evaluation eval;
    std::vector<GenerationRecord> log;
    std::vector<Member<G>> population;
    int generations = 0;
};

namespace detail {

template <class G>
void evaluate_all(std::vector<Member<G>>& members, const std::function<Evaluation(G&)>& eval, int threads) {
    const std::size_t n = members.size();
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    if (workers <= 1) {
        for (auto& m : members) m.eval = eval(m.genome);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) members[i].eval = eval(members[i].genome);
        });
    for (auto& t : pool) t.join();
}

template <class G>
std::vector<Member<G>> dedup(std::vector<Member<G>> pop, const std::function<std::uint64_t(const G&)>& fp) {
    if (!fp) return pop;
    std::stable_sort(pop.begin(), pop.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
    std::unordered_set<std::uint64_t> seen;
    std::vector<Member<G>> out;
    for (auto& m : pop)
        if (seen.insert(fp(m.genome)).second) out.push_back(std::move(m));
    return out;
}

template <class G>
GenerationRecord record(int gen, const std::vector<Member<G>>& pop) {
    GenerationRecord r;
    r.generation = gen;
    r.best_objective = pop.front().eval.feasible ? pop.front().eval.objective : kInf;
    r.best_penalty = pop.front().eval.penalty;
    for (const auto& m : pop) r.feasible_count += m.eval.feasible ? 1 : 0;
    return r;
}

}  // namespace detail

template <class G>
GaResult<G> run_ga(const GaProblem<G>& problem, const GaConfig& cfg) {
    if (problem.initial.empty()) throw Error("empty initial population");
    cfg.validate(problem.operators.size());
    std::vector<double> weights = cfg.operator_weights;
    if (weights.empty()) weights.assign(problem.operators.size(), 1.0);

    std::uint64_t counter = 0;
    std::vector<Member<G>> pop;
    for (const G& g : problem.initial) pop.push_back(Member<G>{g, {}, counter++});
    detail::evaluate_all(pop, problem.evaluate, cfg.threads);
    const auto k = static_cast<std::size_t>(cfg.population_size);
    const auto reserve = static_cast<std::size_t>(cfg.infeasible_reserve);
    pop = select(detail::dedup(std::move(pop), problem.fingerprint), k, reserve);

    GaResult<G> res;
    res.log.push_back(detail::record(0, pop));
    Member<G> best = pop.front();
    int stall = 0;
    int gen = 0;
    while (gen < cfg.max_generations && stall < cfg.no_improve_limit && !problem.operators.empty()) {
        ++gen;
        std::vector<Member<G>> kids;
        kids.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            Rng rng(derive_seed(cfg.seed, {problem.phase, static_cast<std::uint64_t>(gen), i}));
            const std::size_t pi = i < static_cast<std::size_t>(cfg.elite_count) && i < pop.size()
                                       ? i
                                       : static_cast<std::size_t>(rng.below(static_cast<int>(pop.size())));
            const Member<G>& parent = pop[pi];
            G child = parent.genome;
            int steps = 1;
            while (steps < cfg.max_chain && rng.chance(0.5)) ++steps;
            bool changed = false;
            for (int s = 0; s < steps; ++s) {
                const int op = rng.weighted(weights);
                changed = problem.operators[static_cast<std::size_t>(op)](child, parent.eval, rng) || changed;
            }
            if (changed) kids.push_back(Member<G>{std::move(child), {}, counter++});
        }
        detail::evaluate_all(kids, problem.evaluate, cfg.threads);
        for (auto& m : kids) pop.push_back(std::move(m));
        pop = select(detail::dedup(std::move(pop), problem.fingerprint), k, reserve);
        res.log.push_back(detail::record(gen, pop));
        if (improves_on(pop.front().eval, best.eval)) {
            best = pop.front();
            stall = 0;
        } else {
            ++stall;
        }
    }
    res.best = std::move(best.genome);
    res.eval = std::move(best.eval);
    res.population = std::move(pop);
    res.generations = gen;
    return res;
}

}  // namespace pv2vc
