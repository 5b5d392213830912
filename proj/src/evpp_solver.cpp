#include "pv2vc/evpp_solver.hpp"

#include "pv2vc/evrp_solver.hpp"

namespace pv2vc {

namespace {

using Boosts = std::vector<std::pair<std::string, double>>;

}  // namespace

SolveResult solve_evpp(const Instance& inst, const GaConfig& config, const SolveResult* evrp_seed) {
    SolveResult seed = evrp_seed ? *evrp_seed : solve_evrp(inst, config);
    SolveResult res;
    res.scenario = Scenario::Evpp;
    res.notes = seed.notes;
    res.log = seed.log;
    res.seed_objective = seed.eval.feasible ? seed.eval.objective : kInf;
    const std::vector<bool> active = default_active(inst, Scenario::Evpp);
    PlanSet base = seed.plans;
    for (int v = inst.request_count(); v < inst.vehicle_count(); ++v) base[v] = idle_plan(inst, v);

    if (inst.request_count() >= 2) {
        // Pairwise seeds: one Algorithm-2 style insertion per pair and attempt.
        std::vector<PlanSet> initial{base};
        Rng rng(derive_seed(config.seed, {0x65767070, 0}));
        for (int a = 0; a < inst.request_count(); ++a)
            for (int b = a + 1; b < inst.request_count(); ++b)
                for (int attempt = 0; attempt < 4; ++attempt) {
                    PlanSet ps = base;
                    if (ps[a].segments() == 0 || ps[b].segments() == 0) continue;
                    const int sa = rng.below(static_cast<int>(ps[a].segments()));
                    const int sb = rng.below(static_cast<int>(ps[b].segments()));
                    if (random_platoon_insertion(ps, inst, a, sa, b, sb, rng)) initial.push_back(std::move(ps));
                }
        const std::vector<Boosts> phases{
            {{"platoon_insert", 4.0}},
            {{"platoon_merge", 4.0}, {"platoon_extend", 3.0}},
            {{"join_platoon", 4.0}, {"platoon_merge", 2.0}},
        };
        PlanSet best = base;
        Evaluation best_eval;
        for (std::size_t ph = 0; ph < phases.size(); ++ph) {
            PlanProblem pp = make_problem(inst, Scenario::Evpp, active, {OperatorFamily::Route, OperatorFamily::Platoon},
                                          config.dwell_resolution, initial, 0x100 + ph);
            GaConfig cfg = config;
            cfg.operator_weights = pp.weights(phases[ph]);
            const GaResult<PlanSet> run = run_ga(pp.problem, cfg);
            append_log(res.log, run.log);
            best = run.best;
            best_eval = run.eval;
            initial.clear();
            for (const auto& m : run.population) initial.push_back(m.genome);
        }
        if (best_eval.feasible && best_eval.objective <= res.seed_objective + 1e-9) {
            res.plans = best;
        } else {
            res.plans = base;
            res.fell_back = true;
        }
    } else {
        res.plans = base;
        res.fell_back = true;
    }
    res.eval = assess(res.plans, inst, {Scenario::Evpp, {}});
    return res;
}

}  // namespace pv2vc
