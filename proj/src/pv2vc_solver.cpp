#include "pv2vc/pv2vc_solver.hpp"

#include "pv2vc/evrp_solver.hpp"

namespace pv2vc {

namespace {

using Boosts = std::vector<std::pair<std::string, double>>;

}  // namespace

SolveResult solve_pv2vc(const Instance& inst, const GaConfig& config, const SolveResult* evrp_seed,
                        const std::vector<PlanSet>& extra_seeds) {
    SolveResult seed = evrp_seed ? *evrp_seed : solve_evrp(inst, config);
    SolveResult res;
    res.scenario = Scenario::Pv2vc;
    res.notes = seed.notes;
    res.log = seed.log;
    res.seed_objective = seed.eval.feasible ? seed.eval.objective : kInf;
    const std::vector<bool> active = default_active(inst, Scenario::Pv2vc);
    PlanSet base = seed.plans;
    for (int v = inst.request_count(); v < inst.vehicle_count(); ++v) base[v] = idle_plan(inst, v);

    std::vector<PlanSet> initial{base, bare_plan_set(inst)};
    for (const PlanSet& ps : extra_seeds)
        if (ps.size() == base.size()) initial.push_back(ps);
    // One-to-one assignment seeds on both the EVRP routes and the bare task chains.
    Rng rng(derive_seed(config.seed, {0x70763276, 0}));
    for (int s = inst.request_count(); s < inst.vehicle_count(); ++s)
        for (int r = 0; r < inst.request_count(); ++r)
            for (int from = 0; from < 2; ++from)
                for (int attempt = 0; attempt < 2; ++attempt) {
                    PlanSet ps = initial[static_cast<std::size_t>(from)];
                    if (assign_er_es(ps, inst, r, s, rng)) initial.push_back(std::move(ps));
                }

    const std::vector<Boosts> phases{
        {{"assign_supplier", 4.0}, {"switch_pairing", 2.0}},
        {{"platoon_merge", 4.0}, {"platoon_extend", 4.0}},
        {{"join_platoon", 4.0}, {"platoon_extend", 2.0}},
        {{"platoon_insert", 3.0}, {"platoon_merge", 2.0}},
    };
    PlanSet best = base;
    Evaluation best_eval;
    for (std::size_t ph = 0; ph < phases.size(); ++ph) {
        PlanProblem pp =
            make_problem(inst, Scenario::Pv2vc, active,
                         {OperatorFamily::Route, OperatorFamily::Platoon, OperatorFamily::Supplier},
                         config.dwell_resolution, initial, 0x200 + ph);
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
    res.eval = assess(res.plans, inst, {Scenario::Pv2vc, {}});
    return res;
}

}  // namespace pv2vc
