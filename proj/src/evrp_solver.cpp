#include "pv2vc/evrp_solver.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>

namespace pv2vc {

namespace {

// Bare-chain soc on arrival at each task position, without charging.
std::vector<double> bare_soc(const Instance& inst, const Plan& p, int v) {
    std::vector<double> soc(p.positions(), 0.0);
    double e = inst.initial_soc(v);
    for (std::size_t k = 0; k < p.positions(); ++k) {
        soc[k] = e;
        if (k + 1 < p.positions()) {
            const auto& leg = p.legs[k];
            for (std::size_t a = 1; a < leg.size(); ++a) {
                const Arc& arc = inst.network().arc_between(leg[a - 1], leg[a]);
                e -= arc.consumption_rate * arc.distance;
            }
        }
    }
    return soc;
}

// Reroutes legs that would revisit a node; false when no simple walk keeps the positions.
bool make_simple(Plan& p, const Instance& inst) {
    if (is_simple(expanded_walk(p))) return true;
    const Network& net = inst.network();
    std::vector<bool> used(net.node_count(), false);
    used[static_cast<std::size_t>(p.nodes[0])] = true;
    for (std::size_t k = 0; k < p.segments(); ++k) {
        const int to = p.nodes[k + 1];
        if (used[static_cast<std::size_t>(to)]) return false;
        std::vector<bool> blocked = used;
        for (std::size_t m = k + 2; m < p.positions(); ++m) blocked[static_cast<std::size_t>(p.nodes[m])] = true;
        auto& leg = p.legs[k];
        const bool clash = std::any_of(leg.begin() + 1, leg.end() - 1,
                                       [&](int n) { return blocked[static_cast<std::size_t>(n)]; });
        if (clash) {
            auto alt = path_avoiding(net, p.nodes[k], to, blocked);
            if (alt.empty()) return false;
            leg = std::move(alt);
        }
        for (std::size_t a = 1; a < leg.size(); ++a) used[static_cast<std::size_t>(leg[a])] = true;
    }
    return true;
}

}  // namespace

std::vector<Plan> construct_initial(const Instance& inst, int r) {
    const Classification cls = classify_request(inst, r);
    if (cls == Classification::Infeasible) return {};
    const Request& req = inst.request(r);
    Plan bare = make_plan(inst, req.tasks);
    make_simple(bare, inst);
    if (cls == Classification::NoChargeNeeded) return {bare};
    const auto soc = bare_soc(inst, bare, r);
    const double c = inst.params().consumption_rate;
    std::vector<Plan> out;
    for (std::size_t k = 0; k + 1 < req.tasks.size(); ++k) {
        Detour d;
        try {
            d = min_detour_cs(inst.network(), inst.distances(), req.tasks[k], req.tasks[k + 1]);
        } catch (const Error&) {
            continue;
        }
        // The min-detour CS may lie beyond the remaining range; take the closest-detour CS within it.
        auto in_range = [&](int cs) {
            return soc[k] - c * inst.distances().dist(req.tasks[k], cs) >= req.min_soc - kEnergyTol;
        };
        if (!in_range(d.cs)) {
            const DistanceMatrix& dm = inst.distances();
            double best = kInf;
            d.cs = -1;
            for (int cs : inst.network().charging_stations()) {
                const double sum = dm.dist(req.tasks[k], cs) + dm.dist(cs, req.tasks[k + 1]);
                if (in_range(cs) && sum < best) {
                    best = sum;
                    d.cs = cs;
                }
            }
            if (d.cs < 0 || best == kInf) continue;
        }
        const double tmax = req.capacity / inst.network().node(d.cs).charge_rate;
        for (double share : {0.25, 0.5, 0.75, 1.0}) {
            PlanSet tmp{bare};
            int pos;
            if (d.cs == req.tasks[k]) {
                pos = static_cast<int>(k);
            } else if (d.cs == req.tasks[k + 1]) {
                pos = static_cast<int>(k) + 1;
            } else {
                pos = static_cast<int>(k) + 1;
                // tmp holds this plan alone and has no groups.
                if (!insert_position(tmp, inst, 0, pos, d.cs, 0.0)) continue;
            }
            Plan& p = tmp[0];
            if (pos + 1 >= static_cast<int>(p.positions())) continue;
            if (!make_simple(p, inst)) continue;
            const double res = inst.params().dwell_resolution;
            p.dwell[pos] = std::round(share * tmax / res) * res;
            out.push_back(p);
        }
    }
    if (out.empty()) out.push_back(bare);
    return out;
}

SolveResult solve_evrp(const Instance& inst, const GaConfig& config) {
    const int nr = inst.request_count();
    SolveResult res;
    res.scenario = Scenario::Evrp;
    res.plans = bare_plan_set(inst);
    std::vector<GaResult<PlanSet>> runs(static_cast<std::size_t>(nr));
    std::vector<bool> ran(static_cast<std::size_t>(nr), false);
    std::vector<std::string> notes(static_cast<std::size_t>(nr));

    auto solve_one = [&](int r) {
        const auto seeds = construct_initial(inst, r);
        if (seeds.empty()) {
            notes[r] = fmt::format("request {} cannot be served (infeasible)", inst.request(r).id);
            return;
        }
        std::vector<bool> active(static_cast<std::size_t>(inst.vehicle_count()), false);
        active[r] = true;
        std::vector<PlanSet> initial;
        for (const Plan& p : seeds) {
            PlanSet ps = res.plans;
            ps[r] = p;
            initial.push_back(std::move(ps));
        }
        PlanProblem pp = make_problem(inst, Scenario::Evrp, active, {OperatorFamily::Route}, config.dwell_resolution,
                                      std::move(initial), static_cast<std::uint64_t>(r));
        GaConfig cfg = config;
        cfg.threads = 1;
        runs[r] = run_ga(pp.problem, cfg);
        ran[r] = true;
    };

    const int workers = std::max(1, std::min(config.threads, nr));
    if (workers <= 1) {
        for (int r = 0; r < nr; ++r) solve_one(r);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int r = w; r < nr; r += workers) solve_one(r);
            });
        for (auto& t : pool) t.join();
    }

    std::size_t longest = 0;
    for (int r = 0; r < nr; ++r) {
        if (!notes[r].empty()) res.notes.push_back(notes[r]);
        if (!ran[r]) continue;
        res.plans[r] = runs[r].best[r];
        longest = std::max(longest, runs[r].log.size());
    }
    // Combined log: per generation, the sum of each request's best so far.
    for (std::size_t g = 0; g < longest; ++g) {
        GenerationRecord rec;
        rec.generation = static_cast<int>(g);
        rec.best_objective = 0.0;
        for (int r = 0; r < nr; ++r) {
            if (!ran[r]) continue;
            const auto& log = runs[r].log;
            const GenerationRecord& x = log[std::min(g, log.size() - 1)];
            rec.best_objective += x.best_objective;
            rec.best_penalty += x.best_penalty;
            rec.feasible_count += x.feasible_count;
        }
        res.log.push_back(rec);
    }
    res.eval = assess(res.plans, inst, {Scenario::Evrp, {}});
    res.seed_objective = res.eval.feasible ? res.eval.objective : kInf;
    return res;
}

}  // namespace pv2vc
