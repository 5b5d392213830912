#include "pv2vc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "pv2vc/lp.hpp"

namespace pv2vc {

namespace {

constexpr const char* kTooLarge = "instance too large for oracle";

double arc_energy(const Network& net, int a, int b) {
    const Arc& arc = net.arc_between(a, b);
    return arc.consumption_rate * arc.distance;
}

double arc_time(const Network& net, int a, int b) { return net.arc_between(a, b).travel_time; }

void require_budget(std::uint64_t used, std::uint64_t cap) {
    if (used > cap) throw Error(kTooLarge);
}

void extend_request(const Network& net, const std::vector<int>& task_index, std::size_t task_count,
                    std::size_t next_task, std::vector<int>& walk, std::vector<char>& on,
                    std::vector<std::vector<int>>& out, std::size_t cap) {
    const int u = walk.back();
    for (int a : net.out_arcs(u)) {
        const int w = net.arc(a).to;
        if (on[w]) continue;
        std::size_t nt = next_task;
        if (task_index[w] >= 0) {
            if (static_cast<std::size_t>(task_index[w]) != nt) continue;
            ++nt;
        }
        walk.push_back(w);
        on[w] = 1;
        if (nt == task_count) {
            out.push_back(walk);
            require_budget(out.size(), cap);
        } else {
            extend_request(net, task_index, task_count, nt, walk, on, out, cap);
        }
        on[w] = 0;
        walk.pop_back();
    }
}

void extend_any(const Network& net, std::vector<int>& walk, std::vector<char>& on, std::vector<std::vector<int>>& out,
                std::size_t cap) {
    for (int a : net.out_arcs(walk.back())) {
        const int w = net.arc(a).to;
        if (on[w]) continue;
        walk.push_back(w);
        on[w] = 1;
        out.push_back(walk);
        require_budget(out.size(), cap);
        extend_any(net, walk, on, out, cap);
        on[w] = 0;
        walk.pop_back();
    }
}

// Plan visiting walk[keep[i]] with explicit sub-walk legs.
Plan plan_from_walk(const Instance& inst, const std::vector<int>& walk, const std::vector<std::size_t>& keep,
                    const std::vector<double>& dwell) {
    std::vector<int> nodes;
    for (std::size_t i : keep) nodes.push_back(walk[i]);
    Plan p = make_plan(inst, nodes);
    for (std::size_t s = 0; s + 1 < keep.size(); ++s)
        p.legs[s].assign(walk.begin() + static_cast<std::ptrdiff_t>(keep[s]),
                         walk.begin() + static_cast<std::ptrdiff_t>(keep[s + 1]) + 1);
    for (std::size_t i = 0; i < keep.size(); ++i) p.dwell[i] = dwell[keep[i]];
    normalize(p, inst);
    return p;
}

// One grouping of the vehicles sharing an arc: blocks of two or more, and supplier -> request pairs.
struct ArcOption {
    std::vector<std::vector<int>> blocks;
    std::vector<std::pair<int, int>> pairs;
};

bool valid_block(const Instance& inst, const std::vector<int>& block) {
    if (block.size() < 2) return true;
    int req = 0;
    for (int v : block) req += inst.is_request(v) ? 1 : 0;
    const int sup = static_cast<int>(block.size()) - req;
    return req >= 1 && sup <= req;
}

void pair_block(const Instance& inst, const std::vector<int>& block, std::size_t i, std::vector<char>& used,
                std::vector<std::pair<int, int>>& pairs, std::vector<std::vector<std::pair<int, int>>>& out) {
    if (i == block.size()) {
        out.push_back(pairs);
        return;
    }
    const int u = block[i];
    if (inst.is_request(u)) {
        pair_block(inst, block, i + 1, used, pairs, out);
        return;
    }
    for (std::size_t j = 0; j < block.size(); ++j) {
        if (!inst.is_request(block[j]) || used[j]) continue;
        used[j] = 1;
        pairs.emplace_back(u, block[j]);
        pair_block(inst, block, i + 1, used, pairs, out);
        pairs.pop_back();
        used[j] = 0;
    }
}

void partitions(const std::vector<int>& members, std::size_t i, std::vector<std::vector<int>>& blocks,
                std::vector<std::vector<std::vector<int>>>& out) {
    if (i == members.size()) {
        out.push_back(blocks);
        return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        blocks[b].push_back(members[i]);
        partitions(members, i + 1, blocks, out);
        blocks[b].pop_back();
    }
    blocks.push_back({members[i]});
    partitions(members, i + 1, blocks, out);
    blocks.pop_back();
}

std::vector<ArcOption> arc_options(const Instance& inst, Scenario scenario, const std::vector<int>& members) {
    std::vector<ArcOption> out;
    if (scenario == Scenario::Evrp) {
        out.push_back({});
        return out;
    }
    std::vector<std::vector<int>> blocks;
    std::vector<std::vector<std::vector<int>>> parts;
    partitions(members, 0, blocks, parts);
    for (const auto& part : parts) {
        if (!std::all_of(part.begin(), part.end(), [&](const auto& b) { return valid_block(inst, b); })) continue;
        std::vector<ArcOption> partial{{}};
        for (const auto& b : part) {
            if (b.size() < 2) continue;
            std::vector<std::vector<std::pair<int, int>>> pairings;
            std::vector<char> used(b.size(), 0);
            std::vector<std::pair<int, int>> pairs;
            pair_block(inst, b, 0, used, pairs, pairings);
            std::vector<ArcOption> next;
            for (const auto& base : partial)
                for (const auto& pr : pairings) {
                    ArcOption o = base;
                    o.blocks.push_back(b);
                    o.pairs.insert(o.pairs.end(), pr.begin(), pr.end());
                    next.push_back(std::move(o));
                }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    return out;
}

struct Slot {
    int vehicle;
    int arc;  // index of the arc in the vehicle's walk
};

struct SharedArc {
    std::vector<Slot> slots;
    std::vector<ArcOption> options;
};

struct Sweep {
    const Instance& inst;
    Scenario scenario;
    const OracleOptions& opts;
    std::vector<bool> active;
    std::vector<std::vector<int>> walks;  // current walk per vehicle (one node when idle)
    std::vector<SharedArc> shared;
    std::vector<std::size_t> choice;  // option index per shared arc
    double incumbent = kInf;
    double lower_bound = kInf;
    PlanSet best;
    std::uint64_t configurations = 0;

    double max_rate() const {
        double m = 0.0;
        for (int c : inst.network().charging_stations()) m = std::max(m, inst.network().node(c).charge_rate);
        return m;
    }

    void run_config() {
        require_budget(++configurations, opts.max_configurations);
        const Network& net = inst.network();
        const Params& prm = inst.params();
        const int nv = inst.vehicle_count();
        // Platooned flag and transfers per (vehicle, arc).
        std::vector<std::vector<char>> grouped(static_cast<std::size_t>(nv));
        std::vector<std::vector<std::vector<int>>> block_of(static_cast<std::size_t>(nv));
        for (int v = 0; v < nv; ++v) {
            const std::size_t arcs = walks[v].size() - 1;
            grouped[v].assign(arcs, 0);
            block_of[v].assign(arcs, {});
        }
        struct Transfer {
            int supplier, s_arc, request, r_arc;
            double tau;
            int var = -1;
        };
        std::vector<Transfer> transfers;
        std::vector<std::vector<int>> sync;  // (vehicle, arc) pairs flattened per block
        for (std::size_t a = 0; a < shared.size(); ++a) {
            const SharedArc& sa = shared[a];
            const ArcOption& o = sa.options[choice[a]];
            auto arc_of = [&](int v) {
                for (const Slot& s : sa.slots)
                    if (s.vehicle == v) return s.arc;
                return -1;
            };
            for (const auto& b : o.blocks) {
                std::vector<int> flat;
                for (int v : b) {
                    const int k = arc_of(v);
                    grouped[v][k] = 1;
                    for (int w : b)
                        if (w != v) block_of[v][k].push_back(w);
                    std::sort(block_of[v][k].begin(), block_of[v][k].end());
                    flat.push_back(v);
                    flat.push_back(k);
                }
                sync.push_back(std::move(flat));
            }
            for (const auto& [u, r] : o.pairs) {
                const int ku = arc_of(u);
                transfers.push_back({u, ku, r, arc_of(r), arc_time(net, walks[u][ku], walks[u][ku + 1]), -1});
            }
        }
        // Cost bound before solving: energy and driving are fixed by the configuration.
        std::vector<double> energy(static_cast<std::size_t>(nv), 0.0);
        std::vector<char> receives(static_cast<std::size_t>(nv), 0);
        for (const auto& t : transfers) receives[t.request] = 1;
        const double rate = max_rate();
        double fixed = 0.0, bound = 0.0;
        for (int v = 0; v < inst.request_count(); ++v) {
            if (!active[v]) continue;
            const auto& w = walks[v];
            double drive = 0.0;
            for (std::size_t k = 0; k + 1 < w.size(); ++k) {
                energy[v] += arc_energy(net, w[k], w[k + 1]) * (1.0 - (grouped[v][k] ? prm.platoon_saving : 0.0));
                drive += arc_time(net, w[k], w[k + 1]);
            }
            const double last = arc_time(net, w[w.size() - 2], w.back());
            fixed += prm.alpha * energy[v] + prm.beta * (last - inst.start_time(v));
            bound += prm.alpha * energy[v] + prm.beta * drive;
            if (!receives[v] && rate > 0.0) {
                const double deficit = energy[v] + inst.request(v).min_soc - inst.initial_soc(v);
                if (deficit > 0.0) bound += prm.beta * deficit / rate;
            }
        }
        if (bound >= incumbent - 1e-9) return;

        LinearProgram lp;
        std::vector<std::vector<int>> dep(static_cast<std::size_t>(nv)), chg(static_cast<std::size_t>(nv));
        std::vector<std::vector<std::vector<std::pair<int, double>>>> flow(static_cast<std::size_t>(nv));
        for (int v = 0; v < nv; ++v) {
            if (!active[v]) continue;
            const auto& w = walks[v];
            const std::size_t arcs = w.size() - 1;
            flow[v].assign(arcs, {});
            for (std::size_t k = 0; k < arcs; ++k) {
                const bool last = inst.is_request(v) && k + 1 == arcs;
                dep[v].push_back(lp.add_var(last ? prm.beta : 0.0));
                const Node& node = net.node(w[k]);
                chg[v].push_back(node.is_cs && node.charge_rate > 0.0 ? lp.add_var() : -1);
            }
        }
        for (auto& t : transfers) {
            const int x = t.var = lp.add_var();
            lp.add_row({{x, 1.0}}, LinearProgram::Sense::Le, inst.supplier(t.supplier).transfer_rate * t.tau);
            flow[t.supplier][t.s_arc].emplace_back(x, -1.0);
            flow[t.request][t.r_arc].emplace_back(x, prm.transfer_efficiency);
        }
        using S = LinearProgram::Sense;
        for (int v = 0; v < nv; ++v) {
            if (!active[v]) continue;
            const auto& w = walks[v];
            const double cap = inst.capacity(v);
            const double e0 = inst.initial_soc(v);
            if (e0 < inst.floor_at(v, w[0]) - kEnergyTol || e0 > cap + kEnergyTol) return;
            const std::size_t arcs = w.size() - 1;
            const double start = inst.start_time(v);
            for (std::size_t k = 0; k < arcs; ++k) {
                const double tau_prev = k ? arc_time(net, w[k - 1], w[k]) : 0.0;
                if (k == 0)
                    lp.add_row({{dep[v][0], 1.0}}, S::Ge, start);
                else
                    lp.add_row({{dep[v][k], 1.0}, {dep[v][k - 1], -1.0}}, S::Ge, tau_prev);
                if (chg[v][k] >= 0) {
                    const double lam = net.node(w[k]).charge_rate;
                    if (k == 0)
                        lp.add_row({{chg[v][0], 1.0}, {dep[v][0], -lam}}, S::Le, -lam * start);
                    else
                        lp.add_row({{chg[v][k], 1.0}, {dep[v][k], -lam}, {dep[v][k - 1], lam}}, S::Le, -lam * tau_prev);
                }
            }
            if (arcs > 0 && chg[v][0] >= 0) lp.add_row({{chg[v][0], 1.0}}, S::Le, cap - e0);
            std::vector<std::pair<int, double>> terms;
            double c = e0;
            for (std::size_t k = 0; k < arcs; ++k) {
                if (chg[v][k] >= 0) terms.emplace_back(chg[v][k], 1.0);
                c -= arc_energy(net, w[k], w[k + 1]) * (1.0 - (grouped[v][k] ? prm.platoon_saving : 0.0));
                terms.insert(terms.end(), flow[v][k].begin(), flow[v][k].end());
                lp.add_row(terms, S::Ge, inst.floor_at(v, w[k + 1]) - c);
                lp.add_row(terms, S::Le, cap - c);
                if (k + 1 < arcs && chg[v][k + 1] >= 0) {
                    auto with = terms;
                    with.emplace_back(chg[v][k + 1], 1.0);
                    lp.add_row(with, S::Le, cap - c);
                }
            }
        }
        for (const auto& flat : sync)
            for (std::size_t i = 2; i < flat.size(); i += 2)
                lp.add_row({{dep[flat[0]][flat[1]], 1.0}, {dep[flat[i]][flat[i + 1]], -1.0}}, S::Eq, 0.0);

        LpSolution sol = solve_lp(lp);
        if (sol.status != LpSolution::Status::Optimal) return;
        const double value = sol.objective + fixed;
        lower_bound = std::min(lower_bound, value);
        if (value >= incumbent - 1e-9) return;
        // Among request-optimal schedules, least supplier charging and transfer volume.
        std::vector<double> side(lp.cost.size(), 0.0);
        for (int v = inst.request_count(); v < nv; ++v)
            if (active[v])
                for (int g : chg[v])
                    if (g >= 0) side[g] = 1.0;
        for (const auto& t : transfers) side[t.var] = 1.0;
        if (std::any_of(side.begin(), side.end(), [](double c) { return c > 0.0; })) {
            LinearProgram second = lp;
            std::vector<std::pair<int, double>> primary;
            for (std::size_t j = 0; j < lp.cost.size(); ++j)
                if (lp.cost[j] != 0.0) primary.emplace_back(static_cast<int>(j), lp.cost[j]);
            second.add_row(primary, S::Le, sol.objective + 1e-9 * (1.0 + std::fabs(sol.objective)));
            second.cost = side;
            const LpSolution refined = solve_lp(second);
            if (refined.status == LpSolution::Status::Optimal) sol.x = refined.x;
        }

        PlanSet plans = bare_plan_set(inst);
        for (int v = 0; v < nv; ++v) {
            if (!active[v]) continue;
            const auto& w = walks[v];
            Plan p = walk_plan(inst, w);
            for (std::size_t k = 0; k + 1 < w.size(); ++k) {
                if (chg[v][k] >= 0) p.dwell[k] = sol.x[chg[v][k]] / net.node(w[k]).charge_rate;
                p.companions[k] = block_of[v][k];
            }
            plans[v] = std::move(p);
        }
        for (const auto& t : transfers) {
            const double amount = sol.x[t.var];
            if (amount <= 1e-12) continue;
            Plan& sp = plans[t.supplier];
            sp.paired[t.s_arc] = t.request;
            sp.fraction[t.s_arc] = std::min(1.0, amount / (inst.supplier(t.supplier).transfer_rate * t.tau));
        }
        const Evaluation ev = assess(plans, inst, {scenario, active});
        if (!ev.feasible || ev.objective >= incumbent - 1e-9) return;
        incumbent = ev.objective;
        best = std::move(plans);
    }

    void choose(std::size_t a) {
        if (a == shared.size()) {
            run_config();
            return;
        }
        for (std::size_t o = 0; o < shared[a].options.size(); ++o) {
            choice[a] = o;
            choose(a + 1);
        }
    }

    void sweep_groups() {
        std::map<std::pair<int, int>, std::vector<Slot>> uses;
        for (int v = 0; v < inst.vehicle_count(); ++v) {
            if (!active[v]) continue;
            const auto& w = walks[v];
            for (std::size_t k = 0; k + 1 < w.size(); ++k) uses[{w[k], w[k + 1]}].push_back({v, static_cast<int>(k)});
        }
        shared.clear();
        for (auto& [arc, slots] : uses) {
            if (slots.size() < 2) continue;
            std::vector<int> members;
            for (const Slot& s : slots) members.push_back(s.vehicle);
            shared.push_back({slots, arc_options(inst, scenario, members)});
        }
        choice.assign(shared.size(), 0);
        choose(0);
    }
};

}  // namespace

ChargingPlan minimal_charging(const Instance& inst, int vehicle, const std::vector<int>& walk) {
    const Network& net = inst.network();
    const Params& prm = inst.params();
    if (prm.alpha < 0.0 || prm.beta < 0.0) throw Error("minimal charging needs non-negative cost weights");
    const auto cs = net.charging_stations();
    for (int c : cs)
        if (net.node(c).charge_rate != net.node(cs.front()).charge_rate)
            throw Error("minimal charging needs equal rates at every charging station");
    ChargingPlan out;
    const std::size_t n = walk.size();
    out.charge.assign(n, 0.0);
    out.dwell.assign(n, 0.0);
    const double cap = inst.capacity(vehicle);
    double soc = inst.initial_soc(vehicle);
    if (n == 0 || soc < inst.floor_at(vehicle, walk[0]) - kEnergyTol) return out;
    auto can_charge = [&](std::size_t k) {
        const Node& node = net.node(walk[k]);
        return k + 1 < n && node.is_cs && node.charge_rate > 0.0;
    };
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (can_charge(k)) {
            double need = -kInf, used = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                used += arc_energy(net, walk[j - 1], walk[j]);
                need = std::max(need, inst.floor_at(vehicle, walk[j]) + used);
                if (can_charge(j)) break;
            }
            const double add = std::max(0.0, need - soc);
            if (soc + add > cap + kEnergyTol) return out;
            out.charge[k] = add;
            out.dwell[k] = add / net.node(walk[k]).charge_rate;
            soc += add;
        }
        soc -= arc_energy(net, walk[k], walk[k + 1]);
        if (soc < inst.floor_at(vehicle, walk[k + 1]) - kEnergyTol) return out;
    }
    out.feasible = true;
    return out;
}

std::vector<std::vector<int>> request_walks(const Instance& inst, int request, std::size_t max_paths) {
    const Network& net = inst.network();
    const Request& r = inst.request(request);
    std::vector<int> task_index(net.node_count(), -1);
    for (std::size_t i = 0; i < r.tasks.size(); ++i) task_index[r.tasks[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> out;
    std::vector<int> walk{r.origin()};
    if (r.tasks.size() < 2) return {walk};
    std::vector<char> on(net.node_count(), 0);
    on[r.origin()] = 1;
    extend_request(net, task_index, r.tasks.size(), 1, walk, on, out, max_paths);
    return out;
}

std::vector<std::vector<int>> supplier_walks(const Instance& inst, int supplier, std::size_t max_paths) {
    const Network& net = inst.network();
    std::vector<int> walk{inst.origin(supplier)};
    std::vector<std::vector<int>> out{walk};
    std::vector<char> on(net.node_count(), 0);
    on[walk[0]] = 1;
    extend_any(net, walk, on, out, max_paths);
    return out;
}

Plan walk_plan(const Instance& inst, const std::vector<int>& walk) {
    std::vector<std::size_t> keep(walk.size());
    for (std::size_t i = 0; i < walk.size(); ++i) keep[i] = i;
    return plan_from_walk(inst, walk, keep, std::vector<double>(walk.size(), 0.0));
}

OracleResult exact_evrp(const Instance& inst, const OracleOptions& opts) {
    const Network& net = inst.network();
    const Params& prm = inst.params();
    OracleResult res;
    res.plans = bare_plan_set(inst);
    double total = 0.0;
    bool feasible = true;
    for (int r = 0; r < inst.request_count(); ++r) {
        const auto walks = request_walks(inst, r, opts.max_paths);
        res.configurations += walks.size();
        require_budget(res.configurations, opts.max_configurations);
        double best = kInf;
        std::vector<int> best_walk;
        ChargingPlan best_charge;
        for (const auto& w : walks) {
            const ChargingPlan cp = minimal_charging(inst, r, w);
            if (!cp.feasible) continue;
            double energy = 0.0, time = 0.0;
            for (std::size_t k = 0; k + 1 < w.size(); ++k) {
                energy += arc_energy(net, w[k], w[k + 1]);
                time += arc_time(net, w[k], w[k + 1]) + cp.dwell[k];
            }
            const double cost = prm.alpha * energy + prm.beta * time;
            if (cost < best - 1e-9) {
                best = cost;
                best_walk = w;
                best_charge = cp;
            }
        }
        if (!std::isfinite(best)) {
            feasible = false;
            res.notes.push_back(fmt::format("{}: no feasible route", inst.request(r).id));
            continue;
        }
        total += best;
        const Request& req = inst.request(r);
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < best_walk.size(); ++k)
            if (k == 0 || k + 1 == best_walk.size() || is_task(req, best_walk[k]) || best_charge.charge[k] > 0.0)
                keep.push_back(k);
        res.plans[r] = plan_from_walk(inst, best_walk, keep, best_charge.dwell);
    }
    res.eval = assess(res.plans, inst, {Scenario::Evrp, {}});
    res.feasible = feasible && res.eval.feasible;
    if (feasible) {
        res.lower_bound = total;
        res.objective = res.eval.feasible ? res.eval.objective : kInf;
    }
    return res;
}

OracleResult exact_small(const Instance& inst, Scenario scenario, const OracleOptions& opts) {
    const Network& net = inst.network();
    const Params& prm = inst.params();
    Sweep sw{inst, scenario, opts, default_active(inst, scenario), {}, {}, {}, kInf, kInf, {}, 0};
    const int nr = inst.request_count();
    std::vector<std::vector<std::vector<int>>> rwalks(static_cast<std::size_t>(nr));
    std::uint64_t tuples = 1;
    for (int r = 0; r < nr; ++r) {
        rwalks[r] = request_walks(inst, r, opts.max_paths);
        tuples *= std::max<std::uint64_t>(1, rwalks[r].size());
        require_budget(tuples, opts.max_configurations);
    }
    std::vector<int> suppliers;
    std::vector<std::vector<std::vector<int>>> swalks;
    for (int u = nr; u < inst.vehicle_count(); ++u) {
        if (!sw.active[u]) continue;
        suppliers.push_back(u);
        swalks.push_back(supplier_walks(inst, u, opts.max_paths));
    }
    OracleResult res;
    res.plans = bare_plan_set(inst);
    if (std::any_of(rwalks.begin(), rwalks.end(), [](const auto& w) { return w.empty(); })) {
        res.notes.push_back("a request has no route through its tasks");
        res.eval = assess(res.plans, inst, {scenario, sw.active});
        return res;
    }
    std::set<std::pair<int, int>> supplier_arcs;
    for (const auto& ws : swalks)
        for (const auto& w : ws)
            for (std::size_t k = 0; k + 1 < w.size(); ++k) supplier_arcs.insert({w[k], w[k + 1]});

    // Request tuples in order of a bound that ignores scheduling and counts every shareable arc as platooned.
    double rate = 0.0;
    for (int c : net.charging_stations()) rate = std::max(rate, net.node(c).charge_rate);
    std::vector<std::pair<double, std::vector<std::size_t>>> order;
    std::vector<std::size_t> idx(static_cast<std::size_t>(nr), 0);
    while (true) {
        std::set<std::pair<int, int>> arcs_of_others;
        double bound = 0.0;
        for (int r = 0; r < nr; ++r) {
            const auto& w = rwalks[r][idx[r]];
            std::set<std::pair<int, int>> others;
            if (scenario != Scenario::Evrp)
                for (int q = 0; q < nr; ++q) {
                    if (q == r) continue;
                    const auto& wq = rwalks[q][idx[q]];
                    for (std::size_t k = 0; k + 1 < wq.size(); ++k) others.insert({wq[k], wq[k + 1]});
                }
            double energy = 0.0, drive = 0.0;
            bool may_receive = false;
            for (std::size_t k = 0; k + 1 < w.size(); ++k) {
                const std::pair<int, int> arc{w[k], w[k + 1]};
                const bool supplied = supplier_arcs.count(arc) > 0;
                const bool share = others.count(arc) > 0 || supplied;
                may_receive = may_receive || supplied;
                energy += arc_energy(net, w[k], w[k + 1]) * (1.0 - (share ? prm.platoon_saving : 0.0));
                drive += arc_time(net, w[k], w[k + 1]);
            }
            bound += prm.alpha * energy + prm.beta * drive;
            const double deficit = energy + inst.request(r).min_soc - inst.initial_soc(r);
            if (!may_receive && deficit > 0.0 && rate > 0.0) bound += prm.beta * deficit / rate;
        }
        order.emplace_back(bound, idx);
        int r = nr - 1;
        while (r >= 0 && ++idx[r] == rwalks[r].size()) idx[r--] = 0;
        if (r < 0) break;
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    sw.walks.assign(static_cast<std::size_t>(inst.vehicle_count()), {});
    for (int v = 0; v < inst.vehicle_count(); ++v) sw.walks[v] = {inst.origin(v)};
    for (const auto& [bound, tuple] : order) {
        if (bound >= sw.incumbent - 1e-9) break;
        std::set<std::pair<int, int>> request_arcs;
        for (int r = 0; r < nr; ++r) {
            sw.walks[r] = rwalks[r][tuple[r]];
            const auto& w = sw.walks[r];
            for (std::size_t k = 0; k + 1 < w.size(); ++k) request_arcs.insert({w[k], w[k + 1]});
        }
        // Supplier walks worth trying end on an arc some request drives.
        std::vector<std::vector<const std::vector<int>*>> useful(suppliers.size());
        for (std::size_t i = 0; i < suppliers.size(); ++i)
            for (const auto& w : swalks[i])
                if (w.size() == 1 || request_arcs.count({w[w.size() - 2], w.back()}))
                    useful[i].push_back(&w);
        std::vector<std::size_t> sidx(suppliers.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < suppliers.size(); ++i) sw.walks[suppliers[i]] = *useful[i][sidx[i]];
            sw.sweep_groups();
            std::size_t i = suppliers.size();
            while (i > 0 && ++sidx[i - 1] == useful[i - 1].size()) sidx[--i] = 0;
            if (i == 0) break;
        }
    }
    res.configurations = sw.configurations;
    res.lower_bound = sw.lower_bound;
    if (std::isfinite(sw.incumbent)) {
        res.feasible = true;
        res.plans = sw.best;
        res.objective = sw.incumbent;
    }
    res.eval = assess(res.plans, inst, {scenario, sw.active});
    return res;
}

}  // namespace pv2vc
