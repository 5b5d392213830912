#include "pv2vc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace pv2vc {

namespace {

double quantize(double x, double step) { return std::max(0.0, std::round(x / step) * step); }

std::vector<int> active_vehicles(const OpContext& ctx, bool requests_only) {
    std::vector<int> out;
    for (int v = 0; v < ctx.inst->vehicle_count(); ++v)
        if (ctx.active[v] && (!requests_only || ctx.inst->is_request(v))) out.push_back(v);
    return out;
}

int pick_vehicle(const PlanSet& plans, const OpContext& ctx, Rng& rng, bool requests_only, std::size_t min_positions) {
    std::vector<int> vs;
    for (int v : active_vehicles(ctx, requests_only))
        if (plans[v].positions() >= min_positions) vs.push_back(v);
    return vs.empty() ? -1 : rng.pick(vs);
}

bool is_cs(const Instance& inst, int node) { return inst.network().node(node).is_cs; }

// Interior CS positions that the route operators may move or drop.
std::vector<int> movable_cs(const Plan& p, const Instance& inst, int v) {
    std::vector<int> out;
    for (int k = 1; k + 1 < static_cast<int>(p.positions()); ++k) {
        if (!is_cs(inst, p.nodes[k])) continue;
        if (inst.is_request(v) && is_task(inst.request(v), p.nodes[k])) continue;
        out.push_back(k);
    }
    return out;
}

// Positions where a CS dwell may be set.
std::vector<int> charge_positions(const Plan& p, const Instance& inst) {
    std::vector<int> out;
    const int last = static_cast<int>(p.positions()) - 1;
    for (int k = 0; k <= last; ++k) {
        if (!is_cs(inst, p.nodes[k])) continue;
        if (k == last) continue;
        out.push_back(k);
    }
    return out;
}

double full_time(const Instance& inst, int v, int node) {
    return inst.capacity(v) / inst.network().node(node).charge_rate;
}

std::vector<Slot> grouped_slots(const PlanSet& plans, const OpContext& ctx) {
    std::vector<Slot> out;
    for (int v = 0; v < ctx.inst->vehicle_count(); ++v) {
        if (!ctx.active[v]) continue;
        for (std::size_t s = 0; s < plans[v].segments(); ++s)
            if (!plans[v].companions[s].empty()) out.push_back({v, static_cast<int>(s)});
    }
    return out;
}

bool walk_ok(const Plan& p, const Instance& inst, int v) {
    if (!is_simple(expanded_walk(p))) return false;
    return !inst.is_request(v) || tasks_in_order(p, inst.request(v));
}

// Drops detour positions that serve nothing once a platoon is gone.
void strip_unused(PlanSet& plans, const Instance& inst, int u) {
    if (!inst.is_request(u)) {
        const Plan& p = plans[u];
        int last = -1;
        for (std::size_t s = 0; s < p.segments(); ++s)
            if (!p.companions[s].empty()) last = static_cast<int>(s);
        if (last < 0) {
            plans[u] = idle_plan(inst, u);
        } else {
            truncate_after(plans, inst, u, last + 1);
        }
        return;
    }
    for (int k = static_cast<int>(plans[u].positions()) - 2; k >= 1; --k) {
        const Plan& p = plans[u];
        if (is_task(inst.request(u), p.nodes[k]) || is_cs(inst, p.nodes[k])) continue;
        if (!p.companions[k - 1].empty() || !p.companions[k].empty()) continue;
        erase_position(plans, inst, u, k);
    }
}

// Longest run of consecutive shared arcs between two node paths; empty when none.
std::vector<int> common_stretch(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t best = 0, at = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::size_t n = 0;
            while (i + n < a.size() && j + n < b.size() && a[i + n] == b[j + n]) ++n;
            if (n > best) {
                best = n;
                at = i;
            }
        }
    if (best < 2) return {};
    return {a.begin() + static_cast<long>(at), a.begin() + static_cast<long>(at + best)};
}

// Makes stretch a single segment of v; returns it or -1.
int isolate(PlanSet& plans, const Instance& inst, int v, const std::vector<int>& stretch) {
    if (refine_to_include(plans, inst, v, stretch.front()) < 0) return -1;
    if (refine_to_include(plans, inst, v, stretch.back()) < 0) return -1;
    const int s = find_segment(plans[v], stretch.front(), stretch.back());
    if (s < 0 || plans[v].legs[s] != stretch) return -1;
    return s;
}

bool served_by_other(const PlanSet& plans, const Instance& inst, int r, int a, int b, int except) {
    for (int u = inst.request_count(); u < static_cast<int>(plans.size()); ++u) {
        if (u == except) continue;
        const int s = find_segment(plans[u], a, b);
        if (s >= 0 && plans[u].paired[s] == r) return true;
    }
    return false;
}

std::vector<Slot> paired_slots(const PlanSet& plans, const OpContext& ctx) {
    std::vector<Slot> out;
    for (int u = ctx.inst->request_count(); u < ctx.inst->vehicle_count(); ++u) {
        if (!ctx.active[u]) continue;
        for (std::size_t s = 0; s < plans[u].segments(); ++s)
            if (plans[u].paired[s] >= 0) out.push_back({u, static_cast<int>(s)});
    }
    return out;
}

}  // namespace

void truncate_after(PlanSet& plans, const Instance& inst, int v, int pos) {
    Plan& p0 = plans[v];
    if (pos < 0 || pos + 1 >= static_cast<int>(p0.positions())) return;
    for (int s = static_cast<int>(p0.segments()) - 1; s >= pos; --s) leave_group(plans, inst, v, s);
    Plan& p = plans[v];
    const auto n = static_cast<std::size_t>(pos) + 1;
    p.nodes.resize(n);
    p.dwell.resize(n);
    p.wait.resize(n);
    p.arrival.resize(n);
    p.legs.resize(n - 1);
    p.companions.resize(n - 1);
    p.paired.resize(n - 1);
    p.fraction.resize(n - 1);
}

// ---------------------------------------------------------------------------
// Route and dwell

bool op_cs_insert(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const int v = pick_vehicle(plans, ctx, rng, false, 2);
    if (v < 0) return false;
    const int k = rng.below(static_cast<int>(plans[v].segments()));
    if (!inst.is_request(v) && !plans[v].companions[k].empty()) return false;
    Detour d;
    try {
        d = min_detour_cs(inst.network(), inst.distances(), plans[v].nodes[k], plans[v].nodes[k + 1]);
    } catch (const Error&) {
        return false;
    }
    const double dwell = quantize(rng.uniform(0.0, full_time(inst, v, d.cs)), ctx.dwell_resolution);
    PlanSet trial = plans;
    if (!insert_position(trial, inst, v, k + 1, d.cs, dwell) || !walk_ok(trial[v], inst, v)) return false;
    plans = std::move(trial);
    return true;
}

bool op_cs_remove(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const int v = pick_vehicle(plans, ctx, rng, false, 3);
    if (v < 0) return false;
    const auto cs = movable_cs(plans[v], inst, v);
    if (cs.empty()) return false;
    PlanSet trial = plans;
    erase_position(trial, inst, v, rng.pick(cs));
    if (!walk_ok(trial[v], inst, v)) return false;
    plans = std::move(trial);
    return true;
}

bool op_cs_replace(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const int v = pick_vehicle(plans, ctx, rng, false, 3);
    if (v < 0) return false;
    const auto cs = movable_cs(plans[v], inst, v);
    if (cs.empty()) return false;
    const int pos = rng.pick(cs);
    const int old = plans[v].nodes[pos];
    int best = -1;
    for (int c : inst.network().charging_stations()) {
        if (c == old || find_position(plans[v], c) >= 0 || !inst.distances().reachable(old, c)) continue;
        if (best < 0 || inst.distances().dist(old, c) < inst.distances().dist(old, best)) best = c;
    }
    if (best < 0) return false;
    const double dwell = plans[v].dwell[pos];
    PlanSet trial = plans;
    erase_position(trial, inst, v, pos);
    if (!insert_position(trial, inst, v, pos, best, dwell) || !walk_ok(trial[v], inst, v)) return false;
    plans = std::move(trial);
    return true;
}

bool op_cs_swap(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const int v = pick_vehicle(plans, ctx, rng, false, 4);
    if (v < 0) return false;
    const auto cs = movable_cs(plans[v], inst, v);
    if (cs.empty()) return false;
    const int p = rng.pick(cs);
    std::vector<int> nb;
    const int n = static_cast<int>(plans[v].positions());
    if (p - 1 >= 1) nb.push_back(p - 1);
    if (p + 1 <= n - 2) nb.push_back(p + 1);
    if (nb.empty()) return false;
    const int q = rng.pick(nb);
    const int lo = std::min(p, q), hi = std::max(p, q);
    PlanSet trial = plans;
    for (int s = lo - 1; s <= hi; ++s) leave_group(trial, inst, v, s);
    Plan& t = trial[v];
    std::swap(t.nodes[lo], t.nodes[hi]);
    std::swap(t.dwell[lo], t.dwell[hi]);
    for (int s = lo - 1; s <= hi; ++s) {
        if (!inst.distances().reachable(t.nodes[s], t.nodes[s + 1])) return false;
        t.legs[s] = canonical_path(inst.distances(), t.nodes[s], t.nodes[s + 1]);
    }
    if (!walk_ok(t, inst, v)) return false;
    plans = std::move(trial);
    return true;
}

bool op_full_charge(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const int v = pick_vehicle(plans, ctx, rng, false, 2);
    if (v < 0) return false;
    const auto pos = charge_positions(plans[v], inst);
    if (pos.empty()) return false;
    const int k = rng.pick(pos);
    const double t = quantize(full_time(inst, v, plans[v].nodes[k]), ctx.dwell_resolution);
    if (plans[v].dwell[k] == t) return false;
    plans[v].dwell[k] = t;
    return true;
}

bool op_random_dwell(PlanSet& plans, const OpContext& ctx, const Evaluation& eval, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const int v = pick_vehicle(plans, ctx, rng, false, 2);
    if (v < 0) return false;
    const auto pos = charge_positions(plans[v], inst);
    if (pos.empty()) return false;
    const int k = rng.pick(pos);
    const double cur = plans[v].dwell[k];
    const double tmax = full_time(inst, v, plans[v].nodes[k]);
    const double next = eval.feasible ? rng.uniform(0.0, cur) : rng.uniform(cur, std::max(cur, tmax));
    plans[v].dwell[k] = quantize(next, ctx.dwell_resolution);
    return plans[v].dwell[k] != cur;
}

// ---------------------------------------------------------------------------
// Platoons

bool random_platoon_insertion(PlanSet& plans, const Instance& inst, int a, int seg_a, int b, int seg_b, Rng& rng) {
    if (a == b) return false;
    const DistanceMatrix& dm = inst.distances();
    const std::vector<int> pa = plans[a].legs[seg_a], pb = plans[b].legs[seg_b];
    const int ia = pa.front(), ja = pa.back(), ib = pb.front(), jb = pb.back();
    std::vector<int> cand(pa);
    cand.insert(cand.end(), pb.begin(), pb.end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    auto sample = [&]() {
        if (rng.chance(0.5)) return cand;
        std::vector<int> out;
        for (int c : cand)
            if (rng.chance(0.5)) out.push_back(c);
        if (out.empty()) out.push_back(rng.pick(cand));
        return out;
    };
    const auto joins = sample();
    const auto splits = sample();
    int join = -1, split = -1;
    double best = kInf;
    for (int x : joins) {
        const double da = dm.dist(ia, x), db = dm.dist(ib, x);
        if (da == kInf || db == kInf) continue;
        const double score = da + db + std::fabs(da - db);
        if (score < best) {
            best = score;
            join = x;
        }
    }
    if (join < 0) return false;
    best = kInf;
    for (int y : splits) {
        if (y == join || !dm.reachable(join, y)) continue;
        const double da = dm.dist(y, ja), db = dm.dist(y, jb);
        if (da == kInf || db == kInf) continue;
        const double score = da + db + std::fabs(da - db);
        if (score < best) {
            best = score;
            split = y;
        }
    }
    if (split < 0) return false;
    const std::vector<int> shared = canonical_path(dm, join, split);
    PlanSet trial = plans;
    int seg_new[2] = {-1, -1};
    const int who[2] = {a, b}, seg[2] = {seg_a, seg_b};
    for (int m = 0; m < 2; ++m) {
        const int v = who[m];
        const int from = trial[v].nodes[seg[m]], to = trial[v].nodes[seg[m] + 1];
        std::vector<std::vector<int>> legs;
        if (from != join) legs.push_back(canonical_path(dm, from, join));
        legs.push_back(shared);
        if (split != to) legs.push_back(canonical_path(dm, split, to));
        if (!replace_segment(trial, inst, v, seg[m], legs) || !walk_ok(trial[v], inst, v)) return false;
        seg_new[m] = seg[m] + (from != join ? 1 : 0);
    }
    if (!merge_groups(trial, inst, a, seg_new[0], b, seg_new[1])) return false;
    plans = std::move(trial);
    return true;
}

bool op_platoon_insert(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    std::vector<int> vs;
    for (int v : active_vehicles(ctx, true))
        if (plans[v].positions() >= 2) vs.push_back(v);
    if (vs.size() < 2) return false;
    const int a = rng.pick(vs);
    int b = a;
    while (b == a) b = rng.pick(vs);
    return random_platoon_insertion(plans, *ctx.inst, a, rng.below(static_cast<int>(plans[a].segments())), b,
                                    rng.below(static_cast<int>(plans[b].segments())), rng);
}

bool op_platoon_remove(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const auto slots = grouped_slots(plans, ctx);
    if (slots.empty()) return false;
    const auto [v, s] = rng.pick(slots);
    const auto members = group_slots(plans, v, s);
    dissolve_group(plans, *ctx.inst, v, s);
    for (const auto& m : members) strip_unused(plans, *ctx.inst, m.first);
    return true;
}

bool op_platoon_extend(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const auto slots = grouped_slots(plans, ctx);
    if (slots.empty()) return false;
    const auto [v0, s0] = rng.pick(slots);
    const auto members = group_slots(plans, v0, s0);
    PlanSet trial = plans;
    if (rng.chance(0.5)) {
        // Split side. A supplier whose route ends here may follow a request onward.
        std::vector<std::pair<int, int>> follow;  // (supplier, request)
        for (const auto& [u, su] : members) {
            if (inst.is_request(u) || su + 1 != static_cast<int>(plans[u].segments())) continue;
            for (const auto& [w, sw] : members)
                if (inst.is_request(w) && sw + 1 < static_cast<int>(plans[w].segments())) follow.push_back({u, w});
        }
        if (!follow.empty() && rng.chance(0.5)) {
            const auto [u, w] = rng.pick(follow);
            const int pw = find_position(trial[w], trial[u].nodes.back());
            if (pw < 0 || pw + 1 >= static_cast<int>(trial[w].positions())) return false;
            Plan& sp = trial[u];
            const bool was_paired = sp.paired.back() == w;
            sp.nodes.push_back(trial[w].nodes[pw + 1]);
            sp.dwell.push_back(0.0);
            sp.wait.push_back(0.0);
            sp.arrival.push_back(0.0);
            sp.legs.push_back(trial[w].legs[pw]);
            sp.companions.push_back({});
            sp.paired.push_back(-1);
            sp.fraction.push_back(0.0);
            if (!is_simple(expanded_walk(sp))) return false;
            const int ns = static_cast<int>(sp.segments()) - 1;
            if (!merge_groups(trial, inst, w, pw, u, ns)) return false;
            if (was_paired && !served_by_other(trial, inst, w, trial[w].nodes[pw], trial[w].nodes[pw + 1], u))
                trial[u].paired[ns] = w;
            plans = std::move(trial);
            return true;
        }
        std::vector<std::vector<int>> next;
        for (const auto& [u, su] : members) {
            if (su + 1 >= static_cast<int>(plans[u].segments())) return false;
            next.push_back(plans[u].legs[su + 1]);
        }
        std::size_t m = next[0].size();
        for (const auto& l : next) {
            std::size_t k = 0;
            while (k < m && k < l.size() && l[k] == next[0][k]) ++k;
            m = k;
        }
        if (m < 2) return false;
        const std::vector<int> stretch(next[0].begin(), next[0].begin() + static_cast<long>(m));
        std::vector<Slot> segs;
        for (const auto& [u, su] : members) {
            const int s = isolate(trial, inst, u, stretch);
            if (s < 0) return false;
            segs.push_back({u, s});
        }
        for (std::size_t k = 1; k < segs.size(); ++k)
            if (!merge_groups(trial, inst, segs[0].first, segs[0].second, segs[k].first, segs[k].second)) return false;
    } else {
        std::vector<std::vector<int>> prev;
        for (const auto& [u, su] : members) {
            if (su == 0) return false;
            auto l = plans[u].legs[su - 1];
            std::reverse(l.begin(), l.end());
            prev.push_back(std::move(l));
        }
        std::size_t m = prev[0].size();
        for (const auto& l : prev) {
            std::size_t k = 0;
            while (k < m && k < l.size() && l[k] == prev[0][k]) ++k;
            m = k;
        }
        if (m < 2) return false;
        std::vector<int> stretch(prev[0].begin(), prev[0].begin() + static_cast<long>(m));
        std::reverse(stretch.begin(), stretch.end());
        std::vector<Slot> segs;
        for (const auto& [u, su] : members) {
            const int s = isolate(trial, inst, u, stretch);
            if (s < 0) return false;
            segs.push_back({u, s});
        }
        for (std::size_t k = 1; k < segs.size(); ++k)
            if (!merge_groups(trial, inst, segs[0].first, segs[0].second, segs[k].first, segs[k].second)) return false;
    }
    plans = std::move(trial);
    return true;
}

bool op_platoon_merge(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const auto grouped = grouped_slots(plans, ctx);
    if (grouped.empty()) return false;
    struct Cand {
        Slot a, b;
        std::vector<int> stretch;
    };
    std::vector<Cand> cands;
    for (const Slot& g : grouped) {
        const auto members = group_slots(plans, g.first, g.second);
        for (int u = 0; u < inst.vehicle_count(); ++u) {
            if (!ctx.active[u] || u == g.first) continue;
            if (std::any_of(members.begin(), members.end(), [&](const Slot& m) { return m.first == u; })) continue;
            for (std::size_t t = 0; t < plans[u].segments(); ++t) {
                if (!inst.is_request(u) && plans[u].companions[t].empty()) continue;
                auto st = common_stretch(plans[g.first].legs[g.second], plans[u].legs[t]);
                if (!st.empty()) cands.push_back({g, {u, static_cast<int>(t)}, std::move(st)});
            }
        }
    }
    if (cands.empty()) return false;
    const Cand& c = rng.pick(cands);
    PlanSet trial = plans;
    const int sa = isolate(trial, inst, c.a.first, c.stretch);
    if (sa < 0) return false;
    const int sb = isolate(trial, inst, c.b.first, c.stretch);
    if (sb < 0) return false;
    const int sa2 = find_segment(trial[c.a.first], c.stretch.front(), c.stretch.back());
    if (sa2 < 0 || !merge_groups(trial, inst, c.a.first, sa2, c.b.first, sb)) return false;
    plans = std::move(trial);
    return true;
}

bool op_join_platoon(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const DistanceMatrix& dm = inst.distances();
    const auto grouped = grouped_slots(plans, ctx);
    if (grouped.empty()) return false;
    const auto [w, t] = rng.pick(grouped);
    const auto members = group_slots(plans, w, t);
    std::vector<int> outsiders;
    for (int u : active_vehicles(ctx, true))
        if (plans[u].positions() >= 2 &&
            std::none_of(members.begin(), members.end(), [&](const Slot& m) { return m.first == u; }))
            outsiders.push_back(u);
    if (outsiders.empty()) return false;
    const int u = rng.pick(outsiders);
    const std::vector<int> leg = plans[w].legs[t];
    PlanSet trial = plans;
    int su = isolate(trial, inst, u, leg);
    if (su < 0) {
        trial = plans;
        int best_seg = -1;
        double best = kInf;
        for (std::size_t s = 0; s < trial[u].segments(); ++s) {
            const int a = trial[u].nodes[s], b = trial[u].nodes[s + 1];
            const double d = dm.dist(a, leg.front()) + dm.dist(leg.back(), b) - dm.dist(a, b);
            if (d < best) {
                best = d;
                best_seg = static_cast<int>(s);
            }
        }
        if (best_seg < 0 || best == kInf) return false;
        const int a = trial[u].nodes[best_seg], b = trial[u].nodes[best_seg + 1];
        std::vector<std::vector<int>> legs;
        if (a != leg.front()) legs.push_back(canonical_path(dm, a, leg.front()));
        legs.push_back(leg);
        if (leg.back() != b) legs.push_back(canonical_path(dm, leg.back(), b));
        if (!replace_segment(trial, inst, u, best_seg, legs) || !walk_ok(trial[u], inst, u)) return false;
        su = best_seg + (a != leg.front() ? 1 : 0);
    }
    const int tw = find_segment(trial[w], leg.front(), leg.back());
    if (tw < 0 || !merge_groups(trial, inst, w, tw, u, su)) return false;
    plans = std::move(trial);
    return true;
}

// ---------------------------------------------------------------------------
// Suppliers

bool assign_er_es(PlanSet& plans, const Instance& inst, int r, int s, Rng& rng) {
    if (!is_idle(plans[s]) || plans[r].positions() < 2) return false;
    const DistanceMatrix& dm = inst.distances();
    const Network& net = inst.network();
    const Supplier& sup = inst.supplier(s);
    const int o = sup.origin;
    const double top = net.node(o).is_cs ? sup.capacity : sup.initial_soc;
    const double c = inst.params().consumption_rate;
    const std::vector<int> walk = expanded_walk(plans[r]);
    std::vector<int> joins;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
        if (!dm.reachable(o, walk[i])) continue;
        if (top - c * dm.dist(o, walk[i]) < inst.reserve().sigma[walk[i]] - kEnergyTol) continue;
        joins.push_back(static_cast<int>(i));
    }
    if (joins.empty()) return false;
    const int i = rng.pick(joins);
    const int j = i + 1 + rng.below(static_cast<int>(walk.size()) - i - 1);
    PlanSet trial = plans;
    if (refine_to_include(trial, inst, r, walk[i]) < 0 || refine_to_include(trial, inst, r, walk[j]) < 0) return false;
    const int pi = find_position(trial[r], walk[i]), pj = find_position(trial[r], walk[j]);
    if (pi < 0 || pj <= pi) return false;
    const Plan& rp = trial[r];
    std::vector<int> nodes{o};
    std::vector<std::vector<int>> legs;
    if (o != walk[i]) {
        nodes.push_back(walk[i]);
        legs.push_back(canonical_path(dm, o, walk[i]));
    }
    for (int k = pi; k < pj; ++k) {
        nodes.push_back(rp.nodes[k + 1]);
        legs.push_back(rp.legs[k]);
    }
    Plan sp = make_plan(inst, {o});
    sp.nodes = nodes;
    sp.legs = legs;
    const std::size_t n = nodes.size();
    sp.dwell.assign(n, 0.0);
    sp.wait.assign(n, 0.0);
    sp.arrival.assign(n, 0.0);
    sp.companions.assign(n - 1, {});
    sp.paired.assign(n - 1, -1);
    sp.fraction.assign(n - 1, 0.0);
    if (!is_simple(expanded_walk(sp))) return false;
    trial[s] = std::move(sp);
    const int off = o != walk[i] ? 1 : 0;
    bool joined = false;
    for (int k = pi; k < pj; ++k) {
        const int sk = k - pi + off;
        if (!merge_groups(trial, inst, r, k, s, sk)) continue;
        joined = true;
        if (!served_by_other(trial, inst, r, trial[r].nodes[k], trial[r].nodes[k + 1], s)) trial[s].paired[sk] = r;
    }
    if (!joined) return false;
    plans = std::move(trial);
    return true;
}

bool op_assign_supplier(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    std::vector<int> sups;
    for (int u = inst.request_count(); u < inst.vehicle_count(); ++u)
        if (ctx.active[u]) sups.push_back(u);
    const auto reqs = active_vehicles(ctx, true);
    if (sups.empty() || reqs.empty()) return false;
    const int s = rng.pick(sups);
    PlanSet trial = plans;
    if (!is_idle(trial[s])) {
        clear_all_groups(trial, inst, s);
        trial[s] = idle_plan(inst, s);
        for (int r : reqs) strip_unused(trial, inst, r);
    }
    if (!assign_er_es(trial, inst, rng.pick(reqs), s, rng)) return false;
    plans = std::move(trial);
    return true;
}

bool op_switch_pairing(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    std::vector<std::pair<Slot, int>> options;
    for (int u = inst.request_count(); u < inst.vehicle_count(); ++u) {
        if (!ctx.active[u]) continue;
        const Plan& p = plans[u];
        for (std::size_t s = 0; s < p.segments(); ++s)
            for (int r : p.companions[s])
                if (inst.is_request(r) && r != p.paired[s] &&
                    !served_by_other(plans, inst, r, p.nodes[s], p.nodes[s + 1], u))
                    options.push_back({{u, static_cast<int>(s)}, r});
    }
    if (options.empty()) return false;
    const auto& [slot, r] = rng.pick(options);
    plans[slot.first].paired[slot.second] = r;
    return true;
}

bool op_fraction_full(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const auto slots = paired_slots(plans, ctx);
    if (slots.empty()) return false;
    const auto [u, s] = rng.pick(slots);
    if (plans[u].fraction[s] == 1.0) return false;
    plans[u].fraction[s] = 1.0;
    return true;
}

bool op_fraction_empty(PlanSet& plans, const OpContext& ctx, Rng& rng) {
    const auto slots = paired_slots(plans, ctx);
    if (slots.empty()) return false;
    const auto [u, s] = rng.pick(slots);
    plans[u].fraction[s] = 0.0;
    plans[u].paired[s] = -1;
    return true;
}

bool op_random_fraction(PlanSet& plans, const OpContext& ctx, const Evaluation& eval, Rng& rng) {
    const auto slots = paired_slots(plans, ctx);
    if (slots.empty()) return false;
    const auto [u, s] = rng.pick(slots);
    const double cur = plans[u].fraction[s];
    const double next = eval.feasible ? rng.uniform(0.0, cur) : rng.uniform(cur, 1.0);
    plans[u].fraction[s] = std::min(1.0, std::round(next * 1e4) / 1e4);
    return plans[u].fraction[s] != cur;
}

// ---------------------------------------------------------------------------

std::vector<NamedOperator> make_operators(const OpContext& ctx, const std::vector<OperatorFamily>& families) {
    std::vector<NamedOperator> ops;
    auto add = [&](const char* name, auto fn) {
        ops.push_back({name, [ctx, fn](PlanSet& p, const Evaluation&, Rng& r) { return fn(p, ctx, r); }});
    };
    auto add_e = [&](const char* name, auto fn) {
        ops.push_back({name, [ctx, fn](PlanSet& p, const Evaluation& e, Rng& r) { return fn(p, ctx, e, r); }});
    };
    for (OperatorFamily f : families) {
        switch (f) {
            case OperatorFamily::Route:
                add("cs_insert", op_cs_insert);
                add("cs_remove", op_cs_remove);
                add("cs_replace", op_cs_replace);
                add("cs_swap", op_cs_swap);
                add("full_charge", op_full_charge);
                add_e("random_dwell", op_random_dwell);
                break;
            case OperatorFamily::Platoon:
                add("platoon_insert", op_platoon_insert);
                add("platoon_remove", op_platoon_remove);
                add("platoon_extend", op_platoon_extend);
                add("platoon_merge", op_platoon_merge);
                add("join_platoon", op_join_platoon);
                break;
            case OperatorFamily::Supplier:
                add("assign_supplier", op_assign_supplier);
                add("switch_pairing", op_switch_pairing);
                add("fraction_full", op_fraction_full);
                add("fraction_empty", op_fraction_empty);
                add_e("random_fraction", op_random_fraction);
                break;
        }
    }
    return ops;
}

std::uint64_t plan_fingerprint(const PlanSet& plans) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::int64_t x) {
        unsigned char b[8];
        std::memcpy(b, &x, 8);
        for (unsigned char c : b) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const Plan& p : plans) {
        mix(-1);
        for (int n : p.nodes) mix(n);
        for (const auto& l : p.legs) {
            mix(-2);
            for (int n : l) mix(n);
        }
        for (double d : p.dwell) mix(std::llround(d * 1e4));
        for (const auto& c : p.companions) {
            mix(-3);
            for (int u : c) mix(u);
        }
        for (int r : p.paired) mix(r);
        for (double f : p.fraction) mix(std::llround(f * 1e6));
    }
    return h;
}

}  // namespace pv2vc
