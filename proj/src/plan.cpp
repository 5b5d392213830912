#include "pv2vc/plan.hpp"

#include <algorithm>
#include <set>

namespace pv2vc {

Plan make_plan(const Instance& inst, const std::vector<int>& nodes) {
    Plan p;
    p.nodes = nodes;
    const std::size_t n = nodes.size();
    p.dwell.assign(n, 0.0);
    p.wait.assign(n, 0.0);
    p.arrival.assign(n, 0.0);
    const std::size_t s = n ? n - 1 : 0;
    p.legs.reserve(s);
    for (std::size_t k = 0; k < s; ++k) p.legs.push_back(canonical_path(inst.distances(), nodes[k], nodes[k + 1]));
    p.companions.assign(s, {});
    p.paired.assign(s, -1);
    p.fraction.assign(s, 0.0);
    return p;
}

Plan idle_plan(const Instance& inst, int vehicle) { return make_plan(inst, {inst.origin(vehicle)}); }

PlanSet bare_plan_set(const Instance& inst) {
    PlanSet out;
    for (int v = 0; v < inst.vehicle_count(); ++v)
        out.push_back(inst.is_request(v) ? make_plan(inst, inst.request(v).tasks) : idle_plan(inst, v));
    return out;
}

std::vector<int> expanded_walk(const Plan& plan) {
    std::vector<int> w;
    if (plan.nodes.empty()) return w;
    w.push_back(plan.nodes.front());
    for (const auto& leg : plan.legs) w.insert(w.end(), leg.begin() + 1, leg.end());
    return w;
}

bool is_simple(const std::vector<int>& walk) {
    std::set<int> seen;
    for (int n : walk)
        if (!seen.insert(n).second) return false;
    return true;
}

int find_segment(const Plan& plan, int a, int b) {
    for (std::size_t k = 0; k + 1 < plan.nodes.size(); ++k)
        if (plan.nodes[k] == a && plan.nodes[k + 1] == b) return static_cast<int>(k);
    return -1;
}

int find_position(const Plan& plan, int node) {
    for (std::size_t k = 0; k < plan.nodes.size(); ++k)
        if (plan.nodes[k] == node) return static_cast<int>(k);
    return -1;
}

bool is_idle(const Plan& plan) { return plan.nodes.size() <= 1; }

bool has_groups(const Plan& plan) {
    return std::any_of(plan.companions.begin(), plan.companions.end(), [](const auto& c) { return !c.empty(); });
}

bool is_task(const Request& r, int node) { return std::find(r.tasks.begin(), r.tasks.end(), node) != r.tasks.end(); }

bool tasks_in_order(const Plan& plan, const Request& r) {
    if (plan.nodes.empty() || plan.nodes.front() != r.origin() || plan.nodes.back() != r.destination()) return false;
    std::size_t k = 0;
    for (int n : plan.nodes)
        if (k < r.tasks.size() && n == r.tasks[k]) ++k;
    return k == r.tasks.size();
}

std::vector<Slot> group_slots(const PlanSet& plans, int v, int seg) {
    std::vector<Slot> out{{v, seg}};
    const Plan& p = plans[v];
    const int a = p.nodes[seg], b = p.nodes[seg + 1];
    for (int u : p.companions[seg]) {
        const int s = find_segment(plans[u], a, b);
        if (s >= 0) out.push_back({u, s});
    }
    std::sort(out.begin(), out.end());
    return out;
}

void assign_group(PlanSet& plans, const std::vector<Slot>& slots) {
    for (const auto& [v, s] : slots) {
        auto& c = plans[v].companions[s];
        c.clear();
        for (const auto& [u, su] : slots)
            if (u != v) c.push_back(u);
        std::sort(c.begin(), c.end());
    }
}

namespace {

bool group_shape_ok(const Instance& inst, const std::vector<Slot>& slots) {
    if (slots.size() < 2) return false;
    int requests = 0, suppliers = 0;
    for (const auto& [v, s] : slots) (inst.is_request(v) ? requests : suppliers)++;
    return requests >= 1 && suppliers <= requests;
}

void clear_slot(PlanSet& plans, const Slot& slot) {
    auto& p = plans[slot.first];
    p.companions[slot.second].clear();
    p.paired[slot.second] = -1;
    p.fraction[slot.second] = 0.0;
}

}  // namespace

void dissolve_group(PlanSet& plans, const Instance&, int v, int seg) {
    for (const Slot& s : group_slots(plans, v, seg)) clear_slot(plans, s);
}

void leave_group(PlanSet& plans, const Instance& inst, int v, int seg) {
    if (plans[v].companions[seg].empty()) {
        plans[v].paired[seg] = -1;
        plans[v].fraction[seg] = 0.0;
        return;
    }
    auto slots = group_slots(plans, v, seg);
    std::vector<Slot> rest;
    for (const Slot& s : slots)
        if (s.first != v) rest.push_back(s);
    clear_slot(plans, {v, seg});
    for (const Slot& s : rest) {
        auto& p = plans[s.first];
        if (p.paired[s.second] == v) {
            p.paired[s.second] = -1;
            p.fraction[s.second] = 0.0;
        }
    }
    if (group_shape_ok(inst, rest)) {
        assign_group(plans, rest);
    } else {
        for (const Slot& s : rest) clear_slot(plans, s);
    }
}

void clear_all_groups(PlanSet& plans, const Instance& inst, int v) {
    for (std::size_t s = 0; s < plans[v].segments(); ++s) leave_group(plans, inst, v, static_cast<int>(s));
}

bool split_segment(PlanSet& plans, const Instance& inst, int v, int seg, int node) {
    const auto slots = group_slots(plans, v, seg);
    for (const auto& [u, s] : slots) {
        Plan& p = plans[u];
        const int a = p.nodes[s], b = p.nodes[s + 1];
        if (node == a || node == b) return false;
        const auto& leg = p.legs[s];
        std::vector<int> first, second;
        const auto it = std::find(leg.begin() + 1, leg.end() - 1, node);
        if (it != leg.end() - 1) {
            first.assign(leg.begin(), it + 1);
            second.assign(it, leg.end());
        } else {
            const DistanceMatrix& dm = inst.distances();
            if (!dm.reachable(a, node) || !dm.reachable(node, b)) return false;
            first = canonical_path(dm, a, node);
            second = canonical_path(dm, node, b);
        }
        const auto comp = p.companions[s];
        const int pr = p.paired[s];
        const double fr = p.fraction[s];
        p.nodes.insert(p.nodes.begin() + s + 1, node);
        p.dwell.insert(p.dwell.begin() + s + 1, 0.0);
        p.wait.insert(p.wait.begin() + s + 1, 0.0);
        p.arrival.insert(p.arrival.begin() + s + 1, 0.0);
        p.legs[s] = std::move(first);
        p.legs.insert(p.legs.begin() + s + 1, std::move(second));
        p.companions.insert(p.companions.begin() + s + 1, comp);
        p.paired.insert(p.paired.begin() + s + 1, pr);
        p.fraction.insert(p.fraction.begin() + s + 1, fr);
        if (!is_simple(expanded_walk(p))) return false;
    }
    return true;
}

void erase_position(PlanSet& plans, const Instance& inst, int v, int pos) {
    Plan& p0 = plans[v];
    if (pos <= 0 || pos + 1 >= static_cast<int>(p0.positions())) return;
    leave_group(plans, inst, v, pos - 1);
    leave_group(plans, inst, v, pos);
    Plan& p = plans[v];
    p.nodes.erase(p.nodes.begin() + pos);
    p.dwell.erase(p.dwell.begin() + pos);
    p.wait.erase(p.wait.begin() + pos);
    p.arrival.erase(p.arrival.begin() + pos);
    p.legs.erase(p.legs.begin() + pos);
    p.companions.erase(p.companions.begin() + pos);
    p.paired.erase(p.paired.begin() + pos);
    p.fraction.erase(p.fraction.begin() + pos);
    p.legs[pos - 1] = canonical_path(inst.distances(), p.nodes[pos - 1], p.nodes[pos]);
}

bool insert_position(PlanSet& plans, const Instance& inst, int v, int pos, int node, double dwell) {
    if (pos <= 0 || pos >= static_cast<int>(plans[v].positions())) return false;
    leave_group(plans, inst, v, pos - 1);
    // Solo insertion always takes the shortest detour through the node.
    Plan& p = plans[v];
    const int a = p.nodes[pos - 1], b = p.nodes[pos];
    if (node == a || node == b) return false;
    const DistanceMatrix& dm = inst.distances();
    if (!dm.reachable(a, node) || !dm.reachable(node, b)) return false;
    p.nodes.insert(p.nodes.begin() + pos, node);
    p.dwell.insert(p.dwell.begin() + pos, dwell);
    p.wait.insert(p.wait.begin() + pos, 0.0);
    p.arrival.insert(p.arrival.begin() + pos, 0.0);
    p.legs[pos - 1] = canonical_path(dm, a, node);
    p.legs.insert(p.legs.begin() + pos, canonical_path(dm, node, b));
    p.companions.insert(p.companions.begin() + pos, std::vector<int>{});
    p.paired.insert(p.paired.begin() + pos, -1);
    p.fraction.insert(p.fraction.begin() + pos, 0.0);
    return is_simple(expanded_walk(p));
}

int refine_to_include(PlanSet& plans, const Instance& inst, int v, int node) {
    const int pos = find_position(plans[v], node);
    if (pos >= 0) return pos;
    const Plan& p = plans[v];
    for (std::size_t s = 0; s < p.segments(); ++s) {
        const auto& leg = p.legs[s];
        if (std::find(leg.begin() + 1, leg.end() - 1, node) != leg.end() - 1) {
            if (!split_segment(plans, inst, v, static_cast<int>(s), node)) return -1;
            return static_cast<int>(s) + 1;
        }
    }
    return -1;
}

int ensure_segment(PlanSet& plans, const Instance& inst, int v, const std::vector<int>& leg) {
    if (leg.size() < 2) return -1;
    const int a = leg.front(), b = leg.back();
    const auto walk = expanded_walk(plans[v]);
    const auto ia = std::find(walk.begin(), walk.end(), a);
    if (ia == walk.end() || walk.end() - ia < static_cast<long>(leg.size())) return -1;
    if (!std::equal(leg.begin(), leg.end(), ia)) return -1;
    if (refine_to_include(plans, inst, v, a) < 0) return -1;
    if (refine_to_include(plans, inst, v, b) < 0) return -1;
    Plan& p = plans[v];
    const int pa = find_position(p, a), pb = find_position(p, b);
    if (pa < 0 || pb <= pa) return -1;
    if (pb == pa + 1) return p.legs[pa] == leg ? pa : -1;
    for (int k = pa + 1; k < pb; ++k) {
        if (inst.is_request(v) && is_task(inst.request(v), p.nodes[k])) return -1;
    }
    for (int k = pb - 1; k > pa; --k) erase_position(plans, inst, v, k);
    Plan& q = plans[v];
    const int s = find_segment(q, a, b);
    if (s < 0) return -1;
    q.legs[s] = leg;  // the physical path is unchanged by collapsing intermediate stops
    return s;
}

bool replace_segment(PlanSet& plans, const Instance& inst, int v, int seg, const std::vector<std::vector<int>>& legs) {
    if (legs.empty()) return false;
    Plan& p0 = plans[v];
    if (legs.front().front() != p0.nodes[seg] || legs.back().back() != p0.nodes[seg + 1]) return false;
    for (std::size_t k = 0; k < legs.size(); ++k) {
        if (legs[k].size() < 2) return false;
        if (k && legs[k].front() != legs[k - 1].back()) return false;
    }
    leave_group(plans, inst, v, seg);
    Plan& p = plans[v];
    const auto at = static_cast<long>(seg) + 1;
    const std::size_t extra = legs.size() - 1;
    std::vector<int> mids;
    for (std::size_t k = 0; k < extra; ++k) mids.push_back(legs[k].back());
    p.nodes.insert(p.nodes.begin() + at, mids.begin(), mids.end());
    p.dwell.insert(p.dwell.begin() + at, extra, 0.0);
    p.wait.insert(p.wait.begin() + at, extra, 0.0);
    p.arrival.insert(p.arrival.begin() + at, extra, 0.0);
    p.legs[seg] = legs.front();
    p.legs.insert(p.legs.begin() + at, legs.begin() + 1, legs.end());
    p.companions.insert(p.companions.begin() + at, extra, std::vector<int>{});
    p.paired.insert(p.paired.begin() + at, extra, -1);
    p.fraction.insert(p.fraction.begin() + at, extra, 0.0);
    return is_simple(expanded_walk(p));
}

bool merge_groups(PlanSet& plans, const Instance& inst, int v, int seg_v, int u, int seg_u) {
    if (plans[v].legs[seg_v] != plans[u].legs[seg_u]) return false;
    auto a = group_slots(plans, v, seg_v);
    auto b = group_slots(plans, u, seg_u);
    std::vector<Slot> all = a;
    for (const Slot& s : b)
        if (std::find(all.begin(), all.end(), s) == all.end()) all.push_back(s);
    std::sort(all.begin(), all.end());
    for (std::size_t k = 1; k < all.size(); ++k)
        if (all[k].first == all[k - 1].first) return false;
    if (!group_shape_ok(inst, all)) return false;
    assign_group(plans, all);
    // One supplier per request on a segment: keep the lowest-index supplier's pairing.
    std::set<int> served;
    for (const auto& [w, s] : all) {
        if (inst.is_request(w)) continue;
        Plan& p = plans[w];
        if (p.paired[s] < 0) continue;
        if (!served.insert(p.paired[s]).second) {
            p.paired[s] = -1;
            p.fraction[s] = 0.0;
        }
    }
    return true;
}

void normalize(Plan& plan, const Instance& inst) {
    const Network& net = inst.network();
    for (std::size_t k = 0; k < plan.positions(); ++k) {
        if (k + 1 == plan.positions() || !net.node(plan.nodes[k]).is_cs) plan.dwell[k] = 0.0;
        plan.wait[k] = 0.0;
    }
}

}  // namespace pv2vc
