#include "pv2vc/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

namespace pv2vc {

std::vector<bool> default_active(const Instance& inst, Scenario scenario) {
    std::vector<bool> a(static_cast<std::size_t>(inst.vehicle_count()), false);
    for (int v = 0; v < inst.vehicle_count(); ++v) a[v] = inst.is_request(v) || scenario == Scenario::Pv2vc;
    return a;
}

namespace {

bool sorted_unique(const std::vector<int>& v) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] <= v[k - 1]) return false;
    return true;
}

}  // namespace

std::vector<std::string> check_structure(const PlanSet& plans, const Instance& inst, const std::vector<bool>& active,
                                         Scenario scenario) {
    std::vector<std::string> out;
    const Network& net = inst.network();
    const int nv = inst.vehicle_count();
    if (static_cast<int>(plans.size()) != nv) {
        out.push_back(fmt::format("plan set has {} plans for {} vehicles", plans.size(), nv));
        return out;
    }
    for (int v = 0; v < nv; ++v) {
        if (!active[v]) continue;
        const Plan& p = plans[v];
        const std::string& id = inst.vehicle_label(v);
        const std::size_t n = p.nodes.size();
        if (n == 0 || p.dwell.size() != n || p.wait.size() != n || p.arrival.size() != n ||
            p.legs.size() != n - 1 || p.companions.size() != n - 1 || p.paired.size() != n - 1 ||
            p.fraction.size() != n - 1) {
            out.push_back(fmt::format("{}: layer sizes inconsistent", id));
            continue;
        }
        if (inst.is_request(v)) {
            if (!tasks_in_order(p, inst.request(v))) out.push_back(fmt::format("{}: task sequence not preserved", id));
        } else if (p.nodes.front() != inst.supplier(v).origin) {
            out.push_back(fmt::format("{}: route does not start at the supplier origin", id));
        }
        bool legs_ok = true;
        for (std::size_t s = 0; s + 1 < n; ++s) {
            const auto& leg = p.legs[s];
            if (leg.size() < 2 || leg.front() != p.nodes[s] || leg.back() != p.nodes[s + 1]) {
                legs_ok = false;
                break;
            }
            for (std::size_t k = 1; k < leg.size(); ++k)
                if (net.find_arc(leg[k - 1], leg[k]) < 0) legs_ok = false;
        }
        if (!legs_ok) {
            out.push_back(fmt::format("{}: segment path does not follow network arcs", id));
            continue;
        }
        if (!is_simple(expanded_walk(p))) out.push_back(fmt::format("{}: route revisits a node", id));
        for (std::size_t k = 0; k < n; ++k)
            if (!(p.dwell[k] >= 0.0) || !std::isfinite(p.dwell[k]))
                out.push_back(fmt::format("{}: invalid dwell at position {}", id, k));
        for (std::size_t s = 0; s + 1 < n; ++s) {
            const auto& comp = p.companions[s];
            if (!(p.fraction[s] >= 0.0 && p.fraction[s] <= 1.0))
                out.push_back(fmt::format("{}: transfer fraction outside [0,1]", id));
            if (inst.is_request(v) && (p.paired[s] != -1 || p.fraction[s] != 0.0))
                out.push_back(fmt::format("{}: requests cannot send energy", id));
            if (p.fraction[s] > 0.0 && p.paired[s] < 0)
                out.push_back(fmt::format("{}: transfer without a paired request", id));
            if (p.paired[s] >= 0 && (!inst.is_request(p.paired[s]) ||
                                     std::find(comp.begin(), comp.end(), p.paired[s]) == comp.end()))
                out.push_back(fmt::format("{}: paired vehicle not platooned on the segment", id));
            if (comp.empty()) continue;
            if (scenario == Scenario::Evrp) {
                out.push_back(fmt::format("{}: platoons are not part of this scenario", id));
                continue;
            }
            if (!sorted_unique(comp)) out.push_back(fmt::format("{}: companion list not sorted/unique", id));
            int requests = inst.is_request(v) ? 1 : 0, suppliers = inst.is_request(v) ? 0 : 1;
            for (int u : comp) {
                if (u < 0 || u >= nv || u == v || !active[u]) {
                    out.push_back(fmt::format("{}: invalid companion", id));
                    continue;
                }
                (inst.is_request(u) ? requests : suppliers)++;
                const int su = find_segment(plans[u], p.nodes[s], p.nodes[s + 1]);
                if (su < 0) {
                    out.push_back(fmt::format("{}: companion {} lacks the segment", id, inst.vehicle_label(u)));
                    continue;
                }
                if (plans[u].legs[su] != p.legs[s])
                    out.push_back(fmt::format("{}: companion {} follows a different path", id, inst.vehicle_label(u)));
                std::vector<int> expect;
                for (int w : comp)
                    if (w != u) expect.push_back(w);
                expect.push_back(v);
                std::sort(expect.begin(), expect.end());
                if (plans[u].companions[su] != expect)
                    out.push_back(fmt::format("{}: companion sets not symmetric with {}", id, inst.vehicle_label(u)));
            }
            if (requests == 0 || suppliers > requests)
                out.push_back(fmt::format("{}: platoon needs at least as many requests as suppliers", id));
        }
    }
    // At most one supplier serving a request on a segment.
    std::map<std::tuple<int, int, int>, int> served;
    for (int v = inst.request_count(); v < nv; ++v) {
        if (!active[v]) continue;
        const Plan& p = plans[v];
        for (std::size_t s = 0; s < p.segments() && p.paired.size() == p.segments(); ++s) {
            if (p.paired[s] < 0) continue;
            if (++served[{p.paired[s], p.nodes[s], p.nodes[s + 1]}] > 1)
                out.push_back(fmt::format("{}: one-supplier-per-request rule violated", inst.vehicle_label(p.paired[s])));
        }
    }
    return out;
}

bool try_synchronize(PlanSet& plans, const Instance& inst, const std::vector<bool>& active) {
    const Network& net = inst.network();
    const int nv = static_cast<int>(plans.size());
    std::vector<std::size_t> pos(nv, 0);
    std::vector<bool> done(nv, true);
    for (int v = 0; v < nv; ++v) {
        if (!active[v]) continue;
        Plan& p = plans[v];
        std::fill(p.wait.begin(), p.wait.end(), 0.0);
        p.arrival.assign(p.nodes.size(), 0.0);
        p.arrival[0] = inst.start_time(v);
        done[v] = p.nodes.size() <= 1;
    }
    while (true) {
        bool progress = false, all_done = true;
        for (int v = 0; v < nv; ++v) {
            if (done[v]) continue;
            all_done = false;
            Plan& p = plans[v];
            const std::size_t s = pos[v];
            const auto slots = group_slots(plans, v, static_cast<int>(s));
            bool ready = true;
            for (const auto& [u, su] : slots)
                if (done[u] || pos[u] != static_cast<std::size_t>(su)) ready = false;
            if (!ready) continue;
            double depart = 0.0;
            for (const auto& [u, su] : slots) depart = std::max(depart, plans[u].arrival[su] + plans[u].dwell[su]);
            const double t = path_time(net, p.legs[s]);
            for (const auto& [u, su] : slots) {
                Plan& q = plans[u];
                q.wait[su] = depart - (q.arrival[su] + q.dwell[su]);
                q.arrival[su + 1] = depart + t;
                if (++pos[u] + 1 >= q.nodes.size()) done[u] = true;
            }
            progress = true;
        }
        if (all_done) return true;
        if (!progress) return false;
    }
}

void synchronize(PlanSet& plans, const Instance& inst, const std::vector<bool>& active) {
    if (!try_synchronize(plans, inst, active)) throw Error("unsynchronizable");
}

EnergyTrace simulate_energy(const PlanSet& plans, const Instance& inst, const std::vector<bool>& active) {
    const Network& net = inst.network();
    const Params& prm = inst.params();
    const int nv = static_cast<int>(plans.size());

    // (request, segment) -> (supplier, fraction)
    std::map<std::pair<int, int>, std::pair<int, double>> incoming;
    for (int s = inst.request_count(); s < nv; ++s) {
        if (!active[s]) continue;
        const Plan& p = plans[s];
        for (std::size_t k = 0; k < p.segments(); ++k) {
            const int r = p.paired[k];
            if (r < 0) continue;
            const auto& comp = p.companions[k];
            if (std::find(comp.begin(), comp.end(), r) == comp.end())
                throw Error(fmt::format("{}: paired vehicle not in the companion set", inst.vehicle_label(s)));
            const int rk = find_segment(plans[r], p.nodes[k], p.nodes[k + 1]);
            if (rk < 0) throw Error(fmt::format("{}: paired request lacks the segment", inst.vehicle_label(s)));
            if (!incoming.emplace(std::make_pair(r, rk), std::make_pair(s, p.fraction[k])).second)
                throw Error("one-supplier-per-ER violated");
        }
    }

    EnergyTrace trace;
    trace.vehicles.resize(static_cast<std::size_t>(nv));
    for (int v = 0; v < nv; ++v) {
        if (!active[v]) continue;
        const Plan& p = plans[v];
        VehicleTrace& vt = trace.vehicles[v];
        const bool req = inst.is_request(v);
        const double cap = inst.capacity(v);
        double soc = inst.initial_soc(v);
        const std::size_t n = p.nodes.size();
        vt.soc_arrival.assign(n, 0.0);
        vt.charge.assign(n, 0.0);
        vt.clamped.assign(n, false);
        vt.segments.assign(n ? n - 1 : 0, {});
        for (std::size_t k = 0; k < n; ++k) {
            vt.soc_arrival[k] = soc;
            const Node& node = net.node(p.nodes[k]);
            if (node.is_cs) {
                const double offered = node.charge_rate * p.total_dwell(k);
                const double room = std::max(0.0, cap - soc);
                vt.charge[k] = std::min(offered, room);
                vt.clamped[k] = offered > room + kEnergyTol;
                soc += vt.charge[k];
            }
            if (k + 1 == n) break;
            SegmentTrace& st = vt.segments[k];
            st.platooned = !p.companions[k].empty();
            double send_rate = 0.0, recv_rate = 0.0;
            if (!req && p.paired[k] >= 0) send_rate = inst.supplier(v).transfer_rate * p.fraction[k];
            if (req) {
                const auto it = incoming.find({v, static_cast<int>(k)});
                if (it != incoming.end()) recv_rate = inst.supplier(it->second.first).transfer_rate * it->second.second;
            }
            const auto& leg = p.legs[k];
            st.node_soc.reserve(leg.size() - 1);
            for (std::size_t a = 1; a < leg.size(); ++a) {
                const Arc& arc = net.arc_between(leg[a - 1], leg[a]);
                const double cons =
                    arc.consumption_rate * arc.distance * (1.0 - (st.platooned ? prm.platoon_saving : 0.0));
                st.consumption += cons;
                const double out = send_rate * arc.travel_time;
                const double in = recv_rate * arc.travel_time;
                st.transfer_out += out;
                st.transfer_in += in;
                soc += prm.transfer_efficiency * in - out - cons;
                st.node_soc.push_back(soc);
            }
        }
        vt.final_soc = soc;
    }
    return trace;
}

Evaluation evaluate(const PlanSet& plans, const Instance& inst, const EnergyTrace& trace, const EvalOptions& opts) {
    Evaluation ev;
    ev.scenario = opts.scenario;
    ev.active = opts.active.empty() ? default_active(inst, opts.scenario) : opts.active;
    const Network& net = inst.network();
    const Params& prm = inst.params();
    const int nv = inst.vehicle_count();
    ev.vehicles.assign(static_cast<std::size_t>(nv), {});
    double penalty = 0.0;
    double objective = 0.0;
    for (int v = 0; v < nv; ++v) {
        if (!ev.active[v]) continue;
        const Plan& p = plans[v];
        const VehicleTrace& vt = trace.vehicles[v];
        const bool req = inst.is_request(v);
        const double cap = inst.capacity(v);
        auto check = [&](int node, double soc) {
            const double floor = inst.floor_at(v, node);
            if (soc < floor - kEnergyTol) penalty += floor - soc;
            if (soc > cap + kEnergyTol)
                ev.violations.push_back(fmt::format("{}: capacity exceeded at node {}", inst.vehicle_label(v),
                                                    net.node(node).label));
        };
        CostBreakdown& c = ev.vehicles[v];
        for (std::size_t k = 0; k < p.nodes.size(); ++k) {
            check(p.nodes[k], vt.soc_arrival[k]);
            if (vt.clamped[k]) ev.clamped = true;
            const double d = p.total_dwell(k);
            if (k + 1 < p.nodes.size() || !req) {
                (net.node(p.nodes[k]).is_cs ? c.charge_minutes : c.wait_minutes) += d;
            }
            if (k + 1 == p.nodes.size()) break;
            const auto& seg = vt.segments[k];
            const auto& leg = p.legs[k];
            for (std::size_t a = 1; a + 1 < leg.size(); ++a) check(leg[a], seg.node_soc[a - 1]);
            c.energy += seg.consumption;
            c.driving_minutes += path_time(net, leg);
        }
        if (req) {
            const double span = p.arrival.back() - inst.start_time(v);
            c.travel_minutes = span - c.charge_minutes;
            c.total = prm.alpha * c.energy + prm.beta * span;
            objective += c.total;
        } else {
            c.travel_minutes = c.driving_minutes;
            c.total = prm.alpha * c.energy + prm.beta * (c.charge_minutes + c.driving_minutes);
        }
    }
    ev.penalty = penalty;
    ev.objective = objective;
    ev.feasible = penalty == 0.0 && ev.violations.empty();
    return ev;
}

Evaluation assess(PlanSet& plans, const Instance& inst, const EvalOptions& opts, EnergyTrace* trace_out) {
    const std::vector<bool> active = opts.active.empty() ? default_active(inst, opts.scenario) : opts.active;
    Evaluation ev;
    ev.scenario = opts.scenario;
    ev.active = active;
    ev.violations = check_structure(plans, inst, active, opts.scenario);
    if (ev.violations.empty() && !try_synchronize(plans, inst, active)) ev.violations.push_back("unsynchronizable");
    if (!ev.violations.empty()) {
        ev.feasible = false;
        ev.vehicles.assign(static_cast<std::size_t>(inst.vehicle_count()), {});
        return ev;
    }
    EnergyTrace trace;
    try {
        trace = simulate_energy(plans, inst, active);
    } catch (const Error& e) {
        ev.violations.push_back(e.what());
        ev.vehicles.assign(static_cast<std::size_t>(inst.vehicle_count()), {});
        return ev;
    }
    EvalOptions o = opts;
    o.active = active;
    Evaluation out = evaluate(plans, inst, trace, o);
    if (trace_out) *trace_out = std::move(trace);
    return out;
}

double percent_change(double value, double baseline) {
    if (baseline == 0.0) return value == 0.0 ? 0.0 : kInf;
    return (value - baseline) / baseline * 100.0;
}

std::string route_text(const Instance& inst, const Plan& plan) {
    std::string s;
    for (int n : expanded_walk(plan)) {
        if (!s.empty()) s += "-";
        s += std::to_string(inst.network().node(n).label);
    }
    return s;
}

BreakdownReport breakdown_report(const PlanSet& plans, const Instance& inst, const Evaluation& eval,
                                 const Evaluation* baseline) {
    BreakdownReport rep;
    auto delta = [](double value, double base) -> std::optional<double> {
        const double d = percent_change(value, base);
        if (!std::isfinite(d)) return std::nullopt;
        return d;
    };
    for (int v = 0; v < inst.vehicle_count(); ++v) {
        if (!eval.active[v]) continue;
        const Plan& p = plans[v];
        if (!inst.is_request(v) && is_idle(p)) continue;
        BreakdownRow row;
        row.vehicle = inst.vehicle_label(v);
        row.is_request = inst.is_request(v);
        row.route = route_text(inst, p);
        row.cost = eval.vehicles[v];
        if (baseline && v < static_cast<int>(baseline->active.size()) && baseline->active[v]) {
            const CostBreakdown& b = baseline->vehicles[v];
            row.energy_delta = delta(row.cost.energy, b.energy);
            row.charge_delta = delta(row.cost.charge_minutes, b.charge_minutes);
            row.travel_delta = delta(row.cost.travel_minutes, b.travel_minutes);
            row.total_delta = delta(row.cost.total, b.total);
        }
        if (row.is_request) rep.request_total += row.cost.total;
        rep.rows.push_back(std::move(row));
    }
    if (baseline) rep.request_total_delta = delta(rep.request_total, baseline->objective);
    return rep;
}

}  // namespace pv2vc
