#include "pv2vc/repair.hpp"

#include <algorithm>
#include <cmath>

namespace pv2vc {

double quantize_up(double value, double step) {
    if (value <= 0.0) return 0.0;
    const double q = std::ceil(value / step - 1e-9) * step;
    return std::round(q / step) * step;
}

namespace {

struct Shortage {
    int vehicle = -1;
    int last_segment = -1;  // segments 0..last_segment precede the short node
    int last_cs = -1;       // positions 0..last_cs can still charge for it
    double amount = 0.0;
};

Shortage find_shortage(const Plan& p, const VehicleTrace& vt, const Instance& inst, int v) {
    const std::size_t n = p.positions();
    for (std::size_t k = 0; k < n; ++k) {
        if (k >= 1) {
            const double f = inst.floor_at(v, p.nodes[k]);
            if (vt.soc_arrival[k] < f - kEnergyTol)
                return {v, static_cast<int>(k) - 1, static_cast<int>(k) - 1, f - vt.soc_arrival[k]};
        }
        if (k + 1 == n) break;
        const auto& leg = p.legs[k];
        for (std::size_t a = 1; a + 1 < leg.size(); ++a) {
            const double f = inst.floor_at(v, leg[a]);
            const double soc = vt.segments[k].node_soc[a - 1];
            if (soc < f - kEnergyTol) return {v, static_cast<int>(k), static_cast<int>(k), f - soc};
        }
    }
    return {};
}

// Smallest soc surplus over the floor from segment `seg` onward (interior nodes of seg
// and every later visit).
double slack_from(const Plan& p, const VehicleTrace& vt, const Instance& inst, int v, std::size_t seg) {
    double slack = kInf;
    for (std::size_t k = seg; k < p.segments(); ++k) {
        const auto& leg = p.legs[k];
        for (std::size_t a = 1; a < leg.size(); ++a)
            slack = std::min(slack, vt.segments[k].node_soc[a - 1] - inst.floor_at(v, leg[a]));
    }
    return slack;
}

double seg_time(const Instance& inst, const Plan& p, std::size_t s) { return path_time(inst.network(), p.legs[s]); }

struct Context {
    PlanSet& plans;
    const Instance& inst;
    const RepairOptions& opts;
    EvalOptions eo;
    EnergyTrace trace;
    Evaluation eval;

    Evaluation run() { return eval = assess(plans, inst, eo, &trace); }
};

bool fix_request(Context& c, const Shortage& s) {
    const Instance& inst = c.inst;
    const double eta = inst.params().transfer_efficiency;
    const int v = s.vehicle;
    const Plan& rp = c.plans[v];
    // More transfer on an existing pairing, latest segment first.
    for (int j = s.last_segment; j >= 0; --j) {
        for (int u : rp.companions[j]) {
            if (inst.is_request(u)) continue;
            Plan& sp = c.plans[u];
            const int su = find_segment(sp, rp.nodes[j], rp.nodes[j + 1]);
            if (su < 0 || sp.paired[su] != v || sp.fraction[su] >= 1.0) continue;
            const double unit = eta * inst.supplier(u).transfer_rate * seg_time(inst, sp, su);
            if (unit <= 0.0) continue;
            sp.fraction[su] = std::min(1.0, quantize_up(sp.fraction[su] + s.amount / unit, c.opts.fraction_resolution));
            return true;
        }
    }
    // A supplier riding along without a partner.
    for (int j = s.last_segment; j >= 0; --j) {
        for (int u : rp.companions[j]) {
            if (inst.is_request(u)) continue;
            Plan& sp = c.plans[u];
            const int su = find_segment(sp, rp.nodes[j], rp.nodes[j + 1]);
            if (su < 0 || sp.paired[su] >= 0) continue;
            bool served = false;
            for (int w : rp.companions[j]) {
                if (inst.is_request(w) || w == u) continue;
                const int sw = find_segment(c.plans[w], rp.nodes[j], rp.nodes[j + 1]);
                if (sw >= 0 && c.plans[w].paired[sw] == v) served = true;
            }
            if (served) continue;
            const double unit = eta * inst.supplier(u).transfer_rate * seg_time(inst, sp, su);
            if (unit <= 0.0) continue;
            sp.paired[su] = v;
            sp.fraction[su] = std::min(1.0, quantize_up(s.amount / unit, c.opts.fraction_resolution));
            return true;
        }
    }
    return false;
}

bool fix_with_dwell(Context& c, const Shortage& s) {
    const Instance& inst = c.inst;
    const Network& net = inst.network();
    const int v = s.vehicle;
    Plan& p = c.plans[v];
    const VehicleTrace& vt = c.trace.vehicles[v];
    const double cap = inst.capacity(v);
    for (int k = s.last_cs; k >= 0; --k) {
        const Node& node = net.node(p.nodes[k]);
        if (!node.is_cs || node.charge_rate <= 0.0) continue;
        if (vt.soc_arrival[k] + vt.charge[k] >= cap - 1e-6) continue;
        const double want = p.dwell[k] + p.wait[k] + s.amount / node.charge_rate;
        const double next = quantize_up(want, c.opts.dwell_resolution);
        if (next <= p.dwell[k]) continue;
        p.dwell[k] = next;
        return true;
    }
    return false;
}

bool repair(Context& c) {
    const Instance& inst = c.inst;
    const int nv = inst.vehicle_count();
    std::vector<bool> stuck(static_cast<std::size_t>(nv), false);
    for (int round = 0; round < c.opts.max_rounds; ++round) {
        if (c.eval.feasible) return true;
        if (!c.eval.violations.empty()) return false;
        bool acted = false;
        for (int v = 0; v < nv && !acted; ++v) {
            if (!c.eval.active[v] || stuck[v]) continue;
            const Shortage s = find_shortage(c.plans[v], c.trace.vehicles[v], inst, v);
            if (s.vehicle < 0) continue;
            if (inst.is_request(v) && fix_request(c, s)) {
                acted = true;
            } else if (fix_with_dwell(c, s)) {
                acted = true;
            } else {
                stuck[v] = true;
            }
        }
        if (!acted) return false;
        c.run();
    }
    return c.eval.feasible;
}

// Accepts the candidate when it stays feasible and does not raise the objective.
bool keep_if_better(Context& c, PlanSet& backup, const Evaluation& before) {
    c.run();
    if (c.eval.feasible && c.eval.objective <= before.objective + 1e-9) return true;
    c.plans = backup;
    c.run();
    return false;
}

void trim_dwell(Context& c, bool requests) {
    const Instance& inst = c.inst;
    const Network& net = inst.network();
    for (int v = 0; v < inst.vehicle_count(); ++v) {
        if (!c.eval.active[v] || inst.is_request(v) != requests) continue;
        for (int k = static_cast<int>(c.plans[v].positions()) - 2; k >= 0; --k) {
            const Plan& p = c.plans[v];
            const Node& node = net.node(p.nodes[k]);
            if (!node.is_cs || p.dwell[k] <= 0.0) continue;
            const VehicleTrace& vt = c.trace.vehicles[v];
            const double slack = slack_from(p, vt, inst, v, static_cast<std::size_t>(k));
            const double cut = std::min(slack, vt.charge[k]);
            const double target = vt.charge[k] - std::max(0.0, cut);
            const double dwell = quantize_up(std::max(0.0, target / node.charge_rate - p.wait[k]), c.opts.dwell_resolution);
            if (dwell >= p.dwell[k]) continue;
            PlanSet backup = c.plans;
            const Evaluation before = c.eval;
            c.plans[v].dwell[k] = dwell;
            keep_if_better(c, backup, before);
        }
    }
}

void trim_fractions(Context& c) {
    const Instance& inst = c.inst;
    const double eta = inst.params().transfer_efficiency;
    for (int u = inst.request_count(); u < inst.vehicle_count(); ++u) {
        if (!c.eval.active[u]) continue;
        for (int s = static_cast<int>(c.plans[u].segments()) - 1; s >= 0; --s) {
            const Plan& sp = c.plans[u];
            const int r = sp.paired[s];
            if (r < 0) continue;
            const int rs = find_segment(c.plans[r], sp.nodes[s], sp.nodes[s + 1]);
            if (rs < 0) continue;
            const double unit = eta * inst.supplier(u).transfer_rate * seg_time(inst, sp, s);
            const double slack = slack_from(c.plans[r], c.trace.vehicles[r], inst, r, static_cast<std::size_t>(rs));
            double next = 0.0;
            if (unit > 0.0)
                next = quantize_up(std::max(0.0, sp.fraction[s] - std::max(0.0, slack) / unit), c.opts.fraction_resolution);
            if (next >= sp.fraction[s] && sp.fraction[s] > 0.0) continue;
            PlanSet backup = c.plans;
            const Evaluation before = c.eval;
            Plan& w = c.plans[u];
            w.fraction[s] = next;
            if (next <= 0.0) {
                w.fraction[s] = 0.0;
                w.paired[s] = -1;
            }
            keep_if_better(c, backup, before);
        }
    }
}

}  // namespace

Evaluation repair_and_tighten(PlanSet& plans, const Instance& inst, const RepairOptions& opts) {
    Context c{plans, inst, opts, {opts.scenario, opts.active.empty() ? default_active(inst, opts.scenario) : opts.active},
              {}, {}};
    for (int v = 0; v < inst.vehicle_count(); ++v) {
        if (!c.eo.active[v]) continue;
        Plan& p = plans[v];
        if (p.dwell.size() != p.positions()) continue;  // structure check reports it
        for (std::size_t k = 0; k < p.positions(); ++k)
            if (k + 1 == p.positions() || !inst.network().node(p.nodes[k]).is_cs) p.dwell[k] = 0.0;
    }
    c.run();
    if (!c.eval.violations.empty()) return c.eval;
    if (!repair(c)) return c.eval;
    if (!opts.tighten) return c.eval;
    trim_dwell(c, true);
    trim_fractions(c);
    trim_dwell(c, false);
    return c.eval;
}

}  // namespace pv2vc
