#pragma once

// Independent bookkeeping checks on an accepted plan set: energy balance per vehicle,
// exact platoon synchronization, and at most one supplier per request per arc.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pv2vc/evaluator.hpp"

namespace pv2vc::testing {

inline constexpr double kBalanceTol = 1e-9;

inline double segment_time(const Instance& inst, const std::vector<int>& leg) {
    double t = 0.0;
    for (std::size_t a = 1; a < leg.size(); ++a) t += inst.network().arc_between(leg[a - 1], leg[a]).travel_time;
    return t;
}

inline std::vector<std::string> conservation_problems(const PlanSet& plans, const Instance& inst, Scenario sc,
                                                      std::vector<bool> active = {}) {
    std::vector<std::string> out;
    if (active.empty()) active = default_active(inst, sc);
    PlanSet synced = plans;
    EnergyTrace trace;
    const Evaluation eval = assess(synced, inst, {sc, active}, &trace);
    if (!eval.violations.empty() || trace.vehicles.size() != static_cast<std::size_t>(inst.vehicle_count())) {
        out.push_back("structurally invalid: " + (eval.violations.empty() ? std::string("no trace") : eval.violations.front()));
        return out;
    }
    const Params& prm = inst.params();
    const Network& net = inst.network();

    // Gross transfer into each (request, first node, last node) from paired suppliers.
    std::map<std::tuple<int, int, int>, std::vector<double>> inflow;
    double fleet_out = 0.0;
    for (int s = inst.request_count(); s < inst.vehicle_count(); ++s) {
        if (!active[s]) continue;
        const Plan& p = synced[s];
        for (std::size_t k = 0; k < p.segments(); ++k) {
            if (p.paired[k] < 0) continue;
            const double amount = inst.supplier(s).transfer_rate * p.fraction[k] * segment_time(inst, p.legs[k]);
            inflow[{p.paired[k], p.nodes[k], p.nodes[k + 1]}].push_back(amount);
            fleet_out += amount;
            const auto& comp = p.companions[k];
            if (std::find(comp.begin(), comp.end(), p.paired[k]) == comp.end())
                out.push_back(fmt::format("{} pairs with a request outside its platoon", inst.vehicle_label(s)));
        }
    }
    double fleet_in = 0.0;
    for (const auto& [key, amounts] : inflow) {
        if (amounts.size() > 1)
            out.push_back(fmt::format("request {} served by {} suppliers on one arc", inst.vehicle_label(std::get<0>(key)),
                                      amounts.size()));
        for (double a : amounts) fleet_in += a;
    }
    if (std::fabs(fleet_in - fleet_out) > kBalanceTol) out.push_back("fleet transfer balance does not close");

    for (int v = 0; v < inst.vehicle_count(); ++v) {
        if (!active[v]) continue;
        const Plan& p = synced[v];
        const VehicleTrace& vt = trace.vehicles[v];
        double charge = 0.0, consumption = 0.0, sent = 0.0, received = 0.0;
        for (std::size_t k = 0; k < p.positions(); ++k) {
            const Node& node = net.node(p.nodes[k]);
            if (!node.is_cs && vt.charge[k] != 0.0) out.push_back("charge away from a CS");
            if (vt.charge[k] > node.charge_rate * p.total_dwell(k) + kBalanceTol) out.push_back("charge beyond rate");
            charge += vt.charge[k];
        }
        for (std::size_t k = 0; k < p.segments(); ++k) {
            const double saving = p.companions[k].empty() ? 0.0 : prm.platoon_saving;
            for (std::size_t a = 1; a < p.legs[k].size(); ++a) {
                const Arc& arc = net.arc_between(p.legs[k][a - 1], p.legs[k][a]);
                consumption += arc.consumption_rate * arc.distance * (1.0 - saving);
            }
            if (inst.is_request(v)) {
                const auto it = inflow.find({v, p.nodes[k], p.nodes[k + 1]});
                if (it != inflow.end())
                    for (double a : it->second) received += a;
            } else if (p.paired[k] >= 0) {
                sent += inst.supplier(v).transfer_rate * p.fraction[k] * segment_time(inst, p.legs[k]);
            }
        }
        const double expected =
            inst.initial_soc(v) + charge - consumption - sent + prm.transfer_efficiency * received;
        if (std::fabs(expected - vt.final_soc) > kBalanceTol)
            out.push_back(fmt::format("{}: energy balance off by {:.3g}", inst.vehicle_label(v), expected - vt.final_soc));

        // Synchronization: members share the path and both end-point times (up to rounding of the derived wait).
        for (std::size_t k = 0; k < p.segments(); ++k)
            for (int u : p.companions[k]) {
                const int ku = find_segment(synced[u], p.nodes[k], p.nodes[k + 1]);
                if (ku < 0) {
                    out.push_back("companion lacks the segment");
                    continue;
                }
                const Plan& q = synced[u];
                if (q.legs[ku] != p.legs[k]) out.push_back("platoon members on different paths");
                if (std::fabs(q.departure(ku) - p.departure(k)) > kBalanceTol) out.push_back("platoon departures differ");
                if (std::fabs(q.arrival[ku + 1] - p.arrival[k + 1]) > kBalanceTol) out.push_back("platoon arrivals differ");
            }
    }
    return out;
}

}  // namespace pv2vc::testing
