#include "pv2vc/solution_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace pv2vc {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "pv2vc-solution/1";

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_of(const json& j) { return j.is_null() ? kInf : j.get<double>(); }

json cost_json(const CostBreakdown& c) {
    return json{{"energy_kwh", c.energy},           {"charge_minutes", c.charge_minutes},
                {"wait_minutes", c.wait_minutes},   {"driving_minutes", c.driving_minutes},
                {"travel_minutes", c.travel_minutes}, {"total", c.total}};
}

int label_of(const Instance& inst, int node) { return inst.network().node(node).label; }

const json& field(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(fmt::format("solution: missing field '{}'", key));
    return j.at(key);
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write file '{}'", path));
    out << text;
    if (!out) throw Error(fmt::format("cannot write file '{}'", path));
}

std::string write_solution(const Instance& inst, const SolveResult& result, std::uint64_t seed) {
    json root;
    root["format"] = kFormat;
    root["instance"] = inst.name();
    root["instance_fingerprint"] = instance_fingerprint(inst);
    root["scenario"] = scenario_name(result.scenario);
    root["seed"] = seed;
    root["feasible"] = result.eval.feasible;
    root["objective"] = number(result.eval.objective);
    root["penalty"] = result.eval.penalty;
    root["seed_objective"] = number(result.seed_objective);
    root["fell_back"] = result.fell_back;
    root["notes"] = result.notes;
    json vehicles = json::array();
    for (int v = 0; v < inst.vehicle_count(); ++v) {
        const Plan& p = result.plans[v];
        json jv;
        jv["id"] = inst.vehicle_label(v);
        jv["role"] = inst.is_request(v) ? "request" : "supplier";
        jv["active"] = v < static_cast<int>(result.eval.active.size()) && result.eval.active[v];
        json nodes = json::array(), legs = json::array(), comps = json::array(), paired = json::array();
        for (int n : p.nodes) nodes.push_back(label_of(inst, n));
        for (const auto& leg : p.legs) {
            json l = json::array();
            for (int n : leg) l.push_back(label_of(inst, n));
            legs.push_back(l);
        }
        for (const auto& c : p.companions) {
            json l = json::array();
            for (int u : c) l.push_back(inst.vehicle_label(u));
            comps.push_back(l);
        }
        for (int r : p.paired) paired.push_back(r < 0 ? json(nullptr) : json(inst.vehicle_label(r)));
        jv["nodes"] = nodes;
        jv["legs"] = legs;
        jv["dwell"] = p.dwell;
        jv["wait"] = p.wait;
        jv["arrival"] = p.arrival;
        jv["companions"] = comps;
        jv["paired"] = paired;
        jv["fraction"] = p.fraction;
        if (v < static_cast<int>(result.eval.vehicles.size())) jv["cost"] = cost_json(result.eval.vehicles[v]);
        vehicles.push_back(jv);
    }
    root["vehicles"] = vehicles;
    return root.dump(2) + "\n";
}

SolutionFile read_solution(const std::string& text, const Instance& inst) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(fmt::format("solution: not valid JSON ({})", e.what()));
    }
    SolutionFile out;
    try {
        if (field(root, "format").get<std::string>() != kFormat) throw Error("solution: unknown format tag");
        out.instance_name = field(root, "instance").get<std::string>();
        out.instance_fingerprint = field(root, "instance_fingerprint").get<std::string>();
        if (out.instance_fingerprint != instance_fingerprint(inst))
            throw Error(fmt::format("solution: written for instance '{}' with a different fingerprint", out.instance_name));
        out.scenario = parse_scenario(field(root, "scenario").get<std::string>());
        out.seed = field(root, "seed").get<std::uint64_t>();
        out.stored_objective = number_of(field(root, "objective"));
        SolveResult& res = out.result;
        res.scenario = out.scenario;
        res.seed_objective = number_of(field(root, "seed_objective"));
        res.fell_back = field(root, "fell_back").get<bool>();
        res.notes = field(root, "notes").get<std::vector<std::string>>();
        const json& vehicles = field(root, "vehicles");
        if (!vehicles.is_array() || static_cast<int>(vehicles.size()) != inst.vehicle_count())
            throw Error("solution: vehicle count does not match the instance");
        const Network& net = inst.network();
        std::vector<bool> active(static_cast<std::size_t>(inst.vehicle_count()), false);
        for (int v = 0; v < inst.vehicle_count(); ++v) {
            const json& jv = vehicles[static_cast<std::size_t>(v)];
            if (field(jv, "id").get<std::string>() != inst.vehicle_label(v))
                throw Error(fmt::format("solution: vehicle {} should be '{}'", v, inst.vehicle_label(v)));
            active[v] = field(jv, "active").get<bool>();
            Plan p;
            for (int l : field(jv, "nodes").get<std::vector<int>>()) p.nodes.push_back(net.id_of_label(l));
            for (const auto& leg : field(jv, "legs")) {
                std::vector<int> ids;
                for (int l : leg.get<std::vector<int>>()) ids.push_back(net.id_of_label(l));
                p.legs.push_back(ids);
            }
            p.dwell = field(jv, "dwell").get<std::vector<double>>();
            p.wait = field(jv, "wait").get<std::vector<double>>();
            p.arrival = field(jv, "arrival").get<std::vector<double>>();
            for (const auto& c : field(jv, "companions")) {
                std::vector<int> ids;
                for (const auto& id : c.get<std::vector<std::string>>()) {
                    const int u = inst.vehicle_by_label(id);
                    if (u < 0) throw Error(fmt::format("solution: unknown vehicle '{}'", id));
                    ids.push_back(u);
                }
                p.companions.push_back(ids);
            }
            for (const auto& r : field(jv, "paired")) {
                if (r.is_null()) {
                    p.paired.push_back(-1);
                    continue;
                }
                const int u = inst.vehicle_by_label(r.get<std::string>());
                if (u < 0) throw Error(fmt::format("solution: unknown vehicle '{}'", r.get<std::string>()));
                p.paired.push_back(u);
            }
            p.fraction = field(jv, "fraction").get<std::vector<double>>();
            res.plans.push_back(std::move(p));
        }
        res.eval = assess(res.plans, inst, {out.scenario, active});
    } catch (const json::exception& e) {
        throw Error(fmt::format("solution: malformed field ({})", e.what()));
    }
    const double recomputed = out.result.eval.objective;
    const bool both_inf = !std::isfinite(recomputed) && !std::isfinite(out.stored_objective);
    if (!both_inf && !(std::fabs(recomputed - out.stored_objective) <= 1e-6 * (1.0 + std::fabs(recomputed))))
        throw Error(fmt::format("solution: stored objective {} but the plans evaluate to {}", out.stored_objective,
                                recomputed));
    return out;
}

SolutionFile load_solution(const std::string& path, const Instance& inst) {
    return read_solution(read_text_file(path), inst);
}

std::string breakdown_csv(const BreakdownReport& report) {
    auto pct = [](const std::optional<double>& d) { return d ? fmt::format("{:.2f}", *d) : std::string(); };
    std::string out =
        "vehicle,role,route,energy_kwh,charge_minutes,travel_minutes,total,energy_delta_pct,charge_delta_pct,"
        "travel_delta_pct,total_delta_pct\n";
    for (const auto& r : report.rows) {
        out += fmt::format("{},{},{},{:.4f},{:.4f},{:.4f},{:.4f},{},{},{},{}\n", r.vehicle,
                           r.is_request ? "request" : "supplier", r.route, r.cost.energy, r.cost.charge_minutes,
                           r.cost.travel_minutes, r.cost.total, pct(r.energy_delta), pct(r.charge_delta),
                           pct(r.travel_delta), pct(r.total_delta));
    }
    out += fmt::format("total,requests,,,,,{:.4f},,,,{}\n", report.request_total, pct(report.request_total_delta));
    return out;
}

}  // namespace pv2vc
