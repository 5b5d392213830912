#include "pv2vc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace pv2vc {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Evrp: return "evrp";
        case Scenario::Evpp: return "evpp";
        case Scenario::Pv2vc: return "pv2vc";
    }
    return "?";
}

Scenario parse_scenario(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "evrp") return Scenario::Evrp;
    if (t == "evpp") return Scenario::Evpp;
    if (t == "pv2vc") return Scenario::Pv2vc;
    throw Error(fmt::format("unknown scenario '{}' (expected evrp, evpp or pv2vc)", text));
}

const char* classification_name(Classification c) {
    switch (c) {
        case Classification::Infeasible: return "INFEASIBLE";
        case Classification::NoChargeNeeded: return "NO_CHARGE_NEEDED";
        case Classification::NeedsCharging: return "NEEDS_CHARGING";
    }
    return "?";
}

Instance::Instance(std::string name, Network network, std::vector<Request> requests,
                   std::vector<Supplier> suppliers, Params params)
    : name_(std::move(name)),
      network_(std::move(network)),
      requests_(std::move(requests)),
      suppliers_(std::move(suppliers)),
      params_(params) {
    const int n = static_cast<int>(network_.node_count());
    auto check_node = [&](int id, const std::string& field) {
        if (id < 0 || id >= n) throw Error(fmt::format("{}: unknown node", field));
    };
    if (!(params_.platoon_saving >= 0.0 && params_.platoon_saving < 1.0))
        throw Error("params.platoon_saving must lie in [0, 1)");
    if (!(params_.transfer_efficiency > 0.0 && params_.transfer_efficiency <= 1.0))
        throw Error("params.transfer_efficiency must lie in (0, 1]");
    if (params_.alpha < 0.0 || params_.beta < 0.0) throw Error("params.alpha and params.beta must be non-negative");
    if (!(params_.dwell_resolution > 0.0)) throw Error("params.dwell_resolution must be positive");
    if (!(params_.speed > 0.0)) throw Error("params.speed must be positive");

    std::set<std::string> ids;
    for (const Request& r : requests_) {
        const std::string f = "requests." + r.id;
        if (!ids.insert(r.id).second) throw Error(fmt::format("{}: duplicate vehicle id", f));
        if (r.tasks.size() < 2) throw Error(fmt::format("{}.tasks: at least origin and destination required", f));
        std::set<int> seen;
        for (int t : r.tasks) {
            check_node(t, f + ".tasks");
            if (!seen.insert(t).second) throw Error(fmt::format("{}.tasks: node {} repeated", f, t));
        }
        if (r.min_soc < 0.0) throw Error(fmt::format("{}.min_soc: must be non-negative", f));
        if (r.min_soc > r.initial_soc) throw Error(fmt::format("{}.min_soc: exceeds initial_soc", f));
        if (r.initial_soc > r.capacity) throw Error(fmt::format("{}.initial_soc: exceeds capacity", f));
        if (r.submit_time < 0.0) throw Error(fmt::format("{}.submit_time: must be non-negative", f));
    }
    for (const Supplier& s : suppliers_) {
        const std::string f = "suppliers." + s.id;
        if (!ids.insert(s.id).second) throw Error(fmt::format("{}: duplicate vehicle id", f));
        check_node(s.origin, f + ".origin");
        if (!(s.transfer_rate > 0.0)) throw Error(fmt::format("{}.transfer_rate: must be positive", f));
        if (s.initial_soc < 0.0) throw Error(fmt::format("{}.initial_soc: must be non-negative", f));
        if (s.initial_soc > s.capacity) throw Error(fmt::format("{}.initial_soc: exceeds capacity", f));
        if (s.ready_time < 0.0) throw Error(fmt::format("{}.ready_time: must be non-negative", f));
    }

    dm_ = all_pairs_shortest(network_);
    if (!network_.charging_stations().empty()) {
        reserve_ = cs_reserves(network_, dm_, params_.consumption_rate);
    } else {
        reserve_.sigma.assign(network_.node_count(), kInf);
        reserve_.nearest_cs.assign(network_.node_count(), -1);
    }
}

int Instance::vehicle_by_label(const std::string& label) const {
    for (int v = 0; v < vehicle_count(); ++v)
        if (vehicle_label(v) == label) return v;
    return -1;
}

double Instance::floor_at(int v, int node) const {
    return is_request(v) ? request(v).min_soc : reserve_.sigma.at(static_cast<std::size_t>(node));
}

double Instance::full_charge_time(int v, int node) const {
    const Node& n = network_.node(node);
    return n.is_cs ? capacity(v) / n.charge_rate : 0.0;
}

Instance Instance::without_suppliers() const { return Instance(name_, network_, requests_, {}, params_); }

Instance Instance::with_network(Network net) const {
    return Instance(name_, std::move(net), requests_, suppliers_, params_);
}

// ---------------------------------------------------------------------------
// Units

double parse_quantity(const std::string& text, const std::string& kind, const std::string& field) {
    std::istringstream in(text);
    double value = 0.0;
    if (!(in >> value)) throw Error(fmt::format("{}: expected a number, got '{}'", field, text));
    std::string unit;
    std::getline(in, unit);
    unit.erase(std::remove_if(unit.begin(), unit.end(), [](unsigned char c) { return std::isspace(c); }),
               unit.end());
    std::transform(unit.begin(), unit.end(), unit.begin(), [](unsigned char c) { return std::tolower(c); });
    if (unit.empty()) return value;

    static const std::map<std::string, std::map<std::string, double>> table = {
        {"energy", {{"kwh", 1.0}, {"wh", 1e-3}}},
        {"time", {{"min", 1.0}, {"mins", 1.0}, {"minutes", 1.0}, {"h", 60.0}, {"hr", 60.0}, {"s", 1.0 / 60.0}}},
        {"power", {{"kw", 1.0 / 60.0}, {"kwh/min", 1.0}, {"kwh/h", 1.0 / 60.0}}},
        {"speed", {{"mph", 1.0 / 60.0}, {"mi/h", 1.0 / 60.0}, {"mi/min", 1.0}}},
        {"consumption", {{"kwh/mi", 1.0}, {"kwh/mile", 1.0}}},
        {"distance", {{"mi", 1.0}, {"miles", 1.0}}},
        {"fraction", {{"%", 0.01}}},
    };
    const auto k = table.find(kind);
    if (k == table.end()) throw Error(fmt::format("{}: internal unit kind '{}'", field, kind));
    const auto u = k->second.find(unit);
    if (u == k->second.end()) throw Error(fmt::format("{}: unsupported unit '{}' for {}", field, unit, kind));
    if (unit == "kw") return value / 60.0;  // keep 180 kW -> exactly 3
    if (unit == "mph" || unit == "mi/h" || unit == "kwh/h") return value / 60.0;
    return value * u->second;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

std::string scalar_text(const YAML::Node& node, const std::string& field) {
    if (!node || !node.IsScalar()) throw Error(fmt::format("{}: missing or not a scalar", field));
    return node.Scalar();
}

double quantity(const YAML::Node& parent, const char* key, const std::string& kind, const std::string& field,
                std::optional<double> fallback = std::nullopt) {
    const YAML::Node n = parent[key];
    if (!n) {
        if (fallback) return *fallback;
        throw Error(fmt::format("{}.{}: required field missing", field, key));
    }
    return parse_quantity(scalar_text(n, field + "." + key), kind, field + "." + key);
}

int as_int(const YAML::Node& n, const std::string& field) {
    try {
        return n.as<int>();
    } catch (const YAML::Exception&) {
        throw Error(fmt::format("{}: expected an integer node id", field));
    }
}

double as_double(const YAML::Node& n, const std::string& field) {
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        throw Error(fmt::format("{}: expected a number", field));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Instance parse_instance(const std::string& text, const std::string& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw Error(fmt::format("instance: malformed structured text: {}", e.what()));
    }
    if (!root.IsMap()) throw Error("instance: top level must be a mapping");
    for (const char* sec : {"network", "requests"})
        if (!root[sec]) throw Error(fmt::format("instance: missing section '{}'", sec));

    Params params;
    if (const YAML::Node p = root["params"]) {
        params.speed = quantity(p, "speed", "speed", "params", params.speed);
        params.consumption_rate = quantity(p, "consumption_rate", "consumption", "params", params.consumption_rate);
        params.platoon_saving = quantity(p, "platoon_saving", "fraction", "params", params.platoon_saving);
        params.transfer_efficiency =
            quantity(p, "transfer_efficiency", "fraction", "params", params.transfer_efficiency);
        params.alpha = quantity(p, "alpha", "fraction", "params", params.alpha);
        params.beta = quantity(p, "beta", "fraction", "params", params.beta);
        params.dwell_resolution = quantity(p, "dwell_resolution", "time", "params", params.dwell_resolution);
    }

    // Network
    const YAML::Node net = root["network"];
    Network network;
    if (net["tntp"]) {
        TntpOptions opt;
        opt.speed = params.speed;
        opt.consumption_rate = params.consumption_rate;
        if (net["distance_scale"]) opt.distance_scale = as_double(net["distance_scale"], "network.distance_scale");
        std::filesystem::path p = scalar_text(net["tntp"], "network.tntp");
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        network = parse_tntp(read_file(p.string()), opt);
    } else {
        const YAML::Node arcs = net["arcs"];
        if (!arcs || !arcs.IsSequence()) throw Error("network.arcs: required sequence missing");
        const bool undirected = net["undirected"] ? net["undirected"].as<bool>() : true;
        std::vector<int> labels;
        if (const YAML::Node nodes = net["nodes"]) {
            if (!nodes.IsSequence()) throw Error("network.nodes: expected a sequence of node ids");
            for (std::size_t i = 0; i < nodes.size(); ++i) labels.push_back(as_int(nodes[i], "network.nodes"));
        } else {
            std::set<int> seen;
            for (std::size_t i = 0; i < arcs.size(); ++i) {
                seen.insert(as_int(arcs[i][0], "network.arcs"));
                seen.insert(as_int(arcs[i][1], "network.arcs"));
            }
            labels.assign(seen.begin(), seen.end());
        }
        std::map<int, int> id_of;
        std::vector<Node> nodes;
        for (int label : labels) {
            if (!id_of.emplace(label, static_cast<int>(nodes.size())).second)
                throw Error(fmt::format("network.nodes: duplicate node {}", label));
            Node n;
            n.id = static_cast<int>(nodes.size());
            n.label = label;
            nodes.push_back(n);
        }
        std::vector<Arc> arc_list;
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const YAML::Node a = arcs[i];
            const std::string f = fmt::format("network.arcs[{}]", i);
            if (!a.IsSequence() || (a.size() != 3 && a.size() != 5))
                throw Error(fmt::format("{}: expected [from, to, distance] or [from, to, distance, time, rate]", f));
            const int from = as_int(a[0], f), to = as_int(a[1], f);
            if (!id_of.count(from) || !id_of.count(to)) throw Error(fmt::format("{}: unknown node", f));
            Arc arc;
            arc.from = id_of[from];
            arc.to = id_of[to];
            arc.distance = parse_quantity(a[2].Scalar(), "distance", f);
            arc.travel_time = a.size() == 5 ? as_double(a[3], f) : arc.distance / params.speed;
            arc.consumption_rate = a.size() == 5 ? as_double(a[4], f) : params.consumption_rate;
            arc_list.push_back(arc);
            if (undirected) {
                std::swap(arc.from, arc.to);
                arc_list.push_back(arc);
            }
        }
        network = Network(std::move(nodes), std::move(arc_list));
    }

    auto node_id = [&](const YAML::Node& n, const std::string& field) {
        const int label = as_int(n, field);
        const auto id = network.try_id_of_label(label);
        if (!id) throw Error(fmt::format("{}: unknown node {}", field, label));
        return *id;
    };

    if (const YAML::Node cs = root["charging_stations"]) {
        std::optional<double> default_rate;
        if (cs["rate"]) default_rate = parse_quantity(scalar_text(cs["rate"], "charging_stations.rate"), "power",
                                                      "charging_stations.rate");
        const YAML::Node list = cs["nodes"];
        if (!list || !list.IsSequence()) throw Error("charging_stations.nodes: required sequence missing");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string f = fmt::format("charging_stations.nodes[{}]", i);
            if (list[i].IsMap()) {
                const int id = node_id(list[i]["node"], f + ".node");
                network.set_charging_station(id, quantity(list[i], "rate", "power", f, default_rate));
            } else {
                if (!default_rate) throw Error(fmt::format("{}: no rate given", f));
                network.set_charging_station(node_id(list[i], f), *default_rate);
            }
        }
    }

    std::vector<Request> requests;
    const YAML::Node rq = root["requests"];
    if (!rq.IsSequence()) throw Error("requests: expected a sequence");
    for (std::size_t i = 0; i < rq.size(); ++i) {
        const YAML::Node r = rq[i];
        Request req;
        req.id = r["id"] ? r["id"].Scalar() : fmt::format("r{}", i + 1);
        const std::string f = "requests." + req.id;
        const YAML::Node tasks = r["tasks"];
        if (!tasks || !tasks.IsSequence()) throw Error(fmt::format("{}.tasks: required sequence missing", f));
        for (std::size_t k = 0; k < tasks.size(); ++k) req.tasks.push_back(node_id(tasks[k], f + ".tasks"));
        req.initial_soc = quantity(r, "initial_soc", "energy", f);
        req.capacity = quantity(r, "capacity", "energy", f);
        req.min_soc = quantity(r, "min_soc", "energy", f, 0.0);
        req.submit_time = quantity(r, "submit_time", "time", f, 0.0);
        requests.push_back(req);
    }

    std::vector<Supplier> suppliers;
    if (const YAML::Node sp = root["suppliers"]) {
        if (!sp.IsSequence()) throw Error("suppliers: expected a sequence");
        for (std::size_t i = 0; i < sp.size(); ++i) {
            const YAML::Node s = sp[i];
            Supplier sup;
            sup.id = s["id"] ? s["id"].Scalar() : fmt::format("s{}", i + 1);
            const std::string f = "suppliers." + sup.id;
            sup.origin = node_id(s["origin"], f + ".origin");
            sup.initial_soc = quantity(s, "initial_soc", "energy", f);
            sup.capacity = quantity(s, "capacity", "energy", f);
            sup.transfer_rate = quantity(s, "transfer_rate", "power", f);
            sup.ready_time = quantity(s, "ready_time", "time", f, 0.0);
            suppliers.push_back(sup);
        }
    }

    const std::string name = root["name"] ? root["name"].Scalar() : std::string("instance");
    return Instance(name, std::move(network), std::move(requests), std::move(suppliers), params);
}

Instance load_instance(const std::string& path) {
    if (path == "fixture") return illustrative_instance();
    if (!std::filesystem::exists(path)) throw Error(fmt::format("instance file not found: {}", path));
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_instance(read_file(path), base.empty() ? "." : base);
}

// ---------------------------------------------------------------------------
// Writing

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::string write_instance(const Instance& inst) {
    const Network& net = inst.network();
    auto label = [&](int id) { return net.node(id).label; };
    std::string out;
    out += fmt::format("name: \"{}\"\n", inst.name());
    out += "network:\n  undirected: false\n  nodes: [";
    for (std::size_t i = 0; i < net.node_count(); ++i)
        out += fmt::format("{}{}", i ? ", " : "", net.nodes()[i].label);
    out += "]\n  arcs:\n";
    for (const Arc& a : net.arcs())
        out += fmt::format("    - [{}, {}, {}, {}, {}]\n", label(a.from), label(a.to), num(a.distance),
                           num(a.travel_time), num(a.consumption_rate));
    out += "charging_stations:\n  nodes:\n";
    for (int c : net.charging_stations())
        out += fmt::format("    - {{node: {}, rate: {}}}\n", label(c), num(net.node(c).charge_rate));
    if (net.charging_stations().empty()) out += "    []\n";
    out += "requests:\n";
    for (const Request& r : inst.requests()) {
        out += fmt::format("  - id: \"{}\"\n    tasks: [", r.id);
        for (std::size_t k = 0; k < r.tasks.size(); ++k) out += fmt::format("{}{}", k ? ", " : "", label(r.tasks[k]));
        out += fmt::format("]\n    initial_soc: {}\n    capacity: {}\n    min_soc: {}\n    submit_time: {}\n",
                           num(r.initial_soc), num(r.capacity), num(r.min_soc), num(r.submit_time));
    }
    out += "suppliers:\n";
    if (inst.suppliers().empty()) out += "  []\n";
    for (const Supplier& s : inst.suppliers())
        out += fmt::format(
            "  - id: \"{}\"\n    origin: {}\n    initial_soc: {}\n    capacity: {}\n    transfer_rate: {}\n"
            "    ready_time: {}\n",
            s.id, label(s.origin), num(s.initial_soc), num(s.capacity), num(s.transfer_rate), num(s.ready_time));
    const Params& p = inst.params();
    out += fmt::format(
        "params:\n  speed: {}\n  consumption_rate: {}\n  platoon_saving: {}\n  transfer_efficiency: {}\n"
        "  alpha: {}\n  beta: {}\n  dwell_resolution: {}\n",
        num(p.speed), num(p.consumption_rate), num(p.platoon_saving), num(p.transfer_efficiency), num(p.alpha),
        num(p.beta), num(p.dwell_resolution));
    return out;
}

std::string instance_fingerprint(const Instance& inst) {
    const std::string text = write_instance(inst);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

// ---------------------------------------------------------------------------
// Fixture

Instance illustrative_instance() {
    Params params;  // defaults match the worked example
    std::vector<Node> nodes(5);
    for (int i = 0; i < 5; ++i) {
        nodes[i].id = i;
        nodes[i].label = i;
    }
    const int edges[][3] = {{0, 1, 40}, {0, 2, 40}, {1, 2, 30}, {1, 3, 40}, {2, 3, 60}, {3, 4, 30}};
    std::vector<Arc> arcs;
    for (const auto& e : edges) {
        for (int dir = 0; dir < 2; ++dir) {
            Arc a;
            a.from = dir ? e[1] : e[0];
            a.to = dir ? e[0] : e[1];
            a.distance = e[2];
            a.travel_time = a.distance / params.speed;
            a.consumption_rate = params.consumption_rate;
            arcs.push_back(a);
        }
    }
    Network net(std::move(nodes), std::move(arcs));
    net.set_charging_station(2, 180.0 / 60.0);
    net.set_charging_station(4, 180.0 / 60.0);

    std::vector<Request> requests(2);
    requests[0] = Request{"r1", {0, 1, 3}, 2.0, 0.0, 90.0, 20.0};
    requests[1] = Request{"r2", {0, 3, 4}, 2.0, 0.0, 90.0, 35.0};
    std::vector<Supplier> suppliers(1);
    suppliers[0] = Supplier{"s1", 2, 50.0 / 60.0, 0.0, 180.0, 45.0};
    return Instance("illustrative", std::move(net), std::move(requests), std::move(suppliers), params);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

double path_energy(const Network& net, const std::vector<int>& path) {
    double e = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const Arc& a = net.arc_between(path[k - 1], path[k]);
        e += a.consumption_rate * a.distance;
    }
    return e;
}

}  // namespace

Classification classify_request(const Instance& inst, int v) {
    const Request& r = inst.request(v);
    const DistanceMatrix& dm = inst.distances();
    const Network& net = inst.network();
    for (std::size_t k = 1; k < r.tasks.size(); ++k)
        if (!dm.reachable(r.tasks[k - 1], r.tasks[k])) return Classification::Infeasible;
    double need = 0.0;
    for (std::size_t k = 1; k < r.tasks.size(); ++k)
        need += path_energy(net, canonical_path(dm, r.tasks[k - 1], r.tasks[k]));
    if (r.initial_soc - need >= r.min_soc - 1e-9) return Classification::NoChargeNeeded;
    for (int c : net.charging_stations()) {
        if (!dm.reachable(r.origin(), c)) continue;
        if (r.initial_soc - path_energy(net, canonical_path(dm, r.origin(), c)) >= r.min_soc - 1e-9)
            return Classification::NeedsCharging;
    }
    return Classification::Infeasible;
}

std::vector<Finding> validate(const Instance& inst) {
    std::vector<Finding> out;
    const Network& net = inst.network();
    if (net.charging_stations().empty())
        out.push_back({"instance", "network has no charging station", true, Classification::NeedsCharging});
    for (int v = 0; v < inst.request_count(); ++v) {
        const Request& r = inst.request(v);
        for (std::size_t k = 1; k < r.tasks.size(); ++k)
            if (!inst.distances().reachable(r.tasks[k - 1], r.tasks[k]))
                out.push_back({r.id,
                               fmt::format("task chain disconnected between nodes {} and {}",
                                           net.node(r.tasks[k - 1]).label, net.node(r.tasks[k]).label),
                               true, Classification::Infeasible});
        const Classification c = classify_request(inst, v);
        out.push_back({r.id, classification_name(c), false, c});
    }
    for (int v = inst.request_count(); v < inst.vehicle_count(); ++v) {
        const Supplier& s = inst.supplier(v);
        const double sigma = inst.reserve().sigma[static_cast<std::size_t>(s.origin)];
        if (s.initial_soc < sigma - 1e-9)
            out.push_back({s.id, fmt::format("initial soc {} below reserve {} at origin", s.initial_soc, sigma), true,
                           Classification::Infeasible});
        for (std::size_t i = 0; i < net.node_count(); ++i)
            if (inst.reserve().sigma[i] > s.capacity && inst.reserve().sigma[i] < kInf) {
                out.push_back({s.id, fmt::format("reserve at node {} exceeds capacity", net.nodes()[i].label), true,
                               Classification::NeedsCharging});
                break;
            }
    }
    return out;
}

}  // namespace pv2vc
