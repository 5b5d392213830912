#include "pv2vc/milp_export.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace pv2vc {

int MilpModel::find(const std::string& var) const {
    const auto it = index.find(var);
    return it == index.end() ? -1 : it->second;
}

std::size_t MilpModel::count_prefix(const std::string& prefix) const {
    return static_cast<std::size_t>(std::count_if(variables.begin(), variables.end(), [&](const MilpVariable& v) {
        return v.name.compare(0, prefix.size(), prefix) == 0;
    }));
}

namespace {

constexpr int kDepot = -1;

std::string token(const std::string& s) {
    std::string out = s;
    for (char& ch : out)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') ch = '_';
    return out;
}

struct ModelArc {
    int from = 0;
    int to = 0;  // kDepot for the dummy depot
    double distance = 0.0, time = 0.0, rate = 0.0;
    bool road() const { return to != kDepot; }
    double energy() const { return rate * distance; }
};

// Linear expression over model variables.
struct Lin {
    std::map<int, double> terms;
    double constant = 0.0;

    Lin() = default;
    explicit Lin(double c) : constant(c) {}
    static Lin var(int v, double coef = 1.0) {
        Lin l;
        l.terms[v] = coef;
        return l;
    }
    Lin& operator+=(const Lin& o) {
        for (const auto& [v, c] : o.terms) terms[v] += c;
        constant += o.constant;
        return *this;
    }
    Lin& operator-=(const Lin& o) {
        for (const auto& [v, c] : o.terms) terms[v] -= c;
        constant -= o.constant;
        return *this;
    }
    Lin operator*(double k) const {
        Lin l = *this;
        for (auto& [v, c] : l.terms) c *= k;
        l.constant *= k;
        return l;
    }
};

Lin operator+(Lin a, const Lin& b) { return a += b; }
Lin operator-(Lin a, const Lin& b) { return a -= b; }

// Indexing shared by the builder and the plan encoder.
struct Layout {
    const Instance& inst;
    Scenario variant;
    bool platoons = false;
    bool suppliers = false;
    std::vector<ModelArc> arcs;
    std::vector<int> vehicles;
    std::vector<int> requests;
    std::vector<int> supplier_ids;

    Layout(const Instance& in, Scenario v) : inst(in), variant(v) {
        platoons = v != Scenario::Evrp;
        suppliers = v == Scenario::Pv2vc;
        const Network& net = inst.network();
        for (const Arc& a : net.arcs()) arcs.push_back({a.from, a.to, a.distance, a.travel_time, a.consumption_rate});
        if (suppliers)
            for (std::size_t i = 0; i < net.node_count(); ++i) arcs.push_back({static_cast<int>(i), kDepot, 0.0, 0.0, 0.0});
        for (int r = 0; r < inst.request_count(); ++r) requests.push_back(r);
        if (suppliers)
            for (int s = inst.request_count(); s < inst.vehicle_count(); ++s) supplier_ids.push_back(s);
        vehicles = requests;
        vehicles.insert(vehicles.end(), supplier_ids.begin(), supplier_ids.end());
    }

    std::string node(int i) const { return i == kDepot ? "D" : std::to_string(inst.network().node(i).label); }
    std::string veh(int k) const { return token(inst.vehicle_label(k)); }
    std::string arc(const ModelArc& a) const { return node(a.from) + "_" + node(a.to); }
    std::string arc(int i, int j) const { return node(i) + "_" + node(j); }

    std::string X(const std::string& a, int k) const { return "X_" + a + "_" + veh(k); }
    std::string T(int i, int k) const { return "T_" + node(i) + "_" + veh(k); }
    std::string U(int i, int k) const { return "U_" + node(i) + "_" + veh(k); }
    std::string E(int i, int k) const { return "E_" + node(i) + "_" + veh(k); }
    std::string F(const std::string& a, int k) const { return "F_" + a + "_" + veh(k); }
    std::string P(const std::string& a, int r, int k) const { return "P_" + a + "_" + veh(r) + "_" + veh(k); }
    std::string Q(const std::string& a, int r, int s) const { return "Q_" + a + "_" + veh(r) + "_" + veh(s); }
    std::string Z(const std::string& a, int k) const { return "Z_" + a + "_" + veh(k); }
    std::string W(const std::string& a, int k) const { return "W_" + a + "_" + veh(k); }

    double charge_rate(int i) const {
        if (i == kDepot) return 0.0;
        const Node& n = inst.network().node(i);
        return n.is_cs ? n.charge_rate : 0.0;
    }
    double floor(int k, int i) const { return inst.floor_at(k, i); }
};

struct Builder {
    MilpModel& m;

    int add(const std::string& name, bool binary, double lo, double hi) {
        const int id = static_cast<int>(m.variables.size());
        m.variables.push_back({name, binary, lo, hi});
        m.index.emplace(name, id);
        return id;
    }
    Lin v(const std::string& name, double coef = 1.0) const { return Lin::var(m.index.at(name), coef); }

    void row(const std::string& family, const std::string& suffix, const Lin& lhs, MilpSense sense, const Lin& rhs) {
        const Lin d = lhs - rhs;
        MilpConstraint c;
        c.family = family;
        c.name = family + "_" + suffix;
        for (const auto& [var, coef] : d.terms)
            if (coef != 0.0) c.terms.push_back({var, coef});
        c.sense = sense;
        c.rhs = -d.constant;
        m.constraints.push_back(std::move(c));
    }
};

}  // namespace

MilpModel build_model(const Instance& inst, Scenario variant) {
    const Layout L(inst, variant);
    const Network& net = inst.network();
    const Params& prm = inst.params();
    MilpModel m;
    m.variant = variant;
    m.name = inst.name();
    Builder b{m};
    if (variant != Scenario::Pv2vc && inst.supplier_count() > 0)
        m.warnings.push_back(fmt::format("{} variant: {} supplier(s) ignored", scenario_name(variant), inst.supplier_count()));

    // Big-M: every schedule drives each arc and fills each battery at most once per vehicle.
    double drive = 0.0;
    for (const Arc& a : net.arcs()) drive += a.travel_time;
    double max_start = 0.0, max_cap = 0.0, horizon = 0.0;
    for (int k : L.vehicles) {
        max_start = std::max(max_start, inst.start_time(k));
        max_cap = std::max(max_cap, inst.capacity(k));
        horizon += drive;
        for (int c : net.charging_stations()) horizon += inst.full_charge_time(k, c);
    }
    m.big_m_time = max_start + horizon + 1.0;
    m.big_m_energy = max_cap + 1.0;
    const double Mt = m.big_m_time, Me = m.big_m_energy;
    const int nn = static_cast<int>(net.node_count());

    // Variables.
    for (int k : L.vehicles)
        for (const ModelArc& a : L.arcs)
            b.add(L.X(L.arc(a), k), true, 0.0, (!a.road() && inst.is_request(k)) ? 0.0 : 1.0);
    for (int k : L.vehicles) {
        for (int i = 0; i < nn; ++i) {
            b.add(L.T(i, k), false, 0.0, kInf);
            b.add(L.U(i, k), false, 0.0, kInf);
            b.add(L.E(i, k), false, 0.0, kInf);
        }
        if (!inst.is_request(k)) {
            b.add(L.T(kDepot, k), false, 0.0, kInf);
            b.add(L.E(kDepot, k), false, 0.0, kInf);
        }
    }
    if (L.platoons) {
        for (int k : L.vehicles)
            for (const ModelArc& a : L.arcs)
                if (a.road()) b.add(L.F(L.arc(a), k), true, 0.0, 1.0);
        for (const ModelArc& a : L.arcs) {
            if (!a.road()) continue;
            for (int r : L.requests)
                for (int k : L.vehicles)
                    if (k != r) b.add(L.P(L.arc(a), r, k), true, 0.0, 1.0);
        }
    }
    if (L.suppliers)
        for (const ModelArc& a : L.arcs) {
            if (!a.road()) continue;
            for (int r : L.requests)
                for (int s : L.supplier_ids) b.add(L.Q(L.arc(a), r, s), false, 0.0, 1.0);
        }
    for (int k : L.vehicles)
        for (const ModelArc& a : L.arcs) {
            if (!a.road() && inst.is_request(k)) continue;
            b.add(L.Z(L.arc(a), k), false, 0.0, kInf);
            b.add(L.W(L.arc(a), k), false, 0.0, kInf);
        }

    // Objective.
    Lin obj;
    for (int r : L.requests) {
        for (const ModelArc& a : L.arcs) {
            if (!a.road()) continue;
            const std::string an = L.arc(a);
            obj += b.v(L.X(an, r), prm.alpha * a.energy());
            if (L.platoons) obj += b.v(L.F(an, r), -prm.alpha * a.energy() * prm.platoon_saving);
        }
        obj += b.v(L.T(inst.request(r).destination(), r), prm.beta);
        obj.constant -= prm.beta * inst.start_time(r);
    }
    for (const auto& [var, coef] : obj.terms)
        if (coef != 0.0) m.objective.push_back({var, coef});
    m.objective_constant = obj.constant;

    std::vector<std::vector<const ModelArc*>> out(static_cast<std::size_t>(nn)), in(static_cast<std::size_t>(nn));
    std::vector<const ModelArc*> to_depot;
    for (const ModelArc& a : L.arcs) {
        out[a.from].push_back(&a);
        if (a.road())
            in[a.to].push_back(&a);
        else
            to_depot.push_back(&a);
    }
    auto flow_out = [&](int i, int k) {
        Lin l;
        for (const ModelArc* a : out[i]) l += b.v(L.X(L.arc(*a), k));
        return l;
    };
    auto flow_in = [&](int i, int k) {
        Lin l;
        for (const ModelArc* a : in[i]) l += b.v(L.X(L.arc(*a), k));
        return l;
    };

    // Routing.
    for (int r : L.requests) {
        const Request& req = inst.request(r);
        const std::string vr = L.veh(r);
        for (std::size_t n = 0; n + 1 < req.tasks.size(); ++n)
            b.row("c2", L.node(req.tasks[n]) + "_" + vr, flow_out(req.tasks[n], r), MilpSense::Eq, Lin(1.0));
        b.row("c3", L.node(req.destination()) + "_" + vr, flow_in(req.destination(), r), MilpSense::Eq, Lin(1.0));
        for (int i = 0; i < nn; ++i) {
            if (i == req.origin() || i == req.destination()) continue;
            b.row("c4", L.node(i) + "_" + vr, flow_out(i, r) - flow_in(i, r), MilpSense::Eq, Lin());
        }
    }
    for (int s : L.supplier_ids) {
        const std::string vs = L.veh(s);
        const int o = inst.origin(s);
        b.row("c5", L.node(o) + "_" + vs, flow_out(o, s), MilpSense::Eq, Lin(1.0));
        Lin depot;
        for (const ModelArc* a : to_depot) depot += b.v(L.X(L.arc(*a), s));
        b.row("c6", "D_" + vs, depot, MilpSense::Eq, Lin(1.0));
        for (int i = 0; i < nn; ++i) {
            if (i == o) continue;
            b.row("c7", L.node(i) + "_" + vs, flow_out(i, s) - flow_in(i, s), MilpSense::Eq, Lin());
        }
    }

    // Time.
    for (int k : L.vehicles)
        for (const ModelArc& a : L.arcs) {
            if (!a.road() && inst.is_request(k)) continue;
            const std::string an = L.arc(a);
            const Lin lhs = b.v(L.T(a.from, k)) + b.v(L.X(an, k), a.time) + b.v(L.U(a.from, k));
            const Lin rhs = b.v(L.T(a.to, k)) + Lin(Mt) - b.v(L.X(an, k), Mt);
            b.row("c17", an + "_" + L.veh(k), lhs, MilpSense::Le, rhs);
        }
    for (int k : L.vehicles)
        b.row("c18", L.node(inst.origin(k)) + "_" + L.veh(k), b.v(L.T(inst.origin(k), k)), MilpSense::Ge,
              Lin(inst.start_time(k)));
    for (int r : L.requests) {
        const auto& t = inst.request(r).tasks;
        for (std::size_t n = 0; n + 1 < t.size(); ++n)
            b.row("c19", L.node(t[n]) + "_" + L.node(t[n + 1]) + "_" + L.veh(r), b.v(L.T(t[n], r)), MilpSense::Le,
                  b.v(L.T(t[n + 1], r)));
    }

    // Platoons.
    if (L.platoons) {
        for (const ModelArc& a : L.arcs) {
            if (!a.road()) continue;
            const std::string an = L.arc(a);
            for (int r : L.requests)
                for (int k : L.vehicles) {
                    if (k == r) continue;
                    const std::string sfx = an + "_" + L.veh(r) + "_" + L.veh(k);
                    const std::string p = L.P(an, r, k);
                    const Lin dep_r = b.v(L.T(a.from, r)) + b.v(L.U(a.from, r));
                    const Lin dep_k = b.v(L.T(a.from, k)) + b.v(L.U(a.from, k));
                    const Lin slack = Lin(Mt) - b.v(p, Mt);
                    b.row("c20", sfx, dep_r - dep_k, MilpSense::Le, slack);
                    b.row("c21", sfx, dep_k - dep_r, MilpSense::Le, slack);
                    b.row("c22", sfx, b.v(L.T(a.to, r)) - b.v(L.T(a.to, k)), MilpSense::Le, slack);
                    b.row("c23", sfx, b.v(L.T(a.to, k)) - b.v(L.T(a.to, r)), MilpSense::Le, slack);
                    b.row("c24", sfx, b.v(p, 2.0), MilpSense::Le, b.v(L.X(an, r)) + b.v(L.X(an, k)));
                }
            for (int r : L.requests) {
                Lin sum;
                for (int k : L.vehicles)
                    if (k != r) sum += b.v(L.P(an, r, k));
                b.row("c25", an + "_" + L.veh(r), b.v(L.F(an, r)), MilpSense::Le, sum);
            }
            if (!L.suppliers) continue;
            for (int s : L.supplier_ids) {
                Lin sum;
                for (int r : L.requests) sum += b.v(L.P(an, r, s));
                b.row("c26", an + "_" + L.veh(s), b.v(L.F(an, s)), MilpSense::Le, sum);
            }
            for (int r : L.requests) {
                Lin sum;
                for (int s : L.supplier_ids) sum += b.v(L.P(an, r, s));
                b.row("c27", an + "_" + L.veh(r), sum, MilpSense::Le, Lin(1.0));
            }
            for (int s : L.supplier_ids) {
                Lin sum;
                for (int r : L.requests) sum += b.v(L.P(an, r, s));
                b.row("c28", an + "_" + L.veh(s), sum, MilpSense::Le, Lin(1.0));
            }
        }
    }

    // Energy conservation, linearized.
    const std::string tag = variant == Scenario::Evrp ? "b" : variant == Scenario::Evpp ? "c" : "";
    for (int k : L.vehicles) {
        const bool req = inst.is_request(k);
        const std::string vk = L.veh(k);
        for (const ModelArc& a : L.arcs) {
            if (!a.road() && req) continue;
            const std::string an = L.arc(a);
            const std::string sfx = an + "_" + vk;
            const Lin x = b.v(L.X(an, k));
            Lin expr = b.v(L.E(a.from, k)) + b.v(L.U(a.from, k), L.charge_rate(a.from)) - x * a.energy();
            if (L.platoons && a.road()) expr += b.v(L.F(an, k), a.energy() * prm.platoon_saving);
            if (L.suppliers && a.road()) {
                if (req) {
                    for (int s : L.supplier_ids)
                        expr += b.v(L.Q(an, k, s), prm.transfer_efficiency * a.time * inst.supplier(s).transfer_rate);
                } else {
                    for (int r : L.requests) expr -= b.v(L.Q(an, r, k), a.time * inst.supplier(k).transfer_rate);
                }
            }
            const Lin z = b.v(L.Z(an, k)), w = b.v(L.W(an, k)), ej = b.v(L.E(a.to, k));
            const Lin off = Lin(Me) - x * Me;
            const char* f[7] = {"c34", "c35", "c36", "c37", "c38", "c39", "c40"};
            const char* g[7] = {"c41", "c42", "c43", "c44", "c45", "c46", "c47"};
            const char* const* fam = req ? f : g;
            b.row(fam[0], sfx, z, MilpSense::Eq, w);
            b.row(fam[1], sfx, z, MilpSense::Le, x * Me);
            b.row(std::string(fam[2]) + (req ? tag : ""), sfx, z, MilpSense::Le, expr);
            b.row(std::string(fam[3]) + (req ? tag : ""), sfx, z, MilpSense::Ge, expr - off);
            b.row(fam[4], sfx, w, MilpSense::Le, x * Me);
            b.row(fam[5], sfx, w, MilpSense::Le, ej);
            b.row(fam[6], sfx, w, MilpSense::Ge, ej - off);
        }
    }
    if (L.suppliers)
        for (const ModelArc& a : L.arcs) {
            if (!a.road()) continue;
            const std::string an = L.arc(a);
            for (int r : L.requests)
                for (int s : L.supplier_ids)
                    b.row("c48", an + "_" + L.veh(r) + "_" + L.veh(s), b.v(L.Q(an, r, s)), MilpSense::Le,
                          b.v(L.P(an, r, s)));
        }

    // Battery limits and initial charge.
    for (int k : L.vehicles) {
        const bool req = inst.is_request(k);
        const std::string vk = L.veh(k);
        for (int i = 0; i < nn; ++i) {
            const std::string sfx = L.node(i) + "_" + vk;
            b.row(req ? "c49" : "c51", sfx, b.v(L.E(i, k)), MilpSense::Ge, Lin(L.floor(k, i)));
            b.row(req ? "c50" : "c52", sfx, b.v(L.E(i, k)) + b.v(L.U(i, k), L.charge_rate(i)), MilpSense::Le,
                  Lin(inst.capacity(k)));
        }
    }
    for (int k : L.vehicles)
        b.row("c53", L.node(inst.origin(k)) + "_" + L.veh(k), b.v(L.E(inst.origin(k), k)), MilpSense::Eq,
              Lin(inst.initial_soc(k)));
    return m;
}

namespace {

std::string num(double x) {
    if (x == 0.0) return "0";
    return fmt::format("{:.12g}", x);
}

void write_terms(std::string& out, const MilpModel& m, const std::vector<MilpTerm>& terms, std::size_t indent) {
    std::size_t col = indent;
    for (const MilpTerm& t : terms) {
        std::string piece = fmt::format("{} {} {}", t.coef < 0 ? "-" : "+", num(std::fabs(t.coef)), m.variables[t.var].name);
        if (col + piece.size() + 1 > 200) {
            out += "\n   ";
            col = 3;
        }
        out += " " + piece;
        col += piece.size() + 1;
    }
    if (terms.empty()) out += " 0 " + m.variables.front().name;
}

const char* sense_text(MilpSense s) { return s == MilpSense::Le ? "<=" : s == MilpSense::Ge ? ">=" : "="; }

}  // namespace

std::string write_lp(const MilpModel& m) {
    std::string out;
    out += fmt::format("\\ pv2vc model: {}\n", m.name);
    out += fmt::format("\\ variant: {}\n", scenario_name(m.variant));
    out += fmt::format("\\ big_m_time: {}\n", num(m.big_m_time));
    out += fmt::format("\\ big_m_energy: {}\n", num(m.big_m_energy));
    out += fmt::format("\\ objective constant: {}\n", num(m.objective_constant));
    for (const auto& w : m.warnings) out += fmt::format("\\ warning: {}\n", w);
    out += "Minimize\n obj:";
    write_terms(out, m, m.objective, 5);
    out += "\nSubject To\n";
    for (const MilpConstraint& c : m.constraints) {
        out += " " + c.name + ":";
        write_terms(out, m, c.terms, c.name.size() + 2);
        out += fmt::format(" {} {}\n", sense_text(c.sense), num(c.rhs));
    }
    out += "Bounds\n";
    for (const MilpVariable& v : m.variables) {
        if (v.binary && v.upper == 1.0) continue;
        if (std::isinf(v.upper))
            continue;  // default [0, inf)
        out += fmt::format(" {} <= {} <= {}\n", num(v.lower), v.name, num(v.upper));
    }
    out += "Binaries\n";
    for (const MilpVariable& v : m.variables)
        if (v.binary) out += " " + v.name + "\n";
    out += "End\n";
    return out;
}

CheckReport check_assignment(const MilpModel& m, const Assignment& values, double tol) {
    std::vector<double> x(m.variables.size(), 0.0);
    for (std::size_t i = 0; i < m.variables.size(); ++i) {
        const auto it = values.find(m.variables[i].name);
        if (it == values.end()) throw Error("missing value for variable " + m.variables[i].name);
        x[i] = it->second;
    }
    CheckReport rep;
    auto note = [&](const std::string& name, const std::string& family, double amount) {
        rep.max_violation = std::max(rep.max_violation, amount);
        if (amount > tol) rep.violations.push_back({name, family, amount});
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        const MilpVariable& v = m.variables[i];
        note(v.name, "bound", std::max({0.0, v.lower - x[i], x[i] - v.upper}));
        if (v.binary) note(v.name, "integrality", std::fabs(x[i] - std::round(x[i])));
    }
    for (const MilpConstraint& c : m.constraints) {
        double lhs = 0.0;
        for (const MilpTerm& t : c.terms) lhs += t.coef * x[t.var];
        const double gap = c.sense == MilpSense::Le   ? lhs - c.rhs
                           : c.sense == MilpSense::Ge ? c.rhs - lhs
                                                      : std::fabs(lhs - c.rhs);
        note(c.name, c.family, std::max(0.0, gap));
    }
    rep.objective = m.objective_constant;
    for (const MilpTerm& t : m.objective) rep.objective += t.coef * x[t.var];
    rep.pass = rep.violations.empty();
    return rep;
}

Assignment encode_plan(const PlanSet& plans_in, const Instance& inst, const MilpModel& model) {
    const Layout L(inst, model.variant);
    const Network& net = inst.network();
    PlanSet plans = plans_in;
    std::vector<bool> active(static_cast<std::size_t>(inst.vehicle_count()), false);
    for (int k : L.vehicles) active[k] = true;
    const auto problems = check_structure(plans, inst, active, model.variant);
    if (!problems.empty()) throw Error("plan set rejected: " + problems.front());
    synchronize(plans, inst, active);
    const EnergyTrace trace = simulate_energy(plans, inst, active);

    Assignment a;
    for (const MilpVariable& v : model.variables) a[v.name] = 0.0;
    auto set = [&](const std::string& name, double value) {
        const auto it = a.find(name);
        if (it == a.end()) throw Error("plan uses a variable absent from the model: " + name);
        it->second = value;
    };
    const int nn = static_cast<int>(net.node_count());
    for (int k : L.vehicles)
        for (int i = 0; i < nn; ++i) set(L.E(i, k), L.floor(k, i));

    for (int k : L.vehicles) {
        const Plan& p = plans[k];
        const VehicleTrace& vt = trace.vehicles[k];
        for (std::size_t s = 0; s < p.positions(); ++s) {
            const int node = p.nodes[s];
            set(L.T(node, k), p.arrival[s]);
            set(L.U(node, k), p.total_dwell(s));
            set(L.E(node, k), vt.soc_arrival[s]);
            if (s + 1 == p.positions()) break;
            const auto& leg = p.legs[s];
            double t = p.departure(s);
            for (std::size_t i = 1; i < leg.size(); ++i) {
                const std::string an = L.arc(leg[i - 1], leg[i]);
                if (model.find(L.X(an, k)) < 0) throw Error("plan uses an arc absent from the model: " + an);
                t += net.arc_between(leg[i - 1], leg[i]).travel_time;
                const double soc = vt.segments[s].node_soc[i - 1];
                set(L.X(an, k), 1.0);
                set(L.Z(an, k), soc);
                set(L.W(an, k), soc);
                if (i + 1 < leg.size()) {
                    set(L.T(leg[i], k), t);
                    set(L.U(leg[i], k), 0.0);
                    set(L.E(leg[i], k), soc);
                }
                if (L.platoons && !p.companions[s].empty()) set(L.F(an, k), 1.0);
            }
        }
        if (!inst.is_request(k)) {
            const int last = p.nodes.back();
            const std::string an = L.arc(last, kDepot);
            set(L.X(an, k), 1.0);
            set(L.T(kDepot, k), p.departure(p.positions() - 1));
            set(L.E(kDepot, k), vt.final_soc);
            set(L.Z(an, k), vt.final_soc);
            set(L.W(an, k), vt.final_soc);
        }
    }

    // Platoon pairs: requests pair with every companion request; suppliers are matched one-to-one,
    // transferring partners first, then idle riders onto requests left without a supplier.
    if (L.platoons)
        for (int r : L.requests) {
            const Plan& p = plans[r];
            for (std::size_t s = 0; s < p.segments(); ++s) {
                const auto& comp = p.companions[s];
                if (comp.empty()) continue;
                std::vector<int> members = comp;
                members.push_back(r);
                std::sort(members.begin(), members.end());
                std::map<int, int> match;  // supplier -> request
                std::map<int, double> share;
                std::set<int> taken;
                for (int u : members) {
                    if (inst.is_request(u)) continue;
                    const int su = find_segment(plans[u], p.nodes[s], p.nodes[s + 1]);
                    if (plans[u].paired[su] >= 0) {
                        match[u] = plans[u].paired[su];
                        share[u] = plans[u].fraction[su];
                        taken.insert(plans[u].paired[su]);
                    }
                }
                for (int u : members) {
                    if (inst.is_request(u) || match.count(u)) continue;
                    for (int q : members)
                        if (inst.is_request(q) && !taken.count(q)) {
                            match[u] = q;
                            taken.insert(q);
                            break;
                        }
                }
                const auto& leg = p.legs[s];
                for (std::size_t i = 1; i < leg.size(); ++i) {
                    const std::string an = L.arc(leg[i - 1], leg[i]);
                    for (int k : comp)
                        if (inst.is_request(k)) set(L.P(an, r, k), 1.0);
                    for (const auto& [u, q] : match)
                        if (q == r) {
                            set(L.P(an, r, u), 1.0);
                            if (share.count(u)) set(L.Q(an, r, u), share[u]);
                        }
                }
            }
        }
    return a;
}

Assignment parse_assignment(const std::string& text) {
    Assignment out;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#' || line[first] == '\\') continue;
        std::istringstream ls(line);
        std::string name, value, extra;
        ls >> name >> value;
        if (name.empty() || value.empty() || (ls >> extra))
            throw Error(fmt::format("assignment line {}: expected 'name value'", n));
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            out[name] = v;
        } catch (const std::exception&) {
            throw Error(fmt::format("assignment line {}: bad number '{}'", n, value));
        }
    }
    return out;
}

std::string write_assignment(const Assignment& values) {
    std::string out;
    for (const auto& [name, v] : values) out += fmt::format("{} {}\n", name, v);
    return out;
}

}  // namespace pv2vc
