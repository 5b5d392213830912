#include "pv2vc/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include <fmt/format.h>

namespace pv2vc {

namespace {

constexpr double kTieTol = 1e-9;

bool nearly_equal(double a, double b) {
    if (a == kInf || b == kInf) return a == b;
    return std::fabs(a - b) <= kTieTol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

Network::Network(std::vector<Node> nodes, std::vector<Arc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    if (nodes_.empty()) throw Error("empty network");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id != static_cast<int>(i))
            throw Error(fmt::format("node ids must be dense: position {} holds id {}", i, nodes_[i].id));
        if ((nodes_[i].charge_rate > 0.0) != nodes_[i].is_cs)
            throw Error(fmt::format("node {}: charge rate must be positive exactly for CS nodes", i));
    }
    for (const Arc& a : arcs_) {
        const int n = static_cast<int>(nodes_.size());
        if (a.from < 0 || a.from >= n || a.to < 0 || a.to >= n)
            throw Error(fmt::format("arc {}->{} references an unknown node", a.from, a.to));
        if (a.from == a.to) throw Error(fmt::format("self loop at node {}", a.from));
        if (!(a.distance > 0.0) || !(a.travel_time > 0.0) || !(a.consumption_rate > 0.0))
            throw Error(fmt::format("arc {}->{} must have positive distance, time and consumption", a.from, a.to));
    }
    build_index();
}

void Network::build_index() {
    const std::size_t n = nodes_.size();
    out_.assign(n, {});
    in_.assign(n, {});
    arc_lookup_.assign(n * n, -1);
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
        const Arc& a = arcs_[k];
        auto& slot = arc_lookup_[static_cast<std::size_t>(a.from) * n + static_cast<std::size_t>(a.to)];
        if (slot != -1)
            throw Error(fmt::format("duplicate arc {}->{}", nodes_[a.from].label, nodes_[a.to].label));
        slot = static_cast<int>(k);
        out_[a.from].push_back(static_cast<int>(k));
        in_[a.to].push_back(static_cast<int>(k));
    }
    for (auto& list : out_)
        std::sort(list.begin(), list.end(), [&](int x, int y) { return arcs_[x].to < arcs_[y].to; });
    for (auto& list : in_)
        std::sort(list.begin(), list.end(), [&](int x, int y) { return arcs_[x].from < arcs_[y].from; });
}

int Network::find_arc(int from, int to) const {
    const int n = static_cast<int>(nodes_.size());
    if (from < 0 || to < 0 || from >= n || to >= n) return -1;
    return arc_lookup_[static_cast<std::size_t>(from) * nodes_.size() + static_cast<std::size_t>(to)];
}

const Arc& Network::arc_between(int from, int to) const {
    const int k = find_arc(from, to);
    if (k < 0) throw Error(fmt::format("no arc {}->{}", from, to));
    return arcs_[static_cast<std::size_t>(k)];
}

std::optional<int> Network::try_id_of_label(int label) const {
    for (const Node& n : nodes_)
        if (n.label == label) return n.id;
    return std::nullopt;
}

int Network::id_of_label(int label) const {
    if (auto id = try_id_of_label(label)) return *id;
    throw Error(fmt::format("unknown node {}", label));
}

void Network::set_charging_station(int id, double rate) {
    if (id < 0 || id >= static_cast<int>(nodes_.size())) throw Error(fmt::format("unknown node {}", id));
    if (!(rate > 0.0)) throw Error(fmt::format("charging rate at node {} must be positive", nodes_[id].label));
    nodes_[id].is_cs = true;
    nodes_[id].charge_rate = rate;
}

std::vector<int> Network::charging_stations() const {
    std::vector<int> out;
    for (const Node& n : nodes_)
        if (n.is_cs) out.push_back(n.id);
    return out;
}

Network parse_tntp(const std::string& text, const TntpOptions& options) {
    if (!(options.speed > 0.0)) throw Error("speed must be positive");
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    long declared_nodes = -1;
    long declared_links = -1;
    bool in_body = false;
    std::vector<Arc> arcs;

    auto strip = [](std::string s) {
        const auto tilde = s.find('~');
        if (tilde != std::string::npos) s.erase(tilde);
        const auto semi = s.find(';');
        if (semi != std::string::npos) s.erase(semi);
        return s;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!in_body) {
            const auto trimmed_start = line.find_first_not_of(" \t\r");
            if (trimmed_start == std::string::npos || line[trimmed_start] == '~') continue;
            const std::string body = line.substr(trimmed_start);
            if (body.rfind("<END OF METADATA>", 0) == 0) {
                in_body = true;
                continue;
            }
            if (body[0] != '<') throw Error(fmt::format("line {}: malformed header (expected <TAG> value)", line_no));
            const auto close = body.find('>');
            if (close == std::string::npos) throw Error(fmt::format("line {}: malformed header tag", line_no));
            const std::string tag = body.substr(1, close - 1);
            std::istringstream value(body.substr(close + 1));
            long v = 0;
            if (tag == "NUMBER OF NODES" || tag == "NUMBER OF LINKS") {
                if (!(value >> v) || v < 0)
                    throw Error(fmt::format("line {}: malformed header value for <{}>", line_no, tag));
                (tag == "NUMBER OF NODES" ? declared_nodes : declared_links) = v;
            }
            continue;
        }
        std::istringstream row(strip(line));
        std::vector<std::string> cols;
        for (std::string tok; row >> tok;) cols.push_back(tok);
        if (cols.empty()) continue;
        if (cols.size() < 5)
            throw Error(fmt::format("line {}: link row has {} columns, expected at least 5", line_no, cols.size()));
        long from = 0, to = 0;
        double fft = 0.0;
        try {
            std::size_t pos = 0;
            from = std::stol(cols[0], &pos);
            if (pos != cols[0].size()) throw std::invalid_argument("init");
            to = std::stol(cols[1], &pos);
            if (pos != cols[1].size()) throw std::invalid_argument("term");
            fft = std::stod(cols[4], &pos);
            if (pos != cols[4].size()) throw std::invalid_argument("fft");
        } catch (const std::exception&) {
            throw Error(fmt::format("line {}: malformed link row", line_no));
        }
        if (declared_nodes >= 0 && (from < 1 || from > declared_nodes || to < 1 || to > declared_nodes))
            throw Error(fmt::format("line {}: dangling node reference {}->{}", line_no, from, to));
        if (!(fft > 0.0)) throw Error(fmt::format("line {}: free-flow value must be positive", line_no));
        Arc a;
        a.from = static_cast<int>(from - 1);
        a.to = static_cast<int>(to - 1);
        a.distance = fft * options.distance_scale;
        a.travel_time = a.distance / options.speed;
        a.consumption_rate = options.consumption_rate;
        arcs.push_back(a);
    }
    if (declared_nodes < 0) throw Error("malformed header: missing <NUMBER OF NODES>");
    if (declared_nodes == 0) throw Error("empty network");
    if (!in_body) throw Error("malformed header: missing <END OF METADATA>");
    if (declared_links >= 0 && static_cast<long>(arcs.size()) != declared_links)
        throw Error(fmt::format("header declares {} links but {} rows were read", declared_links, arcs.size()));

    std::vector<Node> nodes(static_cast<std::size_t>(declared_nodes));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        nodes[i].id = static_cast<int>(i);
        nodes[i].label = static_cast<int>(i + 1);
    }
    return Network(std::move(nodes), std::move(arcs));
}

DistanceMatrix all_pairs_shortest(const Network& net) {
    const std::size_t n = net.node_count();
    std::vector<double> dist(n * n, kInf);
    std::vector<int> next(n * n, -1);

    // Dijkstra towards each target over reversed arcs, then pick the lowest-id next hop.
    using Item = std::pair<double, int>;
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<double> d(n, kInf);
        d[t] = 0.0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, static_cast<int>(t)});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > d[u]) continue;
            for (int k : net.in_arcs(u)) {
                const Arc& a = net.arc(k);
                const double nd = du + a.distance;
                if (nd < d[a.from]) {
                    d[a.from] = nd;
                    pq.push({nd, a.from});
                }
            }
        }
        for (std::size_t s = 0; s < n; ++s) {
            dist[s * n + t] = d[s];
            if (s == t) {
                next[s * n + t] = static_cast<int>(t);
                continue;
            }
            if (d[s] == kInf) continue;
            int best = -1;
            for (int k : net.out_arcs(static_cast<int>(s))) {  // sorted by head id
                const Arc& a = net.arc(k);
                if (d[a.to] < kInf && nearly_equal(a.distance + d[a.to], d[s])) {
                    best = a.to;
                    break;
                }
            }
            next[s * n + t] = best;
        }
    }
    return DistanceMatrix(n, std::move(dist), std::move(next));
}

CsReserve cs_reserves(const Network& net, const DistanceMatrix& dm, double rate) {
    const auto stations = net.charging_stations();
    if (stations.empty()) throw Error("no charging station");
    CsReserve out;
    out.sigma.assign(net.node_count(), kInf);
    out.nearest_cs.assign(net.node_count(), -1);
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        double best = kInf;
        for (int c : stations) {
            const double d = dm.dist(static_cast<int>(i), c);
            if (d < best) {
                best = d;
                out.nearest_cs[i] = c;
            }
        }
        out.sigma[i] = best < kInf ? rate * best : kInf;
    }
    return out;
}

Detour min_detour_cs(const Network& net, const DistanceMatrix& dm, int i, int j) {
    Detour best;
    double best_sum = kInf;
    for (int c : net.charging_stations()) {
        const double sum = dm.dist(i, c) + dm.dist(c, j);
        if (sum < best_sum && !nearly_equal(sum, best_sum)) {
            best_sum = sum;
            best.cs = c;
        }
    }
    if (best.cs < 0 || best_sum == kInf)
        throw Error(fmt::format("no charging station reachable between nodes {} and {}", i, j));
    best.detour = std::max(0.0, best_sum - dm.dist(i, j));
    return best;
}

std::vector<int> canonical_path(const DistanceMatrix& dm, int i, int j) {
    if (!dm.reachable(i, j)) throw Error(fmt::format("node {} cannot reach node {}", i, j));
    std::vector<int> path{i};
    int cur = i;
    while (cur != j) {
        cur = dm.next_hop(cur, j);
        if (cur < 0 || path.size() > dm.size()) throw Error("broken next-hop table");
        path.push_back(cur);
    }
    return path;
}

std::vector<int> path_avoiding(const Network& net, int i, int j, const std::vector<bool>& blocked) {
    const std::size_t n = net.node_count();
    std::vector<double> dist(n, kInf);
    std::vector<int> prev(n, -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[static_cast<std::size_t>(i)] = 0.0;
    queue.push({0.0, i});
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[static_cast<std::size_t>(u)] || u == j) continue;
        for (int a : net.out_arcs(u)) {
            const Arc& arc = net.arc(a);
            const auto w = static_cast<std::size_t>(arc.to);
            if (arc.to != j && (arc.to == i || blocked[w])) continue;
            // Ties go to the lower predecessor id so the result is reproducible.
            const double nd = d + arc.distance;
            if (nd < dist[w] || (nd == dist[w] && u < prev[w])) {
                dist[w] = nd;
                prev[w] = u;
                queue.push({nd, arc.to});
            }
        }
    }
    if (i == j || prev[static_cast<std::size_t>(j)] < 0) return {};
    std::vector<int> path{j};
    for (int cur = j; cur != i;) {
        cur = prev[static_cast<std::size_t>(cur)];
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double path_distance(const Network& net, const std::vector<int>& path) {
    double s = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) s += net.arc_between(path[k - 1], path[k]).distance;
    return s;
}

double path_time(const Network& net, const std::vector<int>& path) {
    double s = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) s += net.arc_between(path[k - 1], path[k]).travel_time;
    return s;
}

}  // namespace pv2vc
