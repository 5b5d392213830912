#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pv2vc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
    int id = 0;
    int label = 0;  // external id as written in input files
    bool is_cs = false;
    double charge_rate = 0.0;  // kWh/min
};

struct Arc {
    int from = 0;
    int to = 0;
    double distance = 0.0;         // miles
    double travel_time = 0.0;      // minutes
    double consumption_rate = 0.0;  // kWh/mile
};

class Network {
public:
    Network() = default;
    Network(std::vector<Node> nodes, std::vector<Arc> arcs);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    const Arc& arc(int index) const { return arcs_.at(static_cast<std::size_t>(index)); }
    const std::vector<int>& out_arcs(int id) const { return out_.at(static_cast<std::size_t>(id)); }
    const std::vector<int>& in_arcs(int id) const { return in_.at(static_cast<std::size_t>(id)); }

    // Arc index for the directed pair, or -1.
    int find_arc(int from, int to) const;
    const Arc& arc_between(int from, int to) const;

    int id_of_label(int label) const;  // throws on unknown label
    std::optional<int> try_id_of_label(int label) const;

    void set_charging_station(int id, double rate);
    std::vector<int> charging_stations() const;

private:
    void build_index();

    std::vector<Node> nodes_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<int> arc_lookup_;  // node_count^2, -1 when absent
};

struct TntpOptions {
    double speed = 1.0;             // mi/min
    double consumption_rate = 0.4;  // kWh/mile
    double distance_scale = 1.0;    // multiplier applied to the free-flow column
};

Network parse_tntp(const std::string& text, const TntpOptions& options = {});

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, std::vector<double> dist, std::vector<int> next_hop)
        : n_(n), dist_(std::move(dist)), next_(std::move(next_hop)) {}

    std::size_t size() const { return n_; }
    double dist(int i, int j) const { return dist_[index(i, j)]; }
    int next_hop(int i, int j) const { return next_[index(i, j)]; }
    bool reachable(int i, int j) const { return dist(i, j) < kInf; }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j);
    }
    std::size_t n_ = 0;
    std::vector<double> dist_;
    std::vector<int> next_;
};

DistanceMatrix all_pairs_shortest(const Network& net);

struct CsReserve {
    std::vector<double> sigma;
    std::vector<int> nearest_cs;  // -1 when no CS is reachable
};

CsReserve cs_reserves(const Network& net, const DistanceMatrix& dm, double rate);

struct Detour {
    int cs = -1;
    double detour = 0.0;
};

Detour min_detour_cs(const Network& net, const DistanceMatrix& dm, int i, int j);

std::vector<int> canonical_path(const DistanceMatrix& dm, int i, int j);

// Shortest-distance path from i to j whose interior avoids blocked nodes; empty if none.
std::vector<int> path_avoiding(const Network& net, int i, int j, const std::vector<bool>& blocked);

// Sums over consecutive arcs of a node path.
double path_distance(const Network& net, const std::vector<int>& path);
double path_time(const Network& net, const std::vector<int>& path);

}  // namespace pv2vc
