#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "pv2vc/instance.hpp"
#include "pv2vc/network.hpp"

using namespace pv2vc;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Bellman-Ford from one source; independent of the library's search.
std::vector<double> reference_distances(const Network& net, int src) {
    std::vector<double> d(net.node_count(), kInf);
    d[src] = 0.0;
    for (std::size_t round = 0; round < net.node_count(); ++round)
        for (const Arc& a : net.arcs())
            if (d[a.from] + a.distance < d[a.to]) d[a.to] = d[a.from] + a.distance;
    return d;
}

Network random_network(std::mt19937_64& rng, int n, int extra_edges, bool with_cs) {
    std::vector<Node> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = Node{i, i, false, 0.0};
    std::vector<Arc> arcs;
    std::set<std::pair<int, int>> used;
    auto add = [&](int a, int b, double d) {
        if (a == b || used.count({a, b})) return;
        used.insert({a, b});
        used.insert({b, a});
        arcs.push_back(Arc{a, b, d, d, 0.4});
        arcs.push_back(Arc{b, a, d, d, 0.4});
    };
    std::uniform_int_distribution<int> len(1, 20);
    for (int i = 1; i < n; ++i) add(i, static_cast<int>(rng() % i), len(rng));
    for (int k = 0; k < extra_edges; ++k) add(static_cast<int>(rng() % n), static_cast<int>(rng() % n), len(rng));
    Network net(nodes, arcs);
    if (with_cs) net.set_charging_station(static_cast<int>(rng() % n), 3.0);
    return net;
}

}  // namespace

TEST(Network, FixtureShortestDistances) {
    const Instance inst = illustrative_instance();
    const auto& dm = inst.distances();
    EXPECT_DOUBLE_EQ(dm.dist(0, 3), 80.0);
    EXPECT_DOUBLE_EQ(dm.dist(2, 4), 90.0);
    for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(dm.dist(i, i), 0.0);
}

TEST(Network, FixtureCanonicalPaths) {
    const Instance inst = illustrative_instance();
    EXPECT_EQ(canonical_path(inst.distances(), 0, 3), (std::vector<int>{0, 1, 3}));
    EXPECT_EQ(canonical_path(inst.distances(), 2, 4), (std::vector<int>{2, 3, 4}));
    EXPECT_EQ(canonical_path(inst.distances(), 3, 3), (std::vector<int>{3}));
}

TEST(Network, FixtureReserves) {
    const Instance inst = illustrative_instance();
    const auto& sigma = inst.reserve().sigma;
    EXPECT_DOUBLE_EQ(sigma[2], 0.0);
    EXPECT_DOUBLE_EQ(sigma[4], 0.0);
    EXPECT_DOUBLE_EQ(sigma[1], 12.0);
    EXPECT_DOUBLE_EQ(sigma[0], 16.0);
    EXPECT_DOUBLE_EQ(sigma[3], 12.0);
    EXPECT_EQ(inst.reserve().nearest_cs[1], 2);
}

TEST(Network, FixtureMinDetour) {
    const Instance inst = illustrative_instance();
    const auto a = min_detour_cs(inst.network(), inst.distances(), 0, 1);
    EXPECT_EQ(a.cs, 2);
    EXPECT_DOUBLE_EQ(a.detour, 30.0);
    const auto b = min_detour_cs(inst.network(), inst.distances(), 2, 3);
    EXPECT_EQ(b.cs, 2);
    EXPECT_DOUBLE_EQ(b.detour, 0.0);
    const auto c = min_detour_cs(inst.network(), inst.distances(), 0, 4);
    EXPECT_EQ(c.cs, 4);
    EXPECT_DOUBLE_EQ(c.detour, 0.0);
}

TEST(Network, NoChargingStationIsAnError) {
    std::vector<Node> nodes{{0, 0, false, 0.0}, {1, 1, false, 0.0}};
    Network net(nodes, {Arc{0, 1, 5, 5, 0.4}});
    const auto dm = all_pairs_shortest(net);
    EXPECT_THROW(cs_reserves(net, dm, 0.4), Error);
}

TEST(Network, UnreachableIsInfinite) {
    std::vector<Node> nodes{{0, 0, false, 0.0}, {1, 1, false, 0.0}};
    Network net(nodes, {Arc{0, 1, 5, 5, 0.4}});
    const auto dm = all_pairs_shortest(net);
    EXPECT_EQ(dm.dist(1, 0), kInf);
    EXPECT_THROW(canonical_path(dm, 1, 0), Error);
}

TEST(Tntp, SiouxFallsCounts) {
    const Network net = parse_tntp(read_text(std::string(PV2VC_DATA_DIR) + "/SiouxFalls_net.tntp"));
    EXPECT_EQ(net.node_count(), 24u);
    EXPECT_EQ(net.arc_count(), 76u);
}

TEST(Tntp, FreeFlowReadAsMiles) {
    const std::string text =
        "<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 1\n<END OF METADATA>\n"
        "~ init term cap len fft ;\n1 2 100 5 40 0.15 4 0 0 1 ;\n";
    const Network net = parse_tntp(text, TntpOptions{1.0, 0.4, 1.0});
    ASSERT_EQ(net.arc_count(), 1u);
    EXPECT_DOUBLE_EQ(net.arc(0).distance, 40.0);
    EXPECT_DOUBLE_EQ(net.arc(0).travel_time, 40.0);
}

TEST(Tntp, ErrorsCarryLineNumbers) {
    try {
        parse_tntp("<NUMBER OF NODES> 0\n<END OF METADATA>\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("empty network"), std::string::npos);
    }
    try {
        parse_tntp("<NUMBER OF NODES> 2\n<END OF METADATA>\n1 2 3\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    try {
        parse_tntp("<NUMBER OF NODES> 2\n<END OF METADATA>\n1 7 3 4 5 ;\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("dangling"), std::string::npos);
    }
    EXPECT_THROW(parse_tntp("NUMBER OF NODES 2\n"), Error);
}

TEST(NetworkProperty, AgreesWithReferenceSearch) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 49);
        const Network net = random_network(rng, n, n, false);
        const auto dm = all_pairs_shortest(net);
        for (int s = 0; s < n; ++s) {
            const auto ref = reference_distances(net, s);
            for (int t = 0; t < n; ++t) {
                EXPECT_NEAR(dm.dist(s, t), ref[t], 1e-9);
                const auto path = canonical_path(dm, s, t);
                EXPECT_NEAR(path_distance(net, path), dm.dist(s, t), 1e-9);
                for (int k = 0; k < n; ++k) EXPECT_LE(dm.dist(s, t), dm.dist(s, k) + dm.dist(k, t) + 1e-9);
            }
        }
    }
}

TEST(NetworkProperty, ReservesMonotoneAndDetoursNonNegative) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 20);
        Network net = random_network(rng, n, n / 2, true);
        auto dm = all_pairs_shortest(net);
        const auto before = cs_reserves(net, dm, 0.4);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) EXPECT_GE(min_detour_cs(net, dm, i, j).detour, 0.0);
        int extra = static_cast<int>(rng() % n);
        if (!net.node(extra).is_cs) net.set_charging_station(extra, 3.0);
        const auto after = cs_reserves(net, dm, 0.4);
        for (int i = 0; i < n; ++i) EXPECT_LE(after.sigma[i], before.sigma[i]);
    }
}

TEST(Network, PathAvoidingDetoursAroundBlockedNodes) {
    const Instance inst = illustrative_instance();
    const Network& net = inst.network();
    std::vector<bool> blocked(net.node_count(), false);
    EXPECT_EQ(path_avoiding(net, 0, 3, blocked), canonical_path(inst.distances(), 0, 3));
    blocked[1] = true;
    const auto path = path_avoiding(net, 0, 3, blocked);
    ASSERT_FALSE(path.empty());
    EXPECT_EQ(path.front(), 0);
    EXPECT_EQ(path.back(), 3);
    for (std::size_t k = 1; k + 1 < path.size(); ++k) EXPECT_FALSE(blocked[path[k]]);
    // Blocking the end point itself does not matter; blocking every neighbour of the source does.
    std::vector<bool> all(net.node_count(), true);
    EXPECT_EQ(path_avoiding(net, 0, 1, all), (std::vector<int>{0, 1}));
    EXPECT_TRUE(path_avoiding(net, 0, 3, all).empty());
}
