#include <gtest/gtest.h>

#include "pv2vc/milp_export.hpp"
#include "pv2vc/oracle.hpp"
#include "support/random_instances.hpp"

using namespace pv2vc;

namespace {

Instance without_cs2() {
    const Instance inst = illustrative_instance();
    std::vector<Node> nodes = inst.network().nodes();
    nodes[2].is_cs = false;
    nodes[2].charge_rate = 0.0;
    return inst.with_network(Network(nodes, inst.network().arcs()));
}

Instance scaled_weights(const Instance& inst, double k) {
    Params p = inst.params();
    p.alpha *= k;
    p.beta *= k;
    return Instance(inst.name(), inst.network(), inst.requests(), inst.suppliers(), p);
}

}  // namespace

TEST(Oracle, MinimalChargingRequestOne) {
    const Instance inst = illustrative_instance();
    const ChargingPlan c = minimal_charging(inst, 0, {0, 2, 1, 3});
    ASSERT_TRUE(c.feasible);
    EXPECT_NEAR(c.charge[1], 26.0, 1e-9);
    EXPECT_NEAR(c.dwell[1], 26.0 / 3.0, 1e-9);
}

TEST(Oracle, MinimalChargingRequestTwo) {
    const Instance inst = illustrative_instance();
    const ChargingPlan c = minimal_charging(inst, 1, {0, 2, 3, 4});
    ASSERT_TRUE(c.feasible);
    EXPECT_NEAR(c.charge[1], 19.0, 1e-9);
    EXPECT_NEAR(c.dwell[1], 19.0 / 3.0, 1e-9);
}

TEST(Oracle, MinimalChargingZeroWhenNotNeeded) {
    const Instance inst = illustrative_instance();
    // Supplier 45 kWh over 2-1-3 (28 kWh) with floor reserves is fine without charging.
    const ChargingPlan c = minimal_charging(inst, 2, {2, 1, 3, 4});
    ASSERT_TRUE(c.feasible);
    for (double g : c.charge) EXPECT_EQ(g, 0.0);
}

TEST(Oracle, MinimalChargingUncoverableGap) {
    const Instance inst = illustrative_instance();
    // Request one cannot reach node 3 directly from the origin without a CS.
    EXPECT_FALSE(minimal_charging(inst, 0, {0, 1, 3}).feasible);
}

TEST(Oracle, ExactEvrpFixture) {
    const Instance inst = illustrative_instance();
    const OracleResult res = exact_evrp(inst);
    ASSERT_TRUE(res.feasible);
    EXPECT_NEAR(res.objective, 351.0, 1e-9);
    EXPECT_NEAR(res.eval.vehicles[0].total, 162.0 + 2.0 / 3.0, 1e-9);
    EXPECT_NEAR(res.eval.vehicles[1].total, 188.0 + 1.0 / 3.0, 1e-9);
    EXPECT_EQ(res.plans[0].nodes, (std::vector<int>{0, 2, 1, 3}));
    EXPECT_EQ(res.plans[1].nodes, (std::vector<int>{0, 2, 3, 4}));
}

TEST(Oracle, NoChargeRequestGetsBareChainCost) {
    const Instance base = illustrative_instance();
    std::vector<Request> reqs{base.requests()[0]};
    reqs[0].initial_soc = 90.0;
    const Instance inst("full", base.network(), reqs, {}, base.params());
    const OracleResult res = exact_evrp(inst);
    ASSERT_TRUE(res.feasible);
    EXPECT_NEAR(res.objective, 0.4 * 80.0 + 80.0, 1e-9);  // 0-1-3, no charging
}

TEST(Oracle, RemovingCs2LeavesRequestOneUnservable) {
    // The only other CS is node 4, a dead end past node 3; a simple walk cannot charge
    // there and come back, so request one has no feasible route at all.
    const OracleResult res = exact_evrp(without_cs2());
    EXPECT_FALSE(res.feasible);
    EXPECT_EQ(res.objective, kInf);
}

TEST(Oracle, ExactSmallEvrpMatchesPerRequestOptimum) {
    const Instance inst = illustrative_instance();
    EXPECT_NEAR(exact_small(inst, Scenario::Evrp).objective, exact_evrp(inst).objective, 1e-9);
}

TEST(Oracle, ExactSmallEvppFixture) {
    const Instance inst = illustrative_instance();
    const OracleResult res = exact_small(inst, Scenario::Evpp);
    ASSERT_TRUE(res.feasible);
    EXPECT_NEAR(res.objective, 346.0 + 11.0 / 15.0, 1e-9);
    EXPECT_NEAR(res.plans[0].dwell[1], 24.4 / 3.0, 1e-7);
    EXPECT_NEAR(res.plans[1].dwell[1], 17.4 / 3.0, 1e-7);
    EXPECT_TRUE(has_groups(res.plans[0]));
}

TEST(Oracle, ExactSmallPv2vcFixture) {
    const Instance inst = illustrative_instance();
    const OracleResult res = exact_small(inst, Scenario::Pv2vc);
    ASSERT_TRUE(res.feasible);
    EXPECT_NEAR(res.objective, 258.4, 1e-7);
    EXPECT_NEAR(res.lower_bound, res.objective, 1e-7);
    EXPECT_EQ(res.plans[0].nodes, (std::vector<int>{0, 1, 3}));
    EXPECT_EQ(res.plans[1].nodes, (std::vector<int>{0, 1, 3, 4}));
    EXPECT_EQ(expanded_walk(res.plans[2]), (std::vector<int>{2, 1, 3, 4}));
    const CostBreakdown& s = res.eval.vehicles[2];
    EXPECT_NEAR(s.energy, 37.2, 1e-7);
    EXPECT_NEAR(s.charge_minutes, 3.84, 0.005);
    EXPECT_NEAR(s.driving_minutes, 100.0, 1e-9);
}

TEST(Oracle, ZeroSuppliersPv2vcEqualsEvpp) {
    const Instance inst = illustrative_instance().without_suppliers();
    EXPECT_NEAR(exact_small(inst, Scenario::Pv2vc).objective, exact_small(inst, Scenario::Evpp).objective, 1e-9);
}

TEST(Oracle, BudgetExceededRefuses) {
    const Instance inst = illustrative_instance();
    OracleOptions tiny;
    tiny.max_configurations = 3;
    try {
        exact_small(inst, Scenario::Pv2vc, tiny);
        FAIL() << "expected refusal";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("instance too large for oracle"), std::string::npos);
    }
}

TEST(Oracle, RejectsUnequalCsRates) {
    const Instance base = illustrative_instance();
    Network net = base.network();
    net.set_charging_station(4, 1.0);
    EXPECT_THROW(minimal_charging(base.with_network(net), 0, {0, 2, 1, 3}), Error);
}

TEST(Oracle, WeightScalingScalesObjective) {
    const Instance inst = illustrative_instance();
    for (Scenario sc : {Scenario::Evrp, Scenario::Evpp, Scenario::Pv2vc}) {
        const double base = exact_small(inst, sc).objective;
        EXPECT_NEAR(exact_small(scaled_weights(inst, 2.5), sc).objective, 2.5 * base, 1e-6) << scenario_name(sc);
    }
}

TEST(Oracle, OptimaEncodeIntoTheModel) {
    const Instance inst = illustrative_instance();
    for (Scenario sc : {Scenario::Evrp, Scenario::Evpp, Scenario::Pv2vc}) {
        const OracleResult res = exact_small(inst, sc);
        const MilpModel model = build_model(inst, sc);
        const CheckReport rep = check_assignment(model, encode_plan(res.plans, inst, model));
        EXPECT_TRUE(rep.pass) << scenario_name(sc) << " max violation " << rep.max_violation;
        EXPECT_NEAR(rep.objective, res.objective, 1e-6) << scenario_name(sc);
    }
}

TEST(Oracle, NestingOnRandomInstances) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Instance inst = pv2vc::testing::random_small_instance(seed);
        const double evrp = exact_small(inst, Scenario::Evrp).objective;
        const double evpp = exact_small(inst, Scenario::Evpp).objective;
        const double pv = exact_small(inst, Scenario::Pv2vc).objective;
        EXPECT_LE(evpp, evrp + 1e-7) << "seed " << seed;
        EXPECT_LE(pv, evpp + 1e-7) << "seed " << seed;
    }
}
