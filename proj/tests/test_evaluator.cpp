#include <gtest/gtest.h>

#include "pv2vc/evaluator.hpp"
#include "test_plans.hpp"

using namespace pv2vc;
using namespace pv2vc::testing;

TEST(Evaluator, EvrpFixtureCost) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evrp_plans(inst);
    const Evaluation ev = assess(plans, inst, {Scenario::Evrp, {}});
    ASSERT_TRUE(ev.feasible) << ev.penalty;
    EXPECT_NEAR(ev.objective, 351.0, 1e-9);
    EXPECT_NEAR(ev.vehicles[0].total, 162.0 + 2.0 / 3.0, 1e-9);
    EXPECT_NEAR(ev.vehicles[0].charge_minutes, 26.0 / 3.0, 1e-9);
    EXPECT_NEAR(ev.vehicles[1].energy, 52.0, 1e-9);
}

TEST(Evaluator, EvppFixtureCost) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evpp_plans(inst);
    const Evaluation ev = assess(plans, inst, {Scenario::Evpp, {}});
    ASSERT_TRUE(ev.feasible) << ev.penalty;
    EXPECT_NEAR(ev.objective, 346.0 + 11.0 / 15.0, 1e-9);
    EXPECT_NEAR(ev.vehicles[0].energy, 42.4, 1e-9);
}

TEST(Evaluator, Pv2vcFixtureCost) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_pv2vc_plans(inst);
    EnergyTrace trace;
    const Evaluation ev = assess(plans, inst, {Scenario::Pv2vc, {}}, &trace);
    ASSERT_TRUE(ev.feasible) << ev.penalty << (ev.violations.empty() ? "" : ev.violations[0]);
    EXPECT_NEAR(ev.objective, 258.4, 1e-9);
    EXPECT_NEAR(ev.vehicles[0].total, 108.8, 1e-9);
    EXPECT_NEAR(ev.vehicles[1].total, 149.6, 1e-9);
    const CostBreakdown& s = ev.vehicles[2];
    EXPECT_NEAR(s.energy, 37.2, 1e-9);
    EXPECT_NEAR(s.charge_minutes, 11.0 / 3.0 + 0.5333333333333 / 3.0, 1e-6);
    EXPECT_NEAR(s.driving_minutes, 100.0, 1e-9);
    EXPECT_NEAR(s.total, 141.04444444, 1e-6);
    // Both requests finish exactly at their floor.
    EXPECT_NEAR(trace.vehicles[0].final_soc, 2.0, 1e-9);
    EXPECT_NEAR(trace.vehicles[1].final_soc, 2.0, 1e-9);
    // Supplier waits at node 1 for the requests.
    EXPECT_NEAR(plans[2].wait[1], 40.0 - 30.0 - s.charge_minutes, 1e-9);
}

TEST(Evaluator, ShortfallGivesPenalty) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evrp_plans(inst);
    plans[0].dwell[1] = 0.0;
    const Evaluation ev = assess(plans, inst, {Scenario::Evrp, {}});
    EXPECT_FALSE(ev.feasible);
    EXPECT_GT(ev.penalty, 0.0);
    EXPECT_TRUE(ev.violations.empty());
}

TEST(Evaluator, CapacityClampIsFlagged) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evrp_plans(inst);
    plans[0].dwell[1] = 60.0;
    const Evaluation ev = assess(plans, inst, {Scenario::Evrp, {}});
    EXPECT_TRUE(ev.clamped);
    EXPECT_TRUE(ev.feasible);
}

TEST(Evaluator, TwoSuppliersOnOneRequestRejected) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_pv2vc_plans(inst);
    const auto v = check_structure(plans, inst, default_active(inst, Scenario::Pv2vc), Scenario::Pv2vc);
    EXPECT_TRUE(v.empty());
    // A request serving as paired target is fine; pairing a request to another request is not.
    PlanSet bad = plans;
    bad[0].paired[1] = 1;
    EXPECT_FALSE(check_structure(bad, inst, default_active(inst, Scenario::Pv2vc), Scenario::Pv2vc).empty());
}

TEST(Evaluator, GroupsRejectedInEvrp) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evpp_plans(inst);
    const Evaluation ev = assess(plans, inst, {Scenario::Evrp, {}});
    EXPECT_FALSE(ev.feasible);
    EXPECT_FALSE(ev.violations.empty());
}

TEST(Evaluator, NonSimpleWalkRejected) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evrp_plans(inst);
    plans[0] = make_plan(inst, {0, 2, 0, 1, 3});
    const Evaluation ev = assess(plans, inst, {Scenario::Evrp, {}});
    EXPECT_FALSE(ev.violations.empty());
}

TEST(Evaluator, BreakdownDeltas) {
    const Instance inst = illustrative_instance();
    PlanSet base = fixture_evrp_plans(inst);
    PlanSet ours = fixture_pv2vc_plans(inst);
    const Evaluation eb = assess(base, inst, {Scenario::Evrp, {}});
    const Evaluation eo = assess(ours, inst, {Scenario::Pv2vc, {}});
    const BreakdownReport rep = breakdown_report(ours, inst, eo, &eb);
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_EQ(rep.rows[0].route, "0-1-3");
    EXPECT_EQ(rep.rows[2].route, "2-1-3-4");
    ASSERT_TRUE(rep.request_total_delta);
    EXPECT_NEAR(*rep.request_total_delta, (258.4 - 351.0) / 351.0 * 100.0, 1e-9);
    EXPECT_FALSE(rep.rows[2].total_delta.has_value());
    EXPECT_NEAR(percent_change(110, 100), 10.0, 1e-12);
}
