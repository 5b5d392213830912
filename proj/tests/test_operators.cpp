#include <gtest/gtest.h>

#include <cmath>

#include "pv2vc/operators.hpp"
#include "pv2vc/repair.hpp"
#include "test_plans.hpp"

using namespace pv2vc;
using namespace pv2vc::testing;

namespace {

OpContext context(const Instance& inst, Scenario sc) {
    OpContext ctx;
    ctx.inst = &inst;
    ctx.active = default_active(inst, sc);
    ctx.dwell_resolution = 0.01;
    return ctx;
}

bool on_grid(double x, double step) { return std::fabs(x / step - std::round(x / step)) < 1e-6; }

}  // namespace

TEST(Operators, FullChargeSetsFullTime) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evrp_plans(inst);
    OpContext ctx = context(inst, Scenario::Evrp);
    Rng rng(1);
    ASSERT_TRUE(op_full_charge(plans, ctx, rng));
    const bool r1 = plans[0].dwell[1] == 30.0, r2 = plans[1].dwell[1] == 30.0;  // 90 kWh at 3 kWh/min
    EXPECT_TRUE(r1 || r2);
}

TEST(Operators, RandomDwellShrinksWhenFeasible) {
    const Instance inst = illustrative_instance();
    OpContext ctx = context(inst, Scenario::Evrp);
    Evaluation ok;
    ok.feasible = true;
    Evaluation bad;
    const double base[2] = {26.0 / 3.0, 19.0 / 3.0};
    const double half_step = 0.005 + 1e-9;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        PlanSet shrink = fixture_evrp_plans(inst);
        Rng rng(seed);
        op_random_dwell(shrink, ctx, ok, rng);
        PlanSet grow = fixture_evrp_plans(inst);
        Rng rng2(seed);
        op_random_dwell(grow, ctx, bad, rng2);
        for (int v = 0; v < 2; ++v) {
            EXPECT_LE(shrink[v].dwell[1], base[v] + half_step);
            EXPECT_GE(grow[v].dwell[1], base[v] - half_step);
            EXPECT_LE(grow[v].dwell[1], 30.0 + 1e-9);
        }
    }
}

TEST(Operators, PlatoonInsertionOnFixtureCreatesSharedStretch) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evrp_plans(inst);
    bool made = false;
    for (std::uint64_t seed = 0; seed < 20 && !made; ++seed) {
        PlanSet trial = plans;
        Rng rng(seed);
        if (random_platoon_insertion(trial, inst, 0, 0, 1, 0, rng)) {
            made = true;
            EXPECT_TRUE(has_groups(trial[0]));
            EXPECT_TRUE(has_groups(trial[1]));
            EXPECT_TRUE(check_structure(trial, inst, default_active(inst, Scenario::Evpp), Scenario::Evpp).empty());
        }
    }
    EXPECT_TRUE(made);
}

TEST(Operators, PlatoonRemoveDissolves) {
    const Instance inst = illustrative_instance();
    PlanSet plans = fixture_evpp_plans(inst);
    OpContext ctx = context(inst, Scenario::Evpp);
    Rng rng(5);
    ASSERT_TRUE(op_platoon_remove(plans, ctx, rng));
    EXPECT_FALSE(has_groups(plans[0]));
    EXPECT_FALSE(has_groups(plans[1]));
}

TEST(Operators, AssignSupplierPairsIt) {
    const Instance inst = illustrative_instance();
    bool made = false;
    for (std::uint64_t seed = 0; seed < 20 && !made; ++seed) {
        PlanSet plans = bare_plan_set(inst);
        Rng rng(seed);
        if (!assign_er_es(plans, inst, 0, 2, rng)) continue;
        made = true;
        int paired = 0;
        for (int r : plans[2].paired) paired += r == 0;
        EXPECT_GT(paired, 0);
        EXPECT_TRUE(check_structure(plans, inst, default_active(inst, Scenario::Pv2vc), Scenario::Pv2vc).empty());
    }
    EXPECT_TRUE(made);
}

TEST(Operators, FractionOperatorsHitBounds) {
    const Instance inst = illustrative_instance();
    OpContext ctx = context(inst, Scenario::Pv2vc);
    PlanSet full = fixture_pv2vc_plans(inst);
    Rng rng(2);
    ASSERT_TRUE(op_fraction_full(full, ctx, rng));
    EXPECT_TRUE(full[2].fraction[1] == 1.0 || full[2].fraction[2] == 1.0);
    PlanSet empty = fixture_pv2vc_plans(inst);
    ASSERT_TRUE(op_fraction_empty(empty, ctx, rng));
    int cleared = 0;
    for (std::size_t s = 0; s < empty[2].segments(); ++s)
        if (empty[2].fraction[s] == 0.0) cleared += empty[2].paired[s] < 0;
    EXPECT_GT(cleared, 0);
}

TEST(Operators, FingerprintTracksChanges) {
    const Instance inst = illustrative_instance();
    PlanSet a = fixture_evrp_plans(inst), b = a;
    EXPECT_EQ(plan_fingerprint(a), plan_fingerprint(b));
    b[0].dwell[1] += 0.01;
    EXPECT_NE(plan_fingerprint(a), plan_fingerprint(b));
}

// Random operator chains keep every plan set structurally valid, respect the active
// mask, and keep dwell on the grid and fractions in [0, 1].
TEST(Operators, RandomChainsKeepStructure) {
    const Instance inst = illustrative_instance();
    int applied = 0;
    for (Scenario sc : {Scenario::Evrp, Scenario::Evpp, Scenario::Pv2vc}) {
        OpContext ctx = context(inst, sc);
        std::vector<OperatorFamily> fams{OperatorFamily::Route};
        if (sc != Scenario::Evrp) fams.push_back(OperatorFamily::Platoon);
        if (sc == Scenario::Pv2vc) fams.push_back(OperatorFamily::Supplier);
        const auto ops = make_operators(ctx, fams);
        RepairOptions ro;
        ro.scenario = sc;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            Rng rng(seed);
            PlanSet plans = fixture_evrp_plans(inst);
            plans[0].dwell[1] = 0.0;  // repair sets grid-aligned dwell
            plans[1].dwell[1] = 0.0;
            Evaluation ev = repair_and_tighten(plans, inst, ro);
            for (int step = 0; step < 30; ++step) {
                const PlanSet before = plans;
                const auto& op = ops[static_cast<std::size_t>(rng.below(static_cast<int>(ops.size())))];
                if (!op.apply(plans, ev, rng)) continue;
                ++applied;
                const auto problems = check_structure(plans, inst, ctx.active, sc);
                ASSERT_TRUE(problems.empty()) << op.name << ": " << problems.front();
                for (int v = 0; v < inst.vehicle_count(); ++v) {
                    if (!ctx.active[v]) {
                        EXPECT_EQ(plans[v], before[v]) << op.name;
                        continue;
                    }
                    for (double d : plans[v].dwell) {
                        EXPECT_GE(d, 0.0);
                        EXPECT_TRUE(on_grid(d, ctx.dwell_resolution)) << op.name << " " << d;
                    }
                    for (double f : plans[v].fraction) {
                        EXPECT_GE(f, 0.0);
                        EXPECT_LE(f, 1.0);
                    }
                }
                ev = repair_and_tighten(plans, inst, ro);
            }
        }
    }
    EXPECT_GE(applied, 1000);
}
