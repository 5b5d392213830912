#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pv2vc/evaluator.hpp"
#include "pv2vc/random.hpp"

namespace pv2vc {

struct OpContext {
    const Instance* inst = nullptr;
    std::vector<bool> active;  // vehicles the operators may touch
    double dwell_resolution = 0.01;
};

using PlanOperator = std::function<bool(PlanSet&, const Evaluation&, Rng&)>;

struct NamedOperator {
    std::string name;
    PlanOperator apply;
};

// Route and dwell operators (one random active vehicle).
bool op_cs_insert(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_cs_remove(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_cs_replace(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_cs_swap(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_full_charge(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_random_dwell(PlanSet& plans, const OpContext& ctx, const Evaluation& eval, Rng& rng);

// Platoon operators.
bool random_platoon_insertion(PlanSet& plans, const Instance& inst, int a, int seg_a, int b, int seg_b, Rng& rng);
bool op_platoon_insert(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_platoon_remove(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_platoon_extend(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_platoon_merge(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_join_platoon(PlanSet& plans, const OpContext& ctx, Rng& rng);

// Supplier operators.
bool assign_er_es(PlanSet& plans, const Instance& inst, int request, int supplier, Rng& rng);
bool op_assign_supplier(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_switch_pairing(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_fraction_full(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_fraction_empty(PlanSet& plans, const OpContext& ctx, Rng& rng);
bool op_random_fraction(PlanSet& plans, const OpContext& ctx, const Evaluation& eval, Rng& rng);

// Drops positions after pos of v (supplier plans end wherever their service ends).
void truncate_after(PlanSet& plans, const Instance& inst, int v, int pos);

enum class OperatorFamily { Route, Platoon, Supplier };
std::vector<NamedOperator> make_operators(const OpContext& ctx, const std::vector<OperatorFamily>& families);

std::uint64_t plan_fingerprint(const PlanSet& plans);

}  // namespace pv2vc
