#include "pv2vc/solver_common.hpp"

namespace pv2vc {

std::vector<double> PlanProblem::weights(const std::vector<std::pair<std::string, double>>& boosts) const {
    std::vector<double> w(operator_names.size(), 1.0);
    for (std::size_t k = 0; k < operator_names.size(); ++k)
        for (const auto& [name, value] : boosts)
            if (operator_names[k] == name) w[k] = value;
    return w;
}

PlanProblem make_problem(const Instance& inst, Scenario scenario, const std::vector<bool>& active,
                         const std::vector<OperatorFamily>& families, double dwell_resolution,
                         std::vector<PlanSet> initial, std::uint64_t phase) {
    OpContext ctx;
    ctx.inst = &inst;
    ctx.active = active;
    ctx.dwell_resolution = dwell_resolution;
    PlanProblem out;
    for (auto& op : make_operators(ctx, families)) {
        out.operator_names.push_back(op.name);
        out.problem.operators.push_back(std::move(op.apply));
    }
    RepairOptions ro;
    ro.scenario = scenario;
    ro.active = active;
    ro.dwell_resolution = dwell_resolution;
    out.problem.evaluate = [&inst, ro](PlanSet& plans) { return repair_and_tighten(plans, inst, ro); };
    out.problem.fingerprint = plan_fingerprint;
    out.problem.initial = std::move(initial);
    out.problem.phase = phase;
    return out;
}

void append_log(std::vector<GenerationRecord>& log, const std::vector<GenerationRecord>& phase) {
    const int base = log.empty() ? 0 : log.back().generation + 1;
    for (GenerationRecord r : phase) {
        r.generation += base;
        log.push_back(r);
    }
}

}  // namespace pv2vc
