#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pv2vc/evaluator.hpp"

namespace pv2vc {

struct MilpVariable {
    std::string name;
    bool binary = false;
    double lower = 0.0;
    double upper = kInf;
};

struct MilpTerm {
    int var = 0;
    double coef = 0.0;
};

enum class MilpSense { Le, Ge, Eq };

struct MilpConstraint {
    std::string name;
    std::string family;  // e.g. "c17", "c36b"
    std::vector<MilpTerm> terms;
    MilpSense sense = MilpSense::Le;
    double rhs = 0.0;
};

struct MilpModel {
    Scenario variant = Scenario::Pv2vc;
    std::string name;
    std::vector<MilpVariable> variables;
    std::unordered_map<std::string, int> index;
    std::vector<MilpTerm> objective;
    double objective_constant = 0.0;  // -beta * sum of request submit times
    std::vector<MilpConstraint> constraints;
    double big_m_time = 0.0;
    double big_m_energy = 0.0;
    std::vector<std::string> warnings;

    int find(const std::string& var) const;  // -1 when absent
    std::size_t count_prefix(const std::string& prefix) const;
};

using Assignment = std::map<std::string, double>;

struct Residual {
    std::string name;
    std::string family;
    double amount = 0.0;
};

struct CheckReport {
    bool pass = false;
    double objective = 0.0;
    double max_violation = 0.0;
    std::vector<Residual> violations;  // constraints, bounds and integrality beyond the tolerance
};

inline constexpr double kMilpTolerance = 1e-6;

MilpModel build_model(const Instance& inst, Scenario variant);
std::string write_lp(const MilpModel& model);

// Throws when a model variable has no value.
CheckReport check_assignment(const MilpModel& model, const Assignment& values, double tol = kMilpTolerance);

// Values for every model variable from a plan set; runs synchronization and the energy trace.
// Throws when the plans are structurally invalid or use an arc the model lacks.
Assignment encode_plan(const PlanSet& plans, const Instance& inst, const MilpModel& model);

// Reads `name value` lines; blank lines and lines starting with '#' or '\' are skipped.
Assignment parse_assignment(const std::string& text);
std::string write_assignment(const Assignment& values);

}  // namespace pv2vc
