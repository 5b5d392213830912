#pragma once

#include <cstdint>
#include <string>

#include "pv2vc/solver_common.hpp"

namespace pv2vc {

struct SolutionFile {
    std::string instance_name;
    std::string instance_fingerprint;
    Scenario scenario = Scenario::Pv2vc;
    std::uint64_t seed = 0;
    SolveResult result;  // plans and the evaluation recomputed on load
    double stored_objective = kInf;
};

// JSON text holding the five plan layers per vehicle and the cost breakdown.
std::string write_solution(const Instance& inst, const SolveResult& result, std::uint64_t seed);

// Parses a solution for `inst`; throws on malformed text, a fingerprint mismatch, or
// a stored objective that the evaluator does not reproduce.
SolutionFile read_solution(const std::string& text, const Instance& inst);
SolutionFile load_solution(const std::string& path, const Instance& inst);

// Per-vehicle energy / charge / travel / total columns with optional percentage deltas.
std::string breakdown_csv(const BreakdownReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pv2vc
