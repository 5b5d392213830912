// Command-line front end: solve, export, verify, compare and bench.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "pv2vc/evpp_solver.hpp"
#include "pv2vc/evrp_solver.hpp"
#include "pv2vc/milp_export.hpp"
#include "pv2vc/pv2vc_solver.hpp"
#include "pv2vc/scenarios.hpp"
#include "pv2vc/solution_io.hpp"

#ifndef PV2VC_DATA_DIR
#define PV2VC_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace pv2vc;

namespace {

constexpr int kExitFailure = 1;  // infeasible result, failed check, bad content
constexpr int kExitIo = 2;       // missing or unwritable files

struct IoError : Error {
    using Error::Error;
};

struct GaFlags {
    std::uint64_t seed = 1;
    int generations = GaConfig{}.max_generations;
    int population = GaConfig{}.population_size;
    int no_improve = GaConfig{}.no_improve_limit;
    int threads = 1;

    GaConfig config() const {
        GaConfig c;
        c.seed = seed;
        c.max_generations = generations;
        c.population_size = population;
        c.no_improve_limit = no_improve;
        c.threads = threads;
        return c;
    }
};

Instance open_instance(const std::string& path) {
    if (path != "fixture" && !fs::exists(path)) throw IoError(fmt::format("instance file not found: {}", path));
    return load_instance(path);
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
    return fs::path(dir);
}

void save(const fs::path& path, const std::string& text) {
    try {
        write_text_file(path.string(), text);
    } catch (const Error& e) {
        throw IoError(e.what());
    }
}

std::string load(const std::string& path) {
    if (!fs::exists(path)) throw IoError(fmt::format("file not found: {}", path));
    return read_text_file(path);
}

std::string stem_of(const Instance& inst) {
    std::string s = inst.name();
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s.empty() ? "instance" : s;
}

std::string fmt_obj(double x) { return std::isfinite(x) ? fmt::format("{:.4f}", x) : "inf"; }

SolveResult run_scenario(const Instance& inst, Scenario scenario, const GaConfig& cfg, SolveResult* seed_out) {
    SolveResult seed = solve_evrp(inst, cfg);
    SolveResult res;
    switch (scenario) {
        case Scenario::Evrp: res = seed; break;
        case Scenario::Evpp: res = solve_evpp(inst, cfg, &seed); break;
        case Scenario::Pv2vc: res = solve_pv2vc(inst, cfg, &seed); break;
    }
    if (seed_out) *seed_out = std::move(seed);
    return res;
}

void print_rows(const BreakdownReport& report) {
    fmt::print("{:<8} {:<9} {:>10} {:>10} {:>10} {:>10}  {}\n", "vehicle", "role", "energy", "charge", "travel",
               "total", "route");
    for (const auto& r : report.rows)
        fmt::print("{:<8} {:<9} {:>10.4f} {:>10.4f} {:>10.4f} {:>10.4f}  {}\n", r.vehicle,
                   r.is_request ? "request" : "supplier", r.cost.energy, r.cost.charge_minutes, r.cost.travel_minutes,
                   r.cost.total, r.route);
}

// ---------------------------------------------------------------------------

int cmd_solve(const std::string& instance_path, const std::string& scenario_text, const GaFlags& ga,
              const std::string& out_dir) {
    const Instance inst = open_instance(instance_path);
    const Scenario scenario = parse_scenario(scenario_text);
    const fs::path dir = prepare_dir(out_dir);
    SolveResult seed;
    SolveResult res = run_scenario(inst, scenario, ga.config(), &seed);

    const std::string base = fmt::format("{}-{}-seed{}", stem_of(inst), scenario_name(scenario), ga.seed);
    const Evaluation* baseline = scenario == Scenario::Evrp ? nullptr : &seed.eval;
    const BreakdownReport report = breakdown_report(res.plans, inst, res.eval, baseline);
    save(dir / (base + ".solution.json"), write_solution(inst, res, ga.seed));
    save(dir / (base + ".breakdown.csv"), breakdown_csv(report));
    save(dir / (base + ".log.csv"), generation_log_csv(res.log));

    fmt::print("instance: {}\nscenario: {}\nseed: {}\n", inst.name(), scenario_name(scenario), ga.seed);
    for (const auto& n : res.notes) fmt::print("note: {}\n", n);
    if (res.fell_back) fmt::print("note: phased search kept the EVRP seed\n");
    print_rows(report);
    fmt::print("objective: {}\n", fmt_obj(res.eval.objective));
    if (!res.eval.feasible) {
        for (const auto& v : res.eval.violations) std::cerr << "violation: " << v << "\n";
        std::cerr << fmt::format("error: no feasible plan found (penalty {:.4f})\n", res.eval.penalty);
        return kExitFailure;
    }
    return 0;
}

int cmd_export(const std::string& instance_path, const std::string& variant_text, const std::string& out_dir,
               const std::string& solution_path) {
    const Instance inst = open_instance(instance_path);
    const Scenario variant = parse_scenario(variant_text);
    const MilpModel model = build_model(inst, variant);
    const fs::path dir = prepare_dir(out_dir);
    const std::string base = fmt::format("{}-{}", stem_of(inst), scenario_name(variant));
    const fs::path lp_path = dir / (base + ".lp");
    save(lp_path, write_lp(model));
    std::size_t binaries = 0;
    for (const auto& v : model.variables) binaries += v.binary ? 1 : 0;
    fmt::print("wrote {}: {} variables ({} binary), {} constraints\n", lp_path.string(), model.variables.size(),
               binaries, model.constraints.size());
    if (!solution_path.empty()) {
        const SolutionFile sol = read_solution(load(solution_path), inst);
        const Assignment values = encode_plan(sol.result.plans, inst, model);
        const fs::path sol_path = dir / (base + ".assignment.txt");
        save(sol_path, write_assignment(values));
        const CheckReport check = check_assignment(model, values);
        fmt::print("wrote {}: objective {} ({})\n", sol_path.string(), fmt_obj(check.objective),
                   check.pass ? "all constraints hold" : "constraint violations");
        return check.pass ? 0 : kExitFailure;
    }
    return 0;
}

void print_gap(double value, std::optional<double> baseline) {
    if (!baseline) return;
    if (*baseline == 0.0) {
        fmt::print("gap: undefined (baseline is zero)\n");
        return;
    }
    fmt::print("baseline: {}\ngap: {:.4f}%\n", fmt_obj(*baseline), (value - *baseline) / *baseline * 100.0);
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path, const std::string& variant_text,
               const std::string& assignment_path, std::optional<double> baseline) {
    const Instance inst = open_instance(instance_path);
    if (solution_path.empty() && assignment_path.empty())
        throw Error("verify needs --solution or --assignment");
    bool ok = true;
    if (!solution_path.empty()) {
        const SolutionFile sol = read_solution(load(solution_path), inst);
        const Evaluation& ev = sol.result.eval;
        fmt::print("solution: {} ({} scenario, seed {})\n", solution_path, scenario_name(sol.scenario), sol.seed);
        fmt::print("feasible: {}\nobjective: {}\n", ev.feasible ? "yes" : "no", fmt_obj(ev.objective));
        for (const auto& v : ev.violations) fmt::print("violation: {}\n", v);
        ok = ok && ev.feasible;
        print_gap(ev.objective, baseline);
    }
    if (!assignment_path.empty()) {
        const Scenario variant = parse_scenario(variant_text);
        const MilpModel model = build_model(inst, variant);
        const CheckReport check = check_assignment(model, parse_assignment(load(assignment_path)));
        fmt::print("assignment: {} against the {} model\n", assignment_path, scenario_name(variant));
        fmt::print("check: {}\nmodel objective: {}\nmax violation: {:.3g}\n", check.pass ? "pass" : "fail",
                   fmt_obj(check.objective), check.max_violation);
        for (const auto& r : check.violations)
            fmt::print("residual {} [{}]: {:.6g}\n", r.name, r.family, r.amount);
        ok = ok && check.pass;
        print_gap(check.objective, baseline);
    }
    return ok ? 0 : kExitFailure;
}

int cmd_compare(const std::string& instance_path, const std::string& baseline_path,
                const std::vector<std::string>& others, const std::string& out_dir) {
    const Instance inst = open_instance(instance_path);
    if (baseline_path.empty()) throw Error("compare needs --baseline <solution file>");
    if (others.empty() || others.size() > 2) throw Error("compare takes one or two solution files besides the baseline");
    const SolutionFile base = read_solution(load(baseline_path), inst);
    std::string csv;
    for (const auto& path : others) {
        const SolutionFile sol = read_solution(load(path), inst);
        if (sol.instance_fingerprint != base.instance_fingerprint)
            throw Error(fmt::format("{} and {} are for different instances", baseline_path, path));
        const BreakdownReport report = breakdown_report(sol.result.plans, inst, sol.result.eval, &base.result.eval);
        const std::string label =
            fmt::format("{} vs {}", scenario_name(sol.scenario), scenario_name(base.scenario));
        fmt::print("# {}\n", label);
        const std::string table = breakdown_csv(report);
        fmt::print("{}", table);
        csv += "# " + label + "\n" + table;
    }
    if (!out_dir.empty()) {
        const fs::path dir = prepare_dir(out_dir);
        save(dir / fmt::format("{}-compare.csv", stem_of(inst)), csv);
    }
    return 0;
}

int cmd_bench(const std::vector<int>& sets, const std::string& tntp, const GaFlags& ga, const std::string& out_dir) {
    if (!fs::exists(tntp)) throw IoError(fmt::format("network file not found: {}", tntp));
    const Network net = load_benchmark_network(tntp);
    const fs::path dir = prepare_dir(out_dir);
    std::string csv = "scenario,requests,suppliers,evrp_total,pv2vc_total,saving_pct\n";
    fmt::print("{:<9} {:>3} {:>3} {:>12} {:>12} {:>9} {:>9}\n", "scenario", "R", "S", "evrp", "pv2vc", "saving%",
               "seconds");
    bool ok = true;
    for (int index : sets) {
        const Instance inst = benchmark_instance(net, index, ga.seed);
        const std::string base = fmt::format("S{}-seed{}", index, ga.seed);
        save(dir / (base + ".instance.yaml"), write_instance(inst));
        const auto t0 = std::chrono::steady_clock::now();
        SolveResult evrp = solve_evrp(inst, ga.config());
        SolveResult pv = solve_pv2vc(inst, ga.config(), &evrp);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        save(dir / (base + "-evrp.solution.json"), write_solution(inst, evrp, ga.seed));
        save(dir / (base + "-pv2vc.solution.json"), write_solution(inst, pv, ga.seed));
        save(dir / (base + "-pv2vc.log.csv"), generation_log_csv(pv.log));
        const double saving = percent_change(pv.eval.objective, evrp.eval.objective);
        ok = ok && evrp.eval.feasible && pv.eval.feasible;
        const ScenarioShape shape = benchmark_shape(index);
        csv += fmt::format("S{},{},{},{:.4f},{:.4f},{:.2f}\n", index, shape.requests, shape.suppliers,
                           evrp.eval.objective, pv.eval.objective, saving);
        fmt::print("{:<9} {:>3} {:>3} {:>12} {:>12} {:>9.2f} {:>9.2f}\n", fmt::format("S{}", index), shape.requests,
                   shape.suppliers, fmt_obj(evrp.eval.objective), fmt_obj(pv.eval.objective), saving, secs);
    }
    save(dir / fmt::format("savings-seed{}.csv", ga.seed), csv);
    return ok ? 0 : kExitFailure;
}

void add_ga_flags(CLI::App* cmd, GaFlags& ga) {
    cmd->add_option("--seed", ga.seed, "random seed")->capture_default_str();
    cmd->add_option("--generations", ga.generations, "generation limit per phase")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--population", ga.population, "population size")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--no-improve", ga.no_improve, "stop after this many generations without improvement")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--threads", ga.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Routing, platooning and in-motion charging of electric vehicles"};
    app.require_subcommand(1);

    GaFlags ga;
    std::string instance_path, scenario = "pv2vc", variant = "pv2vc", out_dir = "out", solution_path, assignment_path;
    std::string baseline_text, tntp = std::string(PV2VC_DATA_DIR) + "/SiouxFalls_net.tntp";
    std::vector<std::string> files;
    std::vector<int> sets{1, 2, 3, 4, 5};

    CLI::App* solve = app.add_subcommand("solve", "run a genetic search and write solution, breakdown and log");
    solve->add_option("--instance", instance_path, "instance file or 'fixture'")->required();
    solve->add_option("--scenario", scenario, "evrp, evpp or pv2vc")->capture_default_str();
    solve->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    add_ga_flags(solve, ga);

    CLI::App* exp = app.add_subcommand("export", "write the mixed-integer model as an LP file");
    exp->add_option("--instance", instance_path, "instance file or 'fixture'")->required();
    exp->add_option("--variant", variant, "evrp, evpp or pv2vc")->capture_default_str();
    exp->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    exp->add_option("--solution", solution_path, "also encode this solution as a variable assignment");

    CLI::App* verify = app.add_subcommand("verify", "re-evaluate a solution or check an assignment against the model");
    verify->add_option("--instance", instance_path, "instance file or 'fixture'")->required();
    verify->add_option("--solution", solution_path, "solution file");
    verify->add_option("--assignment", assignment_path, "variable assignment file ('name value' lines)");
    verify->add_option("--variant", variant, "model variant for --assignment")->capture_default_str();
    verify->add_option("--baseline", baseline_text, "objective to report the gap against");

    CLI::App* compare = app.add_subcommand("compare", "per-vehicle cost deltas of solutions against a baseline");
    compare->add_option("--instance", instance_path, "instance file or 'fixture'")->required();
    compare->add_option("--baseline", baseline_text, "baseline solution file")->required();
    compare->add_option("files", files, "one or two solution files")->required();
    compare->add_option("--out-dir", out_dir, "write the CSV here as well");

    CLI::App* bench = app.add_subcommand("bench", "generated Sioux Falls scenarios: EVRP versus PV2VC totals");
    bench->add_option("--sets", sets, "benchmark shapes to run (1-5)")->check(CLI::Range(1, 5))->capture_default_str();
    bench->add_option("--tntp", tntp, "TNTP network file")->capture_default_str();
    bench->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    add_ga_flags(bench, ga);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(instance_path, scenario, ga, out_dir);
        if (*exp) return cmd_export(instance_path, variant, out_dir, solution_path);
        if (*verify) {
            std::optional<double> baseline;
            if (!baseline_text.empty()) {
                try {
                    baseline = std::stod(baseline_text);
                } catch (const std::exception&) {
                    throw Error(fmt::format("--baseline: not a number: '{}'", baseline_text));
                }
            }
            return cmd_verify(instance_path, solution_path, variant, assignment_path, baseline);
        }
        if (*compare) return cmd_compare(instance_path, baseline_text, files, compare->count("--out-dir") ? out_dir : "");
        if (*bench) return cmd_bench(sets, tntp, ga, out_dir);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return 0;
}
