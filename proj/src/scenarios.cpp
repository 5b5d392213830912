#include "pv2vc/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pv2vc/evrp_solver.hpp"
#include "pv2vc/random.hpp"
#include "pv2vc/solution_io.hpp"

namespace pv2vc {

namespace {

std::vector<int> distinct(Rng& rng, int n, int count) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[i] = i;
    rng.shuffle(all);
    all.resize(static_cast<std::size_t>(count));
    return all;
}

// A request is kept when one of its EVRP seed routes is feasible on its own.
bool has_feasible_seed(const Instance& inst, int request) {
    std::vector<bool> active(static_cast<std::size_t>(inst.vehicle_count()), false);
    active[static_cast<std::size_t>(request)] = true;
    for (const Plan& p : construct_initial(inst, request)) {
        PlanSet plans = bare_plan_set(inst);
        plans[static_cast<std::size_t>(request)] = p;
        if (assess(plans, inst, {Scenario::Evrp, active}).feasible) return true;
    }
    return false;
}

}  // namespace

ScenarioShape benchmark_shape(int index) {
    static const ScenarioShape shapes[] = {{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}};
    if (index < 1 || index > 5) throw Error(fmt::format("benchmark scenario must be 1..5, got {}", index));
    return shapes[index - 1];
}

Network load_benchmark_network(const std::string& tntp_path, double distance_scale) {
    TntpOptions opt;
    opt.distance_scale = distance_scale;
    return parse_tntp(read_text_file(tntp_path), opt);
}

Instance benchmark_instance(const Network& base, int index, std::uint64_t seed, const BenchmarkOptions& opts) {
    const ScenarioShape shape = benchmark_shape(index);
    const int n = static_cast<int>(base.node_count());
    if (n < std::max(opts.cs_count, opts.tasks_per_request) || opts.cs_count < 1)
        throw Error("benchmark network too small");
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(index)}));
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        Network net = base;
        std::vector<int> cs = distinct(rng, n, opts.cs_count);
        std::sort(cs.begin(), cs.end());
        for (int c : cs) net.set_charging_station(c, opts.cs_rate);

        std::vector<Request> requests;
        for (int r = 0; r < shape.requests; ++r) {
            Request q;
            q.id = fmt::format("r{}", r + 1);
            q.tasks = distinct(rng, n, opts.tasks_per_request);
            q.min_soc = opts.min_soc;
            q.capacity = opts.request_capacity;
            q.initial_soc = std::floor(rng.uniform(opts.soc_low, opts.soc_high + 1.0));
            q.initial_soc = std::min(q.initial_soc, opts.soc_high);
            requests.push_back(q);
        }
        std::vector<Supplier> suppliers;
        for (int s = 0; s < shape.suppliers; ++s) {
            Supplier sp;
            sp.id = fmt::format("s{}", s + 1);
            sp.origin = cs[static_cast<std::size_t>(s) % cs.size()];
            sp.transfer_rate = opts.transfer_rate;
            sp.capacity = opts.supplier_capacity;
            sp.initial_soc = opts.supplier_capacity;
            suppliers.push_back(sp);
        }
        Instance inst(fmt::format("benchmark-s{}-seed{}", index, seed), std::move(net), std::move(requests),
                      std::move(suppliers), Params{});
        bool ok = true;
        for (const Finding& f : validate(inst)) ok = ok && !f.structural;
        for (int r = 0; r < inst.request_count() && ok; ++r)
            ok = classify_request(inst, r) != Classification::Infeasible && has_feasible_seed(inst, r);
        if (ok) return inst;
    }
    throw Error("could not draw a feasible benchmark instance");
}

}  // namespace pv2vc
