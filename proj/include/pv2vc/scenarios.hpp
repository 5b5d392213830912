#pragma once

#include <cstdint>
#include <string>

#include "pv2vc/instance.hpp"

namespace pv2vc {

struct ScenarioShape {
    int requests = 0;
    int suppliers = 0;
};

// Benchmark shapes 1..5 as (requests, suppliers).
ScenarioShape benchmark_shape(int index);

struct BenchmarkOptions {
    int cs_count = 3;
    int tasks_per_request = 3;
    double request_capacity = 100.0;  // kWh
    double supplier_capacity = 200.0;
    double min_soc = 2.0;
    double soc_low = 20.0;  // initial request soc drawn from [soc_low, soc_high], whole kWh
    double soc_high = 30.0;
    double cs_rate = 3.0;        // kWh/min
    double transfer_rate = 5.0 / 6.0;
    int max_attempts = 10'000;
};

// Random benchmark instance on `net`: CS nodes, request task chains and suppliers parked
// fully charged at CS nodes. Redraws until every request has a feasible EVRP seed route.
Instance benchmark_instance(const Network& net, int index, std::uint64_t seed, const BenchmarkOptions& opts = {});

// Sioux Falls network from a TNTP file with the length column scaled to miles.
Network load_benchmark_network(const std::string& tntp_path, double distance_scale = 10.0);

}  // namespace pv2vc
