#pragma once

#include <string>
#include <vector>

#include "pv2vc/network.hpp"

namespace pv2vc {

struct Request {
    std::string id;
    std::vector<int> tasks;  // origin first, destination last
    double min_soc = 0.0;
    double submit_time = 0.0;
    double capacity = 0.0;
    double initial_soc = 0.0;

    int origin() const { return tasks.front(); }
    int destination() const { return tasks.back(); }
};

struct Supplier {
    std::string id;
    int origin = 0;
    double transfer_rate = 0.0;  // kWh/min
    double ready_time = 0.0;
    double capacity = 0.0;
    double initial_soc = 0.0;
};

struct Params {
    double platoon_saving = 0.1;
    double transfer_efficiency = 0.9;
    double alpha = 1.0;
    double beta = 1.0;
    double speed = 1.0;              // mi/min
    double consumption_rate = 0.4;   // kWh/mile, used for reserves and generated arcs
    double dwell_resolution = 0.01;  // minutes
};

enum class Scenario { Evrp, Evpp, Pv2vc };

const char* scenario_name(Scenario s);
Scenario parse_scenario(const std::string& text);

class Instance {
public:
    Instance() = default;
    Instance(std::string name, Network network, std::vector<Request> requests, std::vector<Supplier> suppliers,
             Params params);

    const std::string& name() const { return name_; }
    const Network& network() const { return network_; }
    const std::vector<Request>& requests() const { return requests_; }
    const std::vector<Supplier>& suppliers() const { return suppliers_; }
    const Params& params() const { return params_; }
    const DistanceMatrix& distances() const { return dm_; }
    const CsReserve& reserve() const { return reserve_; }

    // Vehicles are indexed requests first, then suppliers.
    int request_count() const { return static_cast<int>(requests_.size()); }
    int supplier_count() const { return static_cast<int>(suppliers_.size()); }
    int vehicle_count() const { return request_count() + supplier_count(); }
    bool is_request(int v) const { return v < request_count(); }
    const Request& request(int v) const { return requests_.at(static_cast<std::size_t>(v)); }
    const Supplier& supplier(int v) const {
        return suppliers_.at(static_cast<std::size_t>(v - request_count()));
    }
    const std::string& vehicle_label(int v) const { return is_request(v) ? request(v).id : supplier(v).id; }
    int vehicle_by_label(const std::string& label) const;  // -1 when unknown
    double capacity(int v) const { return is_request(v) ? request(v).capacity : supplier(v).capacity; }
    double initial_soc(int v) const { return is_request(v) ? request(v).initial_soc : supplier(v).initial_soc; }
    double start_time(int v) const { return is_request(v) ? request(v).submit_time : supplier(v).ready_time; }
    int origin(int v) const { return is_request(v) ? request(v).origin() : supplier(v).origin; }
    // Nodal battery floor: phi for requests, sigma for suppliers.
    double floor_at(int v, int node) const;
    // Time to charge from empty to full at a CS.
    double full_charge_time(int v, int node) const;

    Instance without_suppliers() const;
    Instance with_network(Network net) const;

private:
    std::string name_;
    Network network_;
    std::vector<Request> requests_;
    std::vector<Supplier> suppliers_;
    Params params_;
    DistanceMatrix dm_;
    CsReserve reserve_;
};

Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& text, const std::string& base_dir = ".");
std::string write_instance(const Instance& inst);
Instance illustrative_instance();

// Parses "<number> [unit]" into canonical units. `kind` is one of
// "energy", "time", "rate", "power", "speed", "consumption", "distance", "fraction".
double parse_quantity(const std::string& text, const std::string& kind, const std::string& field);

enum class Classification { Infeasible, NoChargeNeeded, NeedsCharging };
const char* classification_name(Classification c);

struct Finding {
    std::string subject;  // vehicle id or "instance"
    std::string message;
    bool structural = false;
    Classification classification = Classification::NeedsCharging;
};

std::vector<Finding> validate(const Instance& inst);
Classification classify_request(const Instance& inst, int request);

// Stable fingerprint of the canonical instance text (used to match solution files).
std::string instance_fingerprint(const Instance& inst);

}  // namespace pv2vc
