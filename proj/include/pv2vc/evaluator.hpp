#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pv2vc/plan.hpp"

namespace pv2vc {

inline constexpr double kEnergyTol = 1e-7;  // kWh slack when comparing soc with bounds

struct SegmentTrace {
    double consumption = 0.0;
    bool platooned = false;
    double transfer_out = 0.0;  // supplier outflow over the segment
    double transfer_in = 0.0;   // gross amount sent to this request (before efficiency)
    std::vector<double> node_soc;  // soc after each arc of the leg
};

struct VehicleTrace {
    std::vector<double> soc_arrival;  // per visit position
    std::vector<double> charge;       // kWh gained at each position
    std::vector<bool> clamped;        // charge limited by capacity
    std::vector<SegmentTrace> segments;
    double final_soc = 0.0;
};

struct EnergyTrace {
    std::vector<VehicleTrace> vehicles;  // indexed by vehicle; empty entries for inactive ones
};

struct CostBreakdown {
    double energy = 0.0;
    double charge_minutes = 0.0;  // dwell at CS positions
    double wait_minutes = 0.0;    // dwell at other positions
    double driving_minutes = 0.0;
    double travel_minutes = 0.0;  // requests: driving + waits; suppliers: driving
    double total = 0.0;
};

struct Evaluation {
    Scenario scenario = Scenario::Pv2vc;
    bool feasible = false;
    double penalty = 0.0;
    double objective = kInf;
    std::vector<std::string> violations;  // structural problems (make the plan set infeasible)
    std::vector<bool> active;
    std::vector<CostBreakdown> vehicles;  // indexed by vehicle
    bool clamped = false;                 // some CS charge hit the capacity clamp
};

struct EvalOptions {
    Scenario scenario = Scenario::Pv2vc;
    std::vector<bool> active;  // empty: default for the scenario
};

std::vector<bool> default_active(const Instance& inst, Scenario scenario);

std::vector<std::string> check_structure(const PlanSet& plans, const Instance& inst, const std::vector<bool>& active,
                                         Scenario scenario);

// Forward pass over platoon departures; throws "unsynchronizable" on circular waits.
void synchronize(PlanSet& plans, const Instance& inst, const std::vector<bool>& active);
bool try_synchronize(PlanSet& plans, const Instance& inst, const std::vector<bool>& active);

EnergyTrace simulate_energy(const PlanSet& plans, const Instance& inst, const std::vector<bool>& active);

Evaluation evaluate(const PlanSet& plans, const Instance& inst, const EnergyTrace& trace, const EvalOptions& opts);

// Structure check, synchronization, simulation and costing in one call; never throws for plan defects.
Evaluation assess(PlanSet& plans, const Instance& inst, const EvalOptions& opts, EnergyTrace* trace_out = nullptr);

struct BreakdownRow {
    std::string vehicle;
    bool is_request = true;
    std::string route;
    CostBreakdown cost;
    // Percentage change against the baseline: (value - baseline) / baseline * 100.
    std::optional<double> energy_delta, charge_delta, travel_delta, total_delta;
};

struct BreakdownReport {
    std::vector<BreakdownRow> rows;
    double request_total = 0.0;
    std::optional<double> request_total_delta;
};

double percent_change(double value, double baseline);

BreakdownReport breakdown_report(const PlanSet& plans, const Instance& inst, const Evaluation& eval,
                                 const Evaluation* baseline = nullptr);

std::string route_text(const Instance& inst, const Plan& plan);

}  // namespace pv2vc
