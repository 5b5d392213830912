#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pv2vc/instance.hpp"

namespace pv2vc {

// Layered per-vehicle route. Position layers have one entry per visit node,
// segment layers one entry per consecutive node pair.
struct Plan {
    std::vector<int> nodes;                    // visit sequence
    std::vector<std::vector<int>> legs;        // arc-level node path of each segment
    std::vector<double> dwell;                 // chosen dwell (charging or deliberate stop)
    std::vector<double> wait;                  // platoon synchronization wait, filled by synchronize
    std::vector<std::vector<int>> companions;  // other vehicles sharing the segment, sorted
    std::vector<double> arrival;               // filled by synchronize
    std::vector<int> paired;                   // suppliers: request served on the segment, -1 if none
    std::vector<double> fraction;              // suppliers: share of the segment spent transferring

    std::size_t positions() const { return nodes.size(); }
    std::size_t segments() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    double total_dwell(std::size_t p) const { return dwell[p] + wait[p]; }
    double departure(std::size_t p) const { return arrival[p] + dwell[p] + wait[p]; }
    bool operator==(const Plan&) const = default;
};

using PlanSet = std::vector<Plan>;  // indexed by vehicle

Plan make_plan(const Instance& inst, const std::vector<int>& nodes);
Plan idle_plan(const Instance& inst, int vehicle);
// Requests on their bare task chain, suppliers idle.
PlanSet bare_plan_set(const Instance& inst);

std::vector<int> expanded_walk(const Plan& plan);
bool is_simple(const std::vector<int>& walk);
int find_segment(const Plan& plan, int a, int b);
int find_position(const Plan& plan, int node);
bool is_idle(const Plan& plan);
bool has_groups(const Plan& plan);

using Slot = std::pair<int, int>;  // (vehicle, segment)

// Slots of every member of v's group on segment seg (v included), sorted by vehicle.
std::vector<Slot> group_slots(const PlanSet& plans, int v, int seg);
void assign_group(PlanSet& plans, const std::vector<Slot>& slots);
// Removes v from its group on seg, clearing pairings that involve v; a group
// left without a valid shape is dissolved.
void leave_group(PlanSet& plans, const Instance& inst, int v, int seg);
void dissolve_group(PlanSet& plans, const Instance& inst, int v, int seg);
void clear_all_groups(PlanSet& plans, const Instance& inst, int v);

// Inserts `node` inside segment seg of v and of every member of its group.
bool split_segment(PlanSet& plans, const Instance& inst, int v, int seg, int node);
// Removes visit position pos (not the first or last) from v, leaving adjacent groups.
void erase_position(PlanSet& plans, const Instance& inst, int v, int pos);
// Inserts node so that it becomes position pos of v (solo on the touched segment).
bool insert_position(PlanSet& plans, const Instance& inst, int v, int pos, int node, double dwell);
// Makes node a visit position of v if the walk passes through it; returns the position or -1.
int refine_to_include(PlanSet& plans, const Instance& inst, int v, int node);
// Makes a->b a single segment of v whose leg equals `leg`; returns the segment or -1.
int ensure_segment(PlanSet& plans, const Instance& inst, int v, const std::vector<int>& leg);
// Replaces segment seg of v (solo after the call) by a chain of legs with the same end
// points; new intermediate positions get zero dwell. False if the walk stops being simple.
bool replace_segment(PlanSet& plans, const Instance& inst, int v, int seg, const std::vector<std::vector<int>>& legs);
// Unites the groups of (v, seg_v) and (u, seg_u); legs must be identical.
bool merge_groups(PlanSet& plans, const Instance& inst, int v, int seg_v, int u, int seg_u);

// Zeroes dwell at the last position and at non-CS positions, resets derived layers.
void normalize(Plan& plan, const Instance& inst);

bool tasks_in_order(const Plan& plan, const Request& r);
bool is_task(const Request& r, int node);

}  // namespace pv2vc
