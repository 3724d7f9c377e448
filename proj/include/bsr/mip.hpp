#pragma once

// Single-shot repositioning problem and its exact solvers.
//
// Given current station inventories d_s, K sampled scenarios of cumulative
// net customer flow, and V vehicles, pick for each vehicle one pickup
// station, one dropoff station, and a transfer quantity within its capacity.
// Scenario lost demand at a station is L = min(0, d + net_flow + transfers),
// never positive, and the objective
//
//     minimize  K * alpha * (number of vehicles that move at least one bike)
//             - beta * sum over scenarios and stations of L
//
// trades repositioning effort against expected shortfall. Pickups at a
// station may not exceed the bikes currently there. A vehicle may also visit
// stations without moving anything; such a vehicle contributes no trip cost.
// Exactly one pickup and one dropoff visit per vehicle is supported.
//
// Costs alpha and beta are rationals and the objective is tracked in exact
// integer arithmetic, so optimality comparisons never depend on floating
// point. solve() is a best-first branch and bound over per-vehicle
// assignments with admissible bounds; solve_exhaustive() enumerates every
// joint assignment and is the test oracle. Both break objective ties toward
// the lexicographically smallest (pickup, dropoff, quantity) assignment
// vector, so their plans are identical, not just equal in value.

#include <cstdint>
#include <string>
#include <vector>

namespace bsr {
namespace mip {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational of(std::int64_t n, std::int64_t d = 1);
    // Accepts "3", "3/4", and decimal forms like "0.25".
    static Rational parse(const std::string& s);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

struct ProblemInstance {
    int stations = 0;
    int vehicles = 0;
    std::vector<std::int64_t> capacity;            // per vehicle
    std::vector<std::int64_t> bikes;               // d_s, current inventory
    std::vector<std::vector<std::int64_t>> net_flow;  // [scenario][station], cumulative
    Rational alpha = Rational::of(1);
    Rational beta = Rational::of(1);
    int pickup_visits = 1;   // N_p; only 1 is supported
    int dropoff_visits = 1;  // N_d; only 1 is supported

    int scenarios() const { return static_cast<int>(net_flow.size()); }
    void validate() const;  // throws std::invalid_argument on structural problems
};

// One vehicle's decision. count == 0 means the vehicle stays idle; pickup and
// dropoff are then the canonical station 0 visits that satisfy the one-visit
// requirement without moving anything.
struct VehicleMove {
    std::int32_t vehicle = 0;
    std::int32_t pickup = 0;
    std::int32_t dropoff = 0;
    std::int64_t count = 0;
};

struct RepositionPlan {
    int stations = 0;
    int vehicles = 0;
    std::vector<VehicleMove> moves;                 // one entry per vehicle, in order
    std::vector<std::vector<std::int64_t>> lost;    // L[scenario][station], all <= 0
    std::int64_t objective_num = 0;
    std::int64_t objective_den = 1;

    double objective() const {
        return static_cast<double>(objective_num) / static_cast<double>(objective_den);
    }
    std::int64_t trips() const;
    // Net repositioning per station, sum over vehicles of dropoffs - pickups.
    std::vector<std::int64_t> net_transfer() const;
};

// min(0, bikes + net + transfer) for one station and scenario.
inline std::int64_t lost_demand(std::int64_t bikes, std::int64_t net, std::int64_t transfer) {
    std::int64_t v = bikes + net + transfer;
    return v < 0 ? v : 0;
}

// L[k][s] for a fixed per-station net transfer vector.
std::vector<std::vector<std::int64_t>> closed_form_lost(
    const ProblemInstance& inst, const std::vector<std::int64_t>& net_transfer);

// Exact branch-and-bound solver.
RepositionPlan solve(const ProblemInstance& inst);

// Reference oracle: enumerate every joint (pickup, dropoff, quantity)
// assignment. Refuses instances where the assignment space
// prod_v S^2*(cap_v+1) exceeds 10^7.
RepositionPlan solve_exhaustive(const ProblemInstance& inst);

struct Violation {
    std::string constraint;  // short family tag, e.g. "pickup-inventory"
    std::string detail;
};

struct Evaluation {
    bool feasible = false;
    std::vector<Violation> violations;
    std::int64_t objective_num = 0;  // recomputed from the plan's moves and lost table
    std::int64_t objective_den = 1;
    std::int64_t trips = 0;
};

// Re-derive feasibility and the objective of a plan against an instance.
Evaluation evaluate(const ProblemInstance& inst, const RepositionPlan& plan);

// JSON round trips.
std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);
std::string plan_to_json(const RepositionPlan& plan);
RepositionPlan plan_from_json(const std::string& text);
void write_instance_file(const std::string& path, const ProblemInstance& inst);
ProblemInstance read_instance_file(const std::string& path);
void write_plan_file(const std::string& path, const RepositionPlan& plan);
RepositionPlan read_plan_file(const std::string& path);

}  // namespace mip
}  // namespace bsr
