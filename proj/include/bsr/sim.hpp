#pragma once

// Hour-stepped rebalancing simulation.
//
// State is the station inventory vector. Each hour: if the strategy is due,
// sample planning scenarios from the demand model, solve the repositioning
// problem, and apply the moves; then realize one hour of demand and update
//
//     d  <-  max(d + inflow - outflow + transfers, 0)
//
// clamping at zero, with the clamped amount counted as lost demand. Realized
// flows conserve bikes globally (every sampled trip leaves one station and
// enters another), so the fleet total never shrinks; it can grow only
// through inflow rows of a hand-fed source, not under the default sampler.
//
// Planning and realized draws come through sampler seams so tests can feed
// hand-written flows and check the recurrence exactly; run() wires both
// seams to the demand model.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bsr/demand.hpp"
#include "bsr/mip.hpp"
#include "bsr/timeutil.hpp"

namespace bsr {
namespace sim {

struct StrategyConfig {
    std::string name = "dynamic";
    int vehicles = 3;
    int period_hours = 1;  // solve every this many hours; also the planning horizon
    int scenarios = 5;
    std::int64_t capacity = 10;
    mip::Rational alpha = mip::Rational::of(1);
    mip::Rational beta = mip::Rational::of(1);
    int iterations = 720;  // hours simulated
    std::uint64_t seed = 42;

    void validate() const;
};

// The two stock strategies: a large fleet repositioned once a day versus a
// small fleet repositioned every hour.
StrategyConfig static_strategy();
StrategyConfig dynamic_strategy();

struct StepRow {
    std::int64_t step = 0;
    int hour = 0;
    DayCategory category = DayCategory::MON_THU;
    std::int64_t lost_demand = 0;       // clamped shortfall this hour, >= 0
    std::int64_t reposition_trips = 0;  // moving vehicles dispatched this hour
    std::int64_t total_bikes = 0;       // fleet size after the update
};

struct SimResult {
    std::vector<StepRow> rows;
    std::int64_t cumulative_lost = 0;
    std::int64_t cumulative_trips = 0;
    std::vector<std::int64_t> final_inventory;
};

// One hour of realized customer flows.
struct StepFlows {
    std::vector<std::int64_t> in;
    std::vector<std::int64_t> out;
};

using PlanningSampler = std::function<demand::ScenarioSet(
    std::int64_t step, int horizon, int scenarios, std::uint64_t seed)>;
using RealizedSampler = std::function<StepFlows(std::int64_t step, std::uint64_t seed)>;

// Instance for one planning solve: current inventory plus the scenarios'
// cumulative net flows over the horizon.
mip::ProblemInstance make_instance(const std::vector<std::int64_t>& inventory,
                                   const demand::ScenarioSet& scenarios,
                                   const StrategyConfig& cfg);

SimResult run(const std::vector<std::int64_t>& inventory, const demand::DemandModel& model,
              const StrategyConfig& cfg);
SimResult run_with_sources(const std::vector<std::int64_t>& inventory, const StrategyConfig& cfg,
                           const PlanningSampler& planning, const RealizedSampler& realized);

// Per-station floor(d * factor).
std::vector<std::int64_t> scale_fleet(const std::vector<std::int64_t>& inventory, double factor);

std::string result_to_csv(const SimResult& result);

struct SweepCell {
    double fleet_factor = 1.0;
    int vehicles = 0;
    std::uint64_t seed = 0;
    std::int64_t cumulative_lost = 0;
    std::int64_t cumulative_trips = 0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
};

// Cross product of fleet factors, vehicle counts, and `seeds` replicates.
// Every cell derives its own seed from the base config, so results do not
// depend on the execution order; `threads` only sets the worker count.
SweepResult sweep(const std::vector<std::int64_t>& inventory, const demand::DemandModel& model,
                  const StrategyConfig& base, const std::vector<double>& fleet_factors,
                  const std::vector<int>& vehicle_counts, int seeds, int threads);

std::string sweep_to_csv(const SweepResult& result);
SweepResult sweep_from_csv(const std::string& text);

}  // namespace sim
}  // namespace bsr
