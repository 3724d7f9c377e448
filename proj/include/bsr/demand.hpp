#pragma once

// Observed-demand model. Outgoing demand per station is Poisson per
// two-minute interval, with a separate rate for each (station, day category,
// hour-of-day) cell; an hour is thirty such intervals. Rates are estimated by
// dividing a cell's trip count by the number of two-minute intervals observed
// for that cell across the dataset window. Destinations are drawn from a
// per-(origin, hour) table pooled over day categories.

#include <cstdint>
#include <string>
#include <vector>

#include "bsr/timeutil.hpp"
#include "bsr/types.hpp"

namespace bsr {
namespace demand {

inline constexpr int kIntervalsPerHour = 30;

struct RateTable {
    int stations = 0;
    // rate[category][station][hour], trips per two-minute interval
    std::vector<std::vector<std::vector<double>>> rate;
    // observation counts behind each rate, same shape
    std::vector<std::vector<std::vector<std::int64_t>>> count;

    static RateTable zeros(int stations);
    double at(int station, DayCategory c, int hour) const {
        return rate[static_cast<int>(c)][station][hour];
    }
};

struct DestTable {
    int stations = 0;
    // prob[origin][hour][dest]; rows with no observations fall back to
    // uniform over all stations.
    std::vector<std::vector<std::vector<double>>> prob;
    std::vector<std::vector<std::int64_t>> observations;  // [origin][hour]

    static DestTable uniform(int stations);
};

struct DemandModel {
    RateTable rates;
    DestTable dests;
    int utc_offset_min = 0;            // offset used during estimation
    std::int64_t window_start_day = 0; // local day index of the window start
    int window_days = 0;
};

// Count of local days per category in [first_day, first_day + days).
std::vector<std::int64_t> category_day_counts(std::int64_t first_day, int days);

// Estimate a demand model from station-annotated trips. Trips bin by their
// start time shifted to local. The observation window defaults to the
// inclusive local-day span of the trip start times and can be pinned
// explicitly (window_days > 0). Throws if any trip lacks a station id or
// starts outside an explicit window.
DemandModel estimate(const std::vector<Trip>& trips, int stations, int utc_offset_min,
                     std::int64_t window_start_day = -1, int window_days = 0);

// One sampled future: per-scenario, per-hour station inflows and outflows
// with the underlying trips. Conservation holds exactly by construction:
// within every (scenario, hour), sum of inflows equals sum of outflows.
struct ScenarioSet {
    int stations = 0;
    int horizon = 0;    // hours
    int scenarios = 0;  // K
    // flow_out[k][tau][s] = F-, flow_in[k][tau][s] = F+
    std::vector<std::vector<std::vector<std::int64_t>>> flow_out;
    std::vector<std::vector<std::vector<std::int64_t>>> flow_in;
    // sampled (origin, dest) pairs per scenario-hour
    std::vector<std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>>> trips;

    // Net flow per station accumulated over the horizon, one row per scenario.
    std::vector<std::vector<std::int64_t>> cumulative_net() const;
};

// Sample K scenarios over [start_step, start_step + horizon). Each scenario
// draws from its own seed-derived stream, so scenario k is reproducible in
// isolation. Hour demand is the sum of thirty Poisson draws per station.
ScenarioSet sample_scenarios(const DemandModel& model, std::int64_t start_step, int horizon,
                             int scenarios, std::uint64_t seed);

// JSON round trip.
std::string model_to_json(const DemandModel& m);
DemandModel model_from_json(const std::string& text);
void write_model_file(const std::string& path, const DemandModel& m);
DemandModel read_model_file(const std::string& path);

}  // namespace demand
}  // namespace bsr
