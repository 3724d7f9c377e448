#pragma once

// Synthetic GPS feed generator with a known ground truth.
//
// A ground truth is a set of station locations plus the same demand
// parameters the estimator tries to recover: per-interval Poisson rates by
// (station, day category, hour) and destination distributions by (station,
// hour). generate() simulates a bike fleet against that truth and emits raw
// pings, so the whole pipeline (trip extraction, clustering, demand fitting)
// can be checked against known answers instead of eyeballed.
//
// The simulated riders are deliberately tidy: a departure ping reuses the
// bike's resting position exactly, arrivals scatter within the destination
// station's radius, and ride duration is distance at a steady 12 km/h with a
// floor of 180 seconds. Every generated trip therefore survives the trip
// filters, so extraction recovering exactly the generated trips is a hard
// equality, not a statistical hope. Optional noise pings (small jitter,
// below the distance filter) and relocation hops (above the speed filter)
// exercise the filters without changing that equality.
//
// Timestamps start at a Monday 00:00 UTC and the truth is expressed in UTC,
// so downstream consumers should use a zero UTC offset for synthetic feeds.

#include <cstdint>
#include <string>
#include <vector>

#include "bsr/cluster.hpp"
#include "bsr/demand.hpp"
#include "bsr/rng.hpp"
#include "bsr/types.hpp"

namespace bsr {
namespace synth {

// Monday 2017-09-04 00:00:00 UTC; keeps step/day-category arithmetic aligned.
constexpr std::int64_t kGenesisUnix = 1504483200;

struct TruthStation {
    GeoPoint center;
    double scatter_m = 60.0;  // arrival jitter radius, well under the 200 m filter
    std::int64_t fleet = 0;   // bikes parked here at the window start
};

struct GroundTruth {
    std::vector<TruthStation> stations;
    // rate[category][station][hour]: Poisson mean per 2-minute interval
    std::vector<std::vector<std::vector<double>>> rate;
    // dest[station][hour][dest]: destination probabilities, rows sum to 1
    std::vector<std::vector<std::vector<double>>> dest;

    int station_count() const { return static_cast<int>(stations.size()); }
    void validate() const;

    // Views of the truth in the estimator's own types, for direct comparison
    // and for simulation runs that bypass estimation.
    demand::DemandModel as_demand_model() const;
    cluster::StationSet as_station_set() const;
};

struct SynthOptions {
    int days = 7;
    std::uint64_t seed = 1;
    double noise_fraction = 0.0;       // chance of a jitter ping before a departure
    double relocation_fraction = 0.0;  // chance of an out-and-back hop after an arrival
};

struct SynthResult {
    std::vector<Ping> pings;  // sorted by (timestamp, bike id)
    std::vector<Trip> trips;  // the trips a perfect extractor should recover
    std::int64_t served = 0;
    std::int64_t unserved = 0;  // demand that found no bike at its origin
};

SynthResult generate(const GroundTruth& truth, const SynthOptions& opt);

// Canned truths. Station layouts are deterministic grids spaced safely wider
// than the arrival scatter; destination rows never include the origin.
GroundTruth uniform_truth(int stations, std::int64_t fleet_per_station, double rate);
// Residential half feeds the business half on weekday mornings and drains it
// in the evenings; weekends idle along at a trickle.
GroundTruth commuter_truth(int stations, std::int64_t fleet_per_station, double peak_rate,
                           double offpeak_rate);
// A few stations active only Monday through Thursday within [first_hour,
// last_hour], constant rate; built for checking rate recovery.
GroundTruth calibration_truth(int stations, std::int64_t fleet_per_station, double rate,
                              int first_hour, int last_hour);

GroundTruth truth_by_name(const std::string& preset, int stations,
                          std::int64_t fleet_per_station, double rate);

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const std::string& text);
void write_truth_file(const std::string& path, const GroundTruth& truth);
GroundTruth read_truth_file(const std::string& path);

}  // namespace synth
}  // namespace bsr
