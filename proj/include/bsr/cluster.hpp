#pragma once

// Abstract stations from trip endpoints, in two k-means stages: first the
// whole dataset is segmented into coarse regions, then the endpoints of one
// region are clustered into stations. Clustering runs in a local planar
// projection (meters); reported station radii are haversine distances from
// the centroid so they stay physically meaningful.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "bsr/geo.hpp"
#include "bsr/types.hpp"

namespace bsr {
namespace cluster {

struct KMeansResult {
    std::vector<Vec2> centroids;
    std::vector<std::int32_t> assign;       // point index -> cluster
    std::vector<double> inertia_history;    // sum of squared distances after each iteration
    int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Deterministic for a fixed seed.
// Ties in the nearest-centroid test go to the lowest cluster id. A cluster
// that loses all members is reseeded at the point farthest from its previous
// position, which keeps the inertia sequence non-increasing. Throws if
// k < 1 or k > points.size().
KMeansResult kmeans(const std::vector<Vec2>& points, int k, std::uint64_t seed,
                    int max_iterations = 100, double tol_m = 1e-3);

// Trip endpoints in a flat array: element 2*i is the origin of trips[i],
// element 2*i+1 its destination.
std::vector<GeoPoint> trip_endpoints(const std::vector<Trip>& trips);

// Projection about the centroid of a point set.
PlanarProjection projection_for(const std::vector<GeoPoint>& points);

struct RegionSegmentation {
    PlanarProjection projection;
    std::vector<Vec2> centroids;
    std::vector<std::int32_t> endpoint_region;  // parallel to trip_endpoints()
};

RegionSegmentation segment_regions(const std::vector<Trip>& trips, int k, std::uint64_t seed);

// Trips whose two endpoints fall in the same requested region.
std::vector<Trip> filter_to_region(const std::vector<Trip>& trips,
                                   const RegionSegmentation& seg, std::int32_t region);

// Region index with the most endpoints (ties to the lowest index).
std::int32_t largest_region(const RegionSegmentation& seg, int k);

struct Station {
    std::int32_t id = 0;
    GeoPoint centroid;
    double radius_m = 0.0;   // haversine distance to the farthest member
    double area_m2 = 0.0;    // pi * radius^2
    std::int64_t members = 0;
    std::int64_t initial_bikes = 0;
};

struct StationSet {
    std::vector<Station> stations;
    PlanarProjection projection;
    std::uint64_t seed = 0;
};

// Cluster one region's trip endpoints into k stations and annotate each trip
// with its origin/destination station. Trips are modified in place.
StationSet build_stations(std::vector<Trip>& trips, const PlanarProjection& proj, int k,
                          std::uint64_t seed);

// Nearest station (planar distance, ties to the lowest station id) for each
// bike's first ping. Only bikes present in first_pings are counted, so the
// caller decides whether idle bikes participate. Adds counts into
// stations[i].initial_bikes and returns the per-station totals.
std::vector<std::int64_t> assign_initial_inventory(
    StationSet& stations, const std::unordered_map<std::string, Ping>& first_pings);

// First ping of each bike, optionally restricted to bikes with at least one
// extracted trip.
std::unordered_map<std::string, Ping> first_ping_per_bike(
    const std::vector<Trip>& trips_for_inclusion, const std::vector<Ping>& pings,
    bool include_idle_bikes);

// JSON round trip.
std::string stations_to_json(const StationSet& s);
StationSet stations_from_json(const std::string& text);
void write_stations_file(const std::string& path, const StationSet& s);
StationSet read_stations_file(const std::string& path);

}  // namespace cluster
}  // namespace bsr
