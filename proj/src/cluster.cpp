#include "bsr/cluster.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bsr/rng.hpp"

namespace bsr {
namespace cluster {

namespace {

std::int32_t nearest_centroid(const Vec2& p, const std::vector<Vec2>& centroids, double* d2_out) {
    std::int32_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        double d2 = dist2(p, centroids[c]);
        if (d2 < best_d2) {  // strict: ties keep the lowest id
            best_d2 = d2;
            best = static_cast<std::int32_t>(c);
        }
    }
    if (d2_out) *d2_out = best_d2;
    return best;
}

std::vector<Vec2> kmeanspp_seed(const std::vector<Vec2>& points, int k, Rng& rng) {
    std::vector<Vec2> centroids;
    centroids.reserve(k);
    centroids.push_back(points[uniform_below(rng, points.size())]);

    std::vector<double> d2(points.size());
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double d = dist2(points[i], centroids.back());
            if (centroids.size() == 1 || d < d2[i]) d2[i] = d;
            total += d2[i];
        }
        std::size_t pick;
        if (total > 0.0) {
            double u = uniform_double(rng) * total;
            double acc = 0.0;
            pick = points.size() - 1;
            for (std::size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            // All remaining mass is on already-chosen positions (duplicate
            // points); fall back to a uniform draw to stay deterministic.
            pick = uniform_below(rng, points.size());
        }
        centroids.push_back(points[pick]);
    }
    return centroids;
}

}  // namespace

KMeansResult kmeans(const std::vector<Vec2>& points, int k, std::uint64_t seed,
                    int max_iterations, double tol_m) {
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (points.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("kmeans: k=" + std::to_string(k) + " exceeds point count " +
                                    std::to_string(points.size()));

    Rng rng(seed);
    KMeansResult res;
    res.centroids = kmeanspp_seed(points, k, rng);
    res.assign.assign(points.size(), -1);

    std::vector<Vec2> sums(k);
    std::vector<std::int64_t> counts(k);

    for (int iter = 0; iter < max_iterations; ++iter) {
        // Assignment step.
        double inertia = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double d2 = 0.0;
            res.assign[i] = nearest_centroid(points[i], res.centroids, &d2);
            inertia += d2;
        }
        res.inertia_history.push_back(inertia);
        res.iterations = iter + 1;

        // Update step.
        std::fill(sums.begin(), sums.end(), Vec2{});
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            sums[res.assign[i]].x += points[i].x;
            sums[res.assign[i]].y += points[i].y;
            ++counts[res.assign[i]];
        }

        double max_shift = 0.0;
        for (int c = 0; c < k; ++c) {
            Vec2 next;
            if (counts[c] > 0) {
                next = Vec2{sums[c].x / counts[c], sums[c].y / counts[c]};
            } else {
                // Reseed an empty cluster at the point farthest from its own
                // assigned centroid. The point can only get closer, so the
                // inertia sequence stays monotone.
                std::size_t far_i = 0;
                double far_d2 = -1.0;
                for (std::size_t i = 0; i < points.size(); ++i) {
                    double d2 = dist2(points[i], res.centroids[res.assign[i]]);
                    if (d2 > far_d2) {
                        far_d2 = d2;
                        far_i = i;
                    }
                }
                next = points[far_i];
            }
            max_shift = std::max(max_shift, dist(res.centroids[c], next));
            res.centroids[c] = next;
        }
        if (max_shift <= tol_m) break;
    }

    // Final assignment against the converged centroids.
    for (std::size_t i = 0; i < points.size(); ++i)
        res.assign[i] = nearest_centroid(points[i], res.centroids, nullptr);
    return res;
}

std::vector<GeoPoint> trip_endpoints(const std::vector<Trip>& trips) {
    std::vector<GeoPoint> pts;
    pts.reserve(trips.size() * 2);
    for (const auto& t : trips) {
        pts.push_back(t.origin);
        pts.push_back(t.dest);
    }
    return pts;
}

PlanarProjection projection_for(const std::vector<GeoPoint>& points) {
    if (points.empty()) throw std::invalid_argument("projection_for: no points");
    double lat = 0.0, lon = 0.0;
    for (const auto& p : points) {
        lat += p.lat;
        lon += p.lon;
    }
    return PlanarProjection{lat / points.size(), lon / points.size()};
}

RegionSegmentation segment_regions(const std::vector<Trip>& trips, int k, std::uint64_t seed) {
    auto geos = trip_endpoints(trips);
    if (geos.empty()) throw std::invalid_argument("segment_regions: no trips");
    RegionSegmentation seg;
    seg.projection = projection_for(geos);
    std::vector<Vec2> pts;
    pts.reserve(geos.size());
    for (const auto& g : geos) pts.push_back(seg.projection.to_xy(g));
    auto km = kmeans(pts, k, seed);
    seg.centroids = std::move(km.centroids);
    seg.endpoint_region = std::move(km.assign);
    return seg;
}

std::vector<Trip> filter_to_region(const std::vector<Trip>& trips,
                                   const RegionSegmentation& seg, std::int32_t region) {
    if (seg.endpoint_region.size() != trips.size() * 2)
        throw std::invalid_argument("filter_to_region: segmentation does not match trips");
    std::vector<Trip> out;
    for (std::size_t i = 0; i < trips.size(); ++i) {
        if (seg.endpoint_region[2 * i] == region && seg.endpoint_region[2 * i + 1] == region)
            out.push_back(trips[i]);
    }
    return out;
}

std::int32_t largest_region(const RegionSegmentation& seg, int k) {
    std::vector<std::int64_t> counts(k, 0);
    for (auto r : seg.endpoint_region) ++counts[r];
    return static_cast<std::int32_t>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
}

StationSet build_stations(std::vector<Trip>& trips, const PlanarProjection& proj, int k,
                          std::uint64_t seed) {
    auto geos = trip_endpoints(trips);
    if (geos.empty()) throw std::invalid_argument("build_stations: no trips");
    std::vector<Vec2> pts;
    pts.reserve(geos.size());
    for (const auto& g : geos) pts.push_back(proj.to_xy(g));

    auto km = kmeans(pts, k, seed);

    StationSet set;
    set.projection = proj;
    set.seed = seed;
    set.stations.resize(k);
    for (int c = 0; c < k; ++c) {
        set.stations[c].id = c;
        set.stations[c].centroid = proj.to_geo(km.centroids[c]);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Station& st = set.stations[km.assign[i]];
        ++st.members;
        double d = haversine_m(st.centroid, geos[i]);
        st.radius_m = std::max(st.radius_m, d);
    }
    for (auto& st : set.stations) st.area_m2 = kPi * st.radius_m * st.radius_m;

    for (std::size_t i = 0; i < trips.size(); ++i) {
        trips[i].origin_station = km.assign[2 * i];
        trips[i].dest_station = km.assign[2 * i + 1];
    }
    return set;
}

std::vector<std::int64_t> assign_initial_inventory(
    StationSet& set, const std::unordered_map<std::string, Ping>& first_pings) {
    std::vector<std::int64_t> counts(set.stations.size(), 0);
    if (set.stations.empty()) throw std::invalid_argument("assign_initial_inventory: no stations");

    std::vector<Vec2> centroids;
    centroids.reserve(set.stations.size());
    for (const auto& st : set.stations) centroids.push_back(set.projection.to_xy(st.centroid));

    // Iterate in sorted bike order: the result is a sum so order does not
    // matter, but determinism is cheap insurance.
    std::vector<const Ping*> pings;
    pings.reserve(first_pings.size());
    for (const auto& [id, p] : first_pings) pings.push_back(&p);
    std::sort(pings.begin(), pings.end(),
              [](const Ping* a, const Ping* b) { return a->bike_id < b->bike_id; });

    for (const Ping* p : pings) {
        Vec2 v = set.projection.to_xy(p->pos);
        ++counts[nearest_centroid(v, centroids, nullptr)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) set.stations[c].initial_bikes += counts[c];
    return counts;
}

std::unordered_map<std::string, Ping> first_ping_per_bike(
    const std::vector<Trip>& trips_for_inclusion, const std::vector<Ping>& pings,
    bool include_idle_bikes) {
    std::unordered_map<std::string, bool> has_trip;
    for (const auto& t : trips_for_inclusion) has_trip[t.bike_id] = true;

    std::unordered_map<std::string, Ping> first;
    for (const auto& p : pings) {
        if (!include_idle_bikes && !has_trip.count(p.bike_id)) continue;
        auto it = first.find(p.bike_id);
        if (it == first.end() || p.t < it->second.t) first[p.bike_id] = p;
    }
    return first;
}

std::string stations_to_json(const StationSet& s) {
    nlohmann::json j;
    j["format"] = "bsr-stations";
    j["version"] = 1;
    j["seed"] = s.seed;
    j["projection"] = {{"ref_lat", s.projection.ref_lat}, {"ref_lon", s.projection.ref_lon}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& st : s.stations) {
        arr.push_back({{"id", st.id},
                       {"lat", st.centroid.lat},
                       {"lon", st.centroid.lon},
                       {"radius_m", st.radius_m},
                       {"area_m2", st.area_m2},
                       {"members", st.members},
                       {"initial_bikes", st.initial_bikes}});
    }
    j["stations"] = std::move(arr);
    return j.dump(2);
}

StationSet stations_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "bsr-stations")
        throw std::runtime_error("stations JSON: unexpected format tag");
    StationSet s;
    s.seed = j.value("seed", std::uint64_t{0});
    s.projection.ref_lat = j.at("projection").at("ref_lat").get<double>();
    s.projection.ref_lon = j.at("projection").at("ref_lon").get<double>();
    for (const auto& e : j.at("stations")) {
        Station st;
        st.id = e.at("id").get<std::int32_t>();
        st.centroid.lat = e.at("lat").get<double>();
        st.centroid.lon = e.at("lon").get<double>();
        st.radius_m = e.at("radius_m").get<double>();
        st.area_m2 = e.at("area_m2").get<double>();
        st.members = e.at("members").get<std::int64_t>();
        st.initial_bikes = e.at("initial_bikes").get<std::int64_t>();
        s.stations.push_back(st);
    }
    for (std::size_t i = 0; i < s.stations.size(); ++i) {
        if (s.stations[i].id != static_cast<std::int32_t>(i))
            throw std::runtime_error("stations JSON: ids must be 0..n-1 in order");
    }
    return s;
}

void write_stations_file(const std::string& path, const StationSet& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write stations file: " + path);
    out << stations_to_json(s) << '\n';
}

StationSet read_stations_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stations file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return stations_from_json(ss.str());
}

}  // namespace cluster
}  // namespace bsr
