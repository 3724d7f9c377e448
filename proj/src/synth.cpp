// Ground-truth simulation behind the synthetic GPS feed.
//
// Demand events are drawn hour by hour from the truth's Poisson rates, then
// served in global time order against per-station pools of idle bikes, so a
// bike arriving somewhere mid-hour is immediately eligible to serve later
// departures there. Serving order, pool ordering, and every random draw are
// fixed, which makes the whole feed a pure function of (truth, options).

#include "bsr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "bsr/geo.hpp"
#include "bsr/timeutil.hpp"
#include "json.hpp"

namespace bsr {
namespace synth {

namespace {

constexpr double kMetersPerDegree = kEarthRadiusM * kPi / 180.0;

GeoPoint offset_point(const GeoPoint& c, double dx_m, double dy_m) {
    GeoPoint p;
    p.lat = c.lat + dy_m / kMetersPerDegree;
    p.lon = c.lon + dx_m / (kMetersPerDegree * std::cos(deg2rad(c.lat)));
    return p;
}

GeoPoint jitter_disk(Rng& rng, const GeoPoint& c, double radius_m) {
    double r = radius_m * std::sqrt(uniform_double(rng));
    double th = 2.0 * kPi * uniform_double(rng);
    return offset_point(c, r * std::cos(th), r * std::sin(th));
}

std::string bike_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "b%05d", i);
    return buf;
}

// Deterministic grid layout: roughly square, spacing comfortably above the
// trip distance filter plus both endpoints' scatter.
std::vector<TruthStation> grid_layout(int stations, std::int64_t fleet, double scatter_m) {
    constexpr double kBaseLat = 40.44;
    constexpr double kBaseLon = -79.95;
    constexpr double kSpacingM = 700.0;
    int cols = 1;
    while (cols * cols < stations) ++cols;
    std::vector<TruthStation> out(stations);
    for (int i = 0; i < stations; ++i) {
        int row = i / cols, col = i % cols;
        out[i].center = offset_point(GeoPoint{kBaseLat, kBaseLon}, col * kSpacingM, row * kSpacingM);
        out[i].scatter_m = scatter_m;
        out[i].fleet = fleet;
    }
    return out;
}

std::vector<std::vector<std::vector<double>>> zero_rates(int stations) {
    return std::vector<std::vector<std::vector<double>>>(
        3, std::vector<std::vector<double>>(stations, std::vector<double>(24, 0.0)));
}

// Uniform over everything except the origin; the self-probability must stay
// zero so generated trips always clear the minimum-distance filter.
std::vector<std::vector<std::vector<double>>> uniform_dests(int stations) {
    std::vector<std::vector<std::vector<double>>> dest(
        stations,
        std::vector<std::vector<double>>(24, std::vector<double>(stations, 0.0)));
    for (int s = 0; s < stations; ++s)
        for (int h = 0; h < 24; ++h)
            for (int d = 0; d < stations; ++d)
                if (d != s) dest[s][h][d] = 1.0 / (stations - 1);
    return dest;
}

}  // namespace

void GroundTruth::validate() const {
    int S = station_count();
    if (S < 2) throw std::invalid_argument("ground truth needs at least two stations");
    for (int i = 0; i < S; ++i) {
        const TruthStation& st = stations[i];
        if (!geo_valid(st.center))
            throw std::invalid_argument("station " + std::to_string(i) + " has invalid coordinates");
        if (!(st.scatter_m > 0.0) || st.scatter_m >= 100.0)
            throw std::invalid_argument("station scatter must be in (0, 100) meters");
        if (st.fleet < 0) throw std::invalid_argument("station fleet must be non-negative");
    }
    // Keep stations far enough apart that any cross-station ride, even
    // between the closest jittered endpoints, clears the distance filter.
    for (int i = 0; i < S; ++i) {
        for (int j = i + 1; j < S; ++j) {
            if (haversine_m(stations[i].center, stations[j].center) < 450.0)
                throw std::invalid_argument("stations " + std::to_string(i) + " and " +
                                            std::to_string(j) + " are closer than 450 m");
        }
    }
    if (rate.size() != 3) throw std::invalid_argument("rate table needs all three day categories");
    for (const auto& cat : rate) {
        if (static_cast<int>(cat.size()) != S)
            throw std::invalid_argument("rate table station dimension is wrong");
        for (const auto& row : cat) {
            if (row.size() != 24) throw std::invalid_argument("rate table needs 24 hours");
            for (double v : row)
                if (!(v >= 0.0) || v > 1000.0)
                    throw std::invalid_argument("rates must be finite, non-negative, and sane");
        }
    }
    if (static_cast<int>(dest.size()) != S)
        throw std::invalid_argument("destination table station dimension is wrong");
    for (int s = 0; s < S; ++s) {
        if (dest[s].size() != 24)
            throw std::invalid_argument("destination table needs 24 hours");
        for (int h = 0; h < 24; ++h) {
            const auto& row = dest[s][h];
            if (static_cast<int>(row.size()) != S)
                throw std::invalid_argument("destination row width is wrong");
            double sum = 0.0;
            for (double v : row) {
                if (!(v >= 0.0)) throw std::invalid_argument("destination probabilities must be non-negative");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("destination row for station " + std::to_string(s) +
                                            " hour " + std::to_string(h) + " does not sum to 1");
            if (row[s] != 0.0)
                throw std::invalid_argument("self-destination probability must be zero (station " +
                                            std::to_string(s) + ")");
        }
    }
}

demand::DemandModel GroundTruth::as_demand_model() const {
    validate();
    demand::DemandModel m;
    m.rates = demand::RateTable::zeros(station_count());
    m.rates.rate = rate;
    m.dests.stations = station_count();
    m.dests.prob = dest;
    m.dests.observations.assign(station_count(), std::vector<std::int64_t>(24, 0));
    m.utc_offset_min = 0;
    m.window_start_day = kGenesisUnix / 86400;
    m.window_days = 0;
    return m;
}

cluster::StationSet GroundTruth::as_station_set() const {
    validate();
    cluster::StationSet set;
    std::vector<GeoPoint> centers;
    for (const TruthStation& st : stations) centers.push_back(st.center);
    set.projection = cluster::projection_for(centers);
    for (int i = 0; i < station_count(); ++i) {
        cluster::Station st;
        st.id = i;
        st.centroid = stations[i].center;
        st.radius_m = stations[i].scatter_m;
        st.area_m2 = kPi * st.radius_m * st.radius_m;
        st.members = 0;
        st.initial_bikes = stations[i].fleet;
        set.stations.push_back(st);
    }
    return set;
}

SynthResult generate(const GroundTruth& truth, const SynthOptions& opt) {
    truth.validate();
    if (opt.days < 1 || opt.days > 400) throw std::invalid_argument("days must be in [1, 400]");
    if (opt.noise_fraction < 0.0 || opt.noise_fraction > 1.0 ||
        opt.relocation_fraction < 0.0 || opt.relocation_fraction > 1.0)
        throw std::invalid_argument("ping injection fractions must be in [0, 1]");

    int S = truth.station_count();
    Rng rng(opt.seed);
    SynthResult out;

    struct Bike {
        std::string id;
        GeoPoint pos;
        std::int64_t last_event = kGenesisUnix;  // time of the latest ping, also time freed
    };
    std::vector<Bike> bikes;
    using PoolEntry = std::pair<std::int64_t, int>;  // (free at, bike index)
    std::vector<std::priority_queue<PoolEntry, std::vector<PoolEntry>, std::greater<PoolEntry>>>
        pool(S);

    for (int s = 0; s < S; ++s) {
        for (std::int64_t b = 0; b < truth.stations[s].fleet; ++b) {
            Bike bk;
            bk.id = bike_name(static_cast<int>(bikes.size()));
            bk.pos = jitter_disk(rng, truth.stations[s].center, truth.stations[s].scatter_m);
            bikes.push_back(bk);
            pool[s].emplace(kGenesisUnix, static_cast<int>(bikes.size()) - 1);
            out.pings.push_back(Ping{bikes.back().id, kGenesisUnix, bikes.back().pos});
        }
    }

    // Draw the full demand stream first, then serve it in time order so a
    // bike dropped off mid-hour can serve a later departure the same hour.
    struct Event {
        std::int64_t t;
        std::int64_t seq;
        std::int32_t origin;
        std::int32_t dest;
    };
    std::vector<Event> events;
    std::int64_t seq = 0;
    for (int day = 0; day < opt.days; ++day) {
        for (int h = 0; h < 24; ++h) {
            std::int64_t step = static_cast<std::int64_t>(day) * 24 + h;
            DayCategory cat = day_category_of_step(step);
            std::int64_t hour_start = kGenesisUnix + step * 3600;
            for (int s = 0; s < S; ++s) {
                double lambda = truth.rate[static_cast<int>(cat)][s][h];
                for (int iv = 0; iv < demand::kIntervalsPerHour; ++iv) {
                    std::int64_t n = poisson(rng, lambda);
                    for (std::int64_t i = 0; i < n; ++i) {
                        // Offsets start at 1 so no request coincides with the
                        // fleet's initial pings at the epoch second.
                        std::int64_t t = hour_start + iv * 120 + 1 +
                                         static_cast<std::int64_t>(uniform_below(rng, 119));
                        auto d = static_cast<std::int32_t>(
                            categorical(rng, std::span<const double>(truth.dest[s][h])));
                        events.push_back(Event{t, seq++, static_cast<std::int32_t>(s), d});
                    }
                }
            }
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.t, a.seq) < std::tie(b.t, b.seq);
    });

    for (const Event& ev : events) {
        auto& pq = pool[ev.origin];
        // A bike is eligible only if it parked strictly before the request
        // second. This keeps each bike's ping times strictly increasing, so
        // the trace never contains same-second duplicates.
        if (pq.empty() || pq.top().first >= ev.t) {
            ++out.unserved;
            continue;
        }
        int bi = pq.top().second;
        pq.pop();
        Bike& bk = bikes[bi];

        // Optional stray ping shortly before departure. It lands within 90 m
        // of the resting spot, so both pairs it creates fail the distance
        // filter, and it never precedes the bike's previous event.
        if (opt.noise_fraction > 0.0) {
            bool fire = uniform_double(rng) < opt.noise_fraction;
            if (fire && ev.t - 60 > bk.last_event) {
                GeoPoint np = jitter_disk(rng, bk.pos, 90.0);
                out.pings.push_back(Ping{bk.id, ev.t - 60, np});
            }
        }

        GeoPoint arrive = jitter_disk(rng, truth.stations[ev.dest].center,
                                      truth.stations[ev.dest].scatter_m);
        double dist = haversine_m(bk.pos, arrive);
        // 12 km/h cruise with a floor that keeps the duration filter happy.
        auto dur = static_cast<std::int64_t>(std::ceil(dist * 0.3));
        if (dur < 180) dur = 180;

        out.pings.push_back(Ping{bk.id, ev.t, bk.pos});
        out.pings.push_back(Ping{bk.id, ev.t + dur, arrive});
        Trip trip;
        trip.bike_id = bk.id;
        trip.t_start = ev.t;
        trip.t_end = ev.t + dur;
        trip.origin = bk.pos;
        trip.dest = arrive;
        trip.origin_station = ev.origin;
        trip.dest_station = ev.dest;
        out.trips.push_back(trip);
        ++out.served;

        bk.pos = arrive;
        bk.last_event = ev.t + dur;

        // Optional out-and-back relocation hop: 5 km in 300 s each way, fast
        // enough that the speed filter rejects both pairs, and back at the
        // start so the bike's resting position is unchanged.
        if (opt.relocation_fraction > 0.0) {
            bool fire = uniform_double(rng) < opt.relocation_fraction;
            if (fire) {
                double th = 2.0 * kPi * uniform_double(rng);
                GeoPoint away = offset_point(arrive, 5000.0 * std::cos(th), 5000.0 * std::sin(th));
                out.pings.push_back(Ping{bk.id, bk.last_event + 300, away});
                out.pings.push_back(Ping{bk.id, bk.last_event + 600, arrive});
                bk.last_event += 600;
            }
        }

        pool[ev.dest].emplace(bk.last_event, bi);
    }

    std::sort(out.pings.begin(), out.pings.end(), [](const Ping& a, const Ping& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.bike_id < b.bike_id;
    });
    std::sort(out.trips.begin(), out.trips.end(), [](const Trip& a, const Trip& b) {
        if (a.t_start != b.t_start) return a.t_start < b.t_start;
        return a.bike_id < b.bike_id;
    });
    return out;
}

GroundTruth uniform_truth(int stations, std::int64_t fleet_per_station, double rate) {
    GroundTruth t;
    t.stations = grid_layout(stations, fleet_per_station, 60.0);
    t.rate = zero_rates(stations);
    for (auto& cat : t.rate)
        for (auto& st : cat)
            for (double& v : st) v = rate;
    t.dest = uniform_dests(stations);
    t.validate();
    return t;
}

GroundTruth commuter_truth(int stations, std::int64_t fleet_per_station, double peak_rate,
                           double offpeak_rate) {
    if (stations < 4) throw std::invalid_argument("commuter preset needs at least four stations");
    GroundTruth t;
    t.stations = grid_layout(stations, fleet_per_station, 60.0);
    t.rate = zero_rates(stations);
    t.dest = uniform_dests(stations);
    int res_end = stations / 2;  // [0, res_end) residential, the rest business

    for (int cat = 0; cat < 3; ++cat) {
        bool weekday = cat != static_cast<int>(DayCategory::SAT_SUN);
        for (int s = 0; s < stations; ++s) {
            for (int h = 0; h < 24; ++h) {
                double r = offpeak_rate;
                if (weekday && h >= 7 && h <= 9 && s < res_end) r = peak_rate;
                if (weekday && h >= 17 && h <= 19 && s >= res_end) r = peak_rate;
                t.rate[cat][s][h] = r;
            }
        }
    }
    // Morning flow points at the business half, evening flow back home.
    for (int s = 0; s < stations; ++s) {
        for (int h = 7; h <= 9; ++h) {
            if (s >= res_end) continue;
            auto& row = t.dest[s][h];
            std::fill(row.begin(), row.end(), 0.0);
            for (int d = res_end; d < stations; ++d) row[d] = 1.0 / (stations - res_end);
        }
        for (int h = 17; h <= 19; ++h) {
            if (s < res_end) continue;
            auto& row = t.dest[s][h];
            std::fill(row.begin(), row.end(), 0.0);
            for (int d = 0; d < res_end; ++d) row[d] = 1.0 / res_end;
        }
    }
    t.validate();
    return t;
}

GroundTruth calibration_truth(int stations, std::int64_t fleet_per_station, double rate,
                              int first_hour, int last_hour) {
    if (first_hour < 0 || last_hour > 23 || first_hour > last_hour)
        throw std::invalid_argument("calibration hours must satisfy 0 <= first <= last <= 23");
    GroundTruth t;
    t.stations = grid_layout(stations, fleet_per_station, 60.0);
    t.rate = zero_rates(stations);
    for (int s = 0; s < stations; ++s)
        for (int h = first_hour; h <= last_hour; ++h)
            t.rate[static_cast<int>(DayCategory::MON_THU)][s][h] = rate;
    t.dest = uniform_dests(stations);
    t.validate();
    return t;
}

GroundTruth truth_by_name(const std::string& preset, int stations,
                          std::int64_t fleet_per_station, double rate) {
    if (preset == "uniform") return uniform_truth(stations, fleet_per_station, rate);
    if (preset == "commuter") return commuter_truth(stations, fleet_per_station, rate, rate * 0.05);
    if (preset == "calibration") return calibration_truth(stations, fleet_per_station, rate, 7, 12);
    throw std::invalid_argument("unknown preset '" + preset +
                                "' (expected uniform, commuter, or calibration)");
}

namespace {

using nlohmann::json;

const char* kCatNames[3] = {"mon_thu", "fri", "sat_sun"};

}  // namespace

std::string truth_to_json(const GroundTruth& truth) {
    json j;
    j["format"] = "bsr-ground-truth";
    j["version"] = 1;
    json st = json::array();
    for (const TruthStation& s : truth.stations) {
        st.push_back({{"lat", s.center.lat},
                      {"lon", s.center.lon},
                      {"scatter_m", s.scatter_m},
                      {"fleet", s.fleet}});
    }
    j["stations"] = st;
    for (int c = 0; c < 3; ++c) j["rate"][kCatNames[c]] = truth.rate[c];
    j["dest"] = truth.dest;
    return j.dump(2) + "\n";
}

GroundTruth truth_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("ground truth is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format") || j["format"] != "bsr-ground-truth")
        throw std::invalid_argument("expected a bsr-ground-truth document");
    GroundTruth t;
    try {
        for (const auto& sj : j.at("stations")) {
            TruthStation s;
            s.center.lat = sj.at("lat").get<double>();
            s.center.lon = sj.at("lon").get<double>();
            s.scatter_m = sj.at("scatter_m").get<double>();
            s.fleet = sj.at("fleet").get<std::int64_t>();
            t.stations.push_back(s);
        }
        t.rate.resize(3);
        for (int c = 0; c < 3; ++c)
            t.rate[c] = j.at("rate").at(kCatNames[c]).get<std::vector<std::vector<double>>>();
        t.dest = j.at("dest").get<std::vector<std::vector<std::vector<double>>>>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed ground truth: ") + e.what());
    }
    t.validate();
    return t;
}

void write_truth_file(const std::string& path, const GroundTruth& truth) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << truth_to_json(truth);
    if (!out) throw std::runtime_error("short write to " + path);
}

GroundTruth read_truth_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return truth_from_json(os.str());
}

}  // namespace synth
}  // namespace bsr
