// Ping parsing, trip extraction, and the three filter thresholds. The filter
// boundaries are load-bearing: all six edge cases are pinned exactly,
// including the 25.0 km/h boundary which must compare exactly in floating
// point (2000 m in 288 s is 25 km/h on the nose).

#include <sstream>
#include <stdexcept>

#include "bsr/geo.hpp"
#include "bsr/ingest.hpp"
#include "doctest.h"

using namespace bsr;
using namespace bsr::ingest;

namespace {

// Degrees of latitude for a given meridian distance; haversine along a
// meridian is exactly R * dphi, so these distances are exact.
double lat_for_meters(double m) { return m / (kEarthRadiusM * kPi / 180.0); }

}  // namespace

TEST_CASE("trip filter boundaries") {
    // duration: 180 s is in, 179 s is out
    CHECK(trip_filters_pass(180, 500.0));
    CHECK_FALSE(trip_filters_pass(179, 500.0));
    // distance: 200 m is in, 199 m is out
    CHECK(trip_filters_pass(600, 200.0));
    CHECK_FALSE(trip_filters_pass(600, 199.0));
    // speed: exactly 25.0 km/h is in, 25.1 km/h is out
    CHECK(trip_filters_pass(288, 2000.0));        // 2000 * 3600 == 25000 * 288
    CHECK_FALSE(trip_filters_pass(288, 2008.0));  // 25.1 km/h
}

TEST_CASE("parse_pings") {
    SUBCASE("clean input") {
        std::istringstream in(
            "bike_id,timestamp,lat,lon\n"
            "b1,2017-09-04T00:00:00Z,40.44,-79.95\n"
            "b2,2017-09-04T00:01:00Z,40.45,-79.94\n");
        ErrorReport rep;
        auto rows = parse_pings(in, ParseOptions{}, rep);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].ping.bike_id == "b1");
        CHECK(rows[0].ping.t == 1504483200);
        CHECK(rows[0].ping.pos.lat == 40.44);
        CHECK(rows[1].line == 3);
        CHECK(rep.rows_total == 2);
        CHECK(rep.rows_kept == 2);
        CHECK(rep.errors.empty());
    }

    SUBCASE("bad rows are reported with line numbers") {
        std::istringstream in(
            "bike_id,timestamp,lat,lon\n"
            "b1,2017-09-04T00:00:00Z,40.44,-79.95\n"
            "b1,not-a-time,40.44,-79.95\n"
            "b1,2017-09-04T00:02:00Z,95.0,-79.95\n"
            "b1,2017-09-04T00:03:00Z,40.44\n"
            ",2017-09-04T00:04:00Z,40.44,-79.95\n"
            "b1,2017-09-04T00:05:00Z,forty,-79.95\n");
        ErrorReport rep;
        auto rows = parse_pings(in, ParseOptions{}, rep);
        CHECK(rows.size() == 1);
        CHECK(rep.rows_total == 6);
        CHECK(rep.rows_kept == 1);
        REQUIRE(rep.errors.size() == 5);
        CHECK(rep.errors[0].line == 3);
        CHECK(rep.errors[1].line == 4);
    }

    SUBCASE("strict mode throws on the first bad row") {
        std::istringstream in(
            "bike_id,timestamp,lat,lon\n"
            "b1,nope,40.44,-79.95\n");
        ErrorReport rep;
        ParseOptions opts;
        opts.strict = true;
        CHECK_THROWS_AS(parse_pings(in, opts, rep), std::runtime_error);
    }

    SUBCASE("headerless input") {
        std::istringstream in("b1,2017-09-04T00:00:00Z,40.44,-79.95\n");
        ErrorReport rep;
        ParseOptions opts;
        opts.has_header = false;
        CHECK(parse_pings(in, opts, rep).size() == 1);
    }
}

TEST_CASE("group_histories") {
    ErrorReport rep;
    std::vector<ParsedPing> rows;
    auto add = [&](const char* id, std::int64_t t, std::size_t line) {
        rows.push_back({Ping{id, t, {40.0, -79.0}}, line});
    };
    add("b2", 100, 2);
    add("b1", 300, 3);
    add("b1", 100, 4);
    add("b1", 100, 5);  // duplicate timestamp, first (line 4) wins
    add("b1", 200, 6);

    auto hist = group_histories(std::move(rows), rep);
    REQUIRE(hist.size() == 2);
    CHECK(hist[0].bike_id == "b1");  // sorted by id
    REQUIRE(hist[0].pings.size() == 3);
    CHECK(hist[0].pings[0].t == 100);
    CHECK(hist[0].pings[1].t == 200);
    CHECK(hist[0].pings[2].t == 300);
    CHECK(hist[1].bike_id == "b2");
    CHECK(rep.duplicates == 1);
    REQUIRE(rep.errors.size() == 1);
    CHECK(rep.errors[0].line == 5);
}

TEST_CASE("extract_trips") {
    const std::int64_t t0 = 1504483200;
    std::vector<BikeHistory> hist;

    // b1: a 600 m ride, then a 50 m shuffle (too short), then a slow 4350 m ride.
    BikeHistory b1{"b1", {}};
    b1.pings.push_back({"b1", t0, {0.0, 0.0}});
    b1.pings.push_back({"b1", t0 + 400, {lat_for_meters(600), 0.0}});
    b1.pings.push_back({"b1", t0 + 900, {lat_for_meters(650), 0.0}});
    b1.pings.push_back({"b1", t0 + 10900, {lat_for_meters(5000), 0.0}});
    hist.push_back(b1);

    // b2: fast pair, 30 km/h, rejected by the speed filter.
    BikeHistory b2{"b2", {}};
    b2.pings.push_back({"b2", t0, {0.0, 0.0}});
    b2.pings.push_back({"b2", t0 + 3600, {lat_for_meters(30000), 0.0}});
    hist.push_back(b2);

    // b3: only 100 s between pings.
    BikeHistory b3{"b3", {}};
    b3.pings.push_back({"b3", t0, {0.0, 0.0}});
    b3.pings.push_back({"b3", t0 + 100, {lat_for_meters(300), 0.0}});
    hist.push_back(b3);

    auto trips = extract_trips(hist);
    REQUIRE(trips.size() == 2);
    CHECK(trips[0].bike_id == "b1");
    CHECK(trips[0].t_start == t0);
    CHECK(trips[0].t_end == t0 + 400);
    CHECK(trips[0].origin.lat == 0.0);
    CHECK(trips[0].dest.lat == doctest::Approx(lat_for_meters(600)));
    CHECK(trips[1].t_start == t0 + 900);
    CHECK(trips[1].t_end == t0 + 10900);
    CHECK(trips[0].origin_station == -1);  // unassigned until clustering
}

TEST_CASE("usage_stats") {
    const std::int64_t week = 7 * 86400;
    const std::int64_t w0 = 0, w1 = 3 * week;

    std::vector<BikeHistory> hist;
    BikeHistory rider{"rider", {}};
    rider.pings.push_back({"rider", 1000, {0.0, 0.0}});
    rider.pings.push_back({"rider", 1400, {lat_for_meters(600), 0.0}});
    hist.push_back(rider);
    BikeHistory lazy{"lazy", {}};
    lazy.pings.push_back({"lazy", 500, {0.0, 0.0}});
    hist.push_back(lazy);

    UsageStats u = usage_stats(hist, w0, w1);
    REQUIRE(u.bike_ids.size() == 2);
    CHECK(u.bike_ids[0] == "lazy");
    CHECK(u.trips_per_bike[0] == 0);
    CHECK(u.bike_ids[1] == "rider");
    CHECK(u.trips_per_bike[1] == 1);

    // lazy idles over the whole window; rider from trip end to window end.
    REQUIRE(u.idle_intervals.size() == 2);
    CHECK(u.idle_intervals[0].bike_id == "lazy");
    CHECK(u.idle_intervals[0].start == w0);
    CHECK(u.idle_intervals[0].end == w1);
    CHECK(u.idle_intervals[1].bike_id == "rider");
    CHECK(u.idle_intervals[1].start == 1400);
    CHECK(u.idle_intervals[1].end == w1);

    SUBCASE("trip outside the window throws") {
        CHECK_THROWS_AS(usage_stats(hist, 1200, w1), std::invalid_argument);
    }
    SUBCASE("empty window throws") {
        CHECK_THROWS_AS(usage_stats(hist, 10, 10), std::invalid_argument);
    }
}

TEST_CASE("trips CSV round trip") {
    std::vector<Trip> trips;
    Trip t;
    t.bike_id = "b7";
    t.t_start = 1504483200;
    t.t_end = 1504483800;
    t.origin = {40.44125, -79.95875};
    t.dest = {40.4525, -79.94375};
    t.origin_station = 3;
    t.dest_station = 11;
    trips.push_back(t);

    SUBCASE("with stations") {
        std::ostringstream out;
        write_trips_csv(out, trips, true);
        std::istringstream in(out.str());
        auto back = read_trips_csv(in);
        REQUIRE(back.size() == 1);
        CHECK(back[0].bike_id == "b7");
        CHECK(back[0].t_start == t.t_start);
        CHECK(back[0].t_end == t.t_end);
        CHECK(back[0].origin.lat == t.origin.lat);  // format_double round-trips exactly
        CHECK(back[0].dest.lon == t.dest.lon);
        CHECK(back[0].origin_station == 3);
        CHECK(back[0].dest_station == 11);
    }

    SUBCASE("without stations") {
        std::ostringstream out;
        write_trips_csv(out, trips, false);
        std::istringstream in(out.str());
        auto back = read_trips_csv(in);
        REQUIRE(back.size() == 1);
        CHECK(back[0].origin_station == -1);
    }

    SUBCASE("bad column count") {
        std::istringstream in("a,b,c\n");
        CHECK_THROWS_AS(read_trips_csv(in), std::runtime_error);
    }
}

TEST_CASE("format_double") {
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-79.95) == "-79.95");
    // shortest representation still round-trips
    double v = 0.1 + 0.2;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("error report output") {
    ErrorReport rep;
    rep.rows_total = 5;
    rep.rows_kept = 3;
    rep.duplicates = 1;
    rep.errors.push_back({4, "bad coordinate"});
    std::ostringstream out;
    write_error_report(out, rep);
    std::string s = out.str();
    CHECK(s.find("rows_total=5") != std::string::npos);
    CHECK(s.find("rows_kept=3") != std::string::npos);
    CHECK(s.find("line 4: bad coordinate") != std::string::npos);
}
