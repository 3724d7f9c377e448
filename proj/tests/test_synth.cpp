// The generator's core promise: feeding its pings through the real ingestion
// path recovers exactly the trips it says it generated, with or without the
// injected noise pings and relocation hops. That equality is what lets the
// rest of the pipeline be tested against known ground truth.

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "bsr/ingest.hpp"
#include "bsr/synth.hpp"
#include "doctest.h"

using namespace bsr;
using namespace bsr::synth;

namespace {

// Round-trip pings through the CSV/ingest path and extract trips.
std::vector<Trip> extract_from(const std::vector<Ping>& pings) {
    std::ostringstream csv;
    ingest::write_pings_csv(csv, pings);
    std::istringstream in(csv.str());
    ingest::ErrorReport rep;
    auto rows = ingest::parse_pings(in, ingest::ParseOptions{}, rep);
    REQUIRE(rep.errors.empty());
    auto hist = ingest::group_histories(std::move(rows), rep);
    return ingest::extract_trips(hist);
}

void sort_trips(std::vector<Trip>& v) {
    std::sort(v.begin(), v.end(), [](const Trip& a, const Trip& b) {
        if (a.bike_id != b.bike_id) return a.bike_id < b.bike_id;
        return a.t_start < b.t_start;
    });
}

void check_same_trips(std::vector<Trip> got, std::vector<Trip> want) {
    sort_trips(got);
    sort_trips(want);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].bike_id == want[i].bike_id);
        CHECK(got[i].t_start == want[i].t_start);
        CHECK(got[i].t_end == want[i].t_end);
        // CSV doubles round-trip exactly, so coordinates match bit for bit.
        CHECK(got[i].origin.lat == want[i].origin.lat);
        CHECK(got[i].origin.lon == want[i].origin.lon);
        CHECK(got[i].dest.lat == want[i].dest.lat);
        CHECK(got[i].dest.lon == want[i].dest.lon);
    }
}

}  // namespace

TEST_CASE("presets validate and expose the right shapes") {
    GroundTruth u = uniform_truth(6, 4, 0.1);
    u.validate();
    CHECK(u.station_count() == 6);
    CHECK(u.rate[0][0][12] == 0.1);
    CHECK(u.dest[0][12][0] == 0.0);  // never self

    GroundTruth c = commuter_truth(8, 5, 0.3, 0.02);
    c.validate();
    CHECK(c.rate[0][0][8] == 0.3);    // residential morning peak
    CHECK(c.rate[0][0][12] == 0.02);  // off-peak
    CHECK(c.rate[2][0][8] == 0.02);   // weekends idle
    CHECK(c.rate[0][7][18] == 0.3);   // business evening peak
    // Morning destinations all point at the business half.
    for (int d = 0; d < 4; ++d) CHECK(c.dest[0][8][d] == 0.0);
    CHECK(c.dest[0][8][5] == doctest::Approx(0.25));

    GroundTruth k = calibration_truth(3, 10, 6.0, 7, 12);
    k.validate();
    CHECK(k.rate[0][0][7] == 6.0);
    CHECK(k.rate[0][0][12] == 6.0);
    CHECK(k.rate[0][0][6] == 0.0);
    CHECK(k.rate[0][0][13] == 0.0);
    CHECK(k.rate[1][0][8] == 0.0);  // Friday silent
    CHECK(k.rate[2][0][8] == 0.0);

    CHECK(truth_by_name("uniform", 5, 2, 0.1).station_count() == 5);
    CHECK_THROWS_AS(truth_by_name("bogus", 5, 2, 0.1), std::invalid_argument);
}

TEST_CASE("truth validation catches bad inputs") {
    GroundTruth t = uniform_truth(4, 2, 0.1);

    SUBCASE("stations too close together") {
        t.stations[1].center = t.stations[0].center;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
    SUBCASE("scatter must stay under the distance filter") {
        t.stations[2].scatter_m = 250.0;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
    SUBCASE("destination rows must sum to one") {
        t.dest[0][8][1] += 0.5;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
    SUBCASE("self destinations are rejected") {
        t.dest[0][8].assign(4, 0.0);
        t.dest[0][8][0] = 1.0;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
    SUBCASE("negative rate") {
        t.rate[0][1][3] = -0.1;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
}

TEST_CASE("views of the truth") {
    GroundTruth t = uniform_truth(5, 3, 0.08);

    demand::DemandModel m = t.as_demand_model();
    CHECK(m.rates.stations == 5);
    CHECK(m.rates.rate[0][2][10] == 0.08);
    CHECK(m.utc_offset_min == 0);
    CHECK(m.window_start_day == kGenesisUnix / 86400);
    CHECK(m.dests.prob[1][9] == t.dest[1][9]);

    cluster::StationSet s = t.as_station_set();
    REQUIRE(s.stations.size() == 5);
    CHECK(s.stations[3].initial_bikes == 3);
    CHECK(s.stations[0].radius_m == t.stations[0].scatter_m);
    CHECK(s.stations[0].centroid.lat == t.stations[0].center.lat);
}

TEST_CASE("generate") {
    GroundTruth truth = uniform_truth(6, 20, 0.1);
    SynthOptions opt;
    opt.days = 3;
    opt.seed = 7;

    SynthResult res = generate(truth, opt);
    REQUIRE(res.trips.size() > 100);
    // Inventories random-walk, so a station can run dry for a moment even
    // with a generous fleet; only a trickle of requests may go unserved.
    CHECK(res.unserved * 50 < res.served);
    CHECK(res.served == static_cast<std::int64_t>(res.trips.size()));

    SUBCASE("pings are sorted and start with one per bike") {
        REQUIRE(res.pings.size() >= 120);
        for (std::size_t i = 1; i < res.pings.size(); ++i) {
            bool ordered = res.pings[i - 1].t < res.pings[i].t ||
                           (res.pings[i - 1].t == res.pings[i].t &&
                            res.pings[i - 1].bike_id <= res.pings[i].bike_id);
            REQUIRE(ordered);
        }
        // 120 bikes parked at genesis
        for (int i = 0; i < 120; ++i) CHECK(res.pings[i].t == kGenesisUnix);
    }

    SUBCASE("every generated trip passes the filters") {
        for (const auto& t : res.trips) {
            std::int64_t dt = t.t_end - t.t_start;
            double d = haversine_m(t.origin, t.dest);
            CHECK(ingest::trip_filters_pass(dt, d));
        }
    }

    SUBCASE("trips carry truth station annotations") {
        for (const auto& t : res.trips) {
            REQUIRE(t.origin_station >= 0);
            REQUIRE(t.origin_station < 6);
            REQUIRE(t.dest_station >= 0);
            CHECK(t.dest_station != t.origin_station);
            CHECK(haversine_m(t.origin, truth.stations[t.origin_station].center) <
                  truth.stations[t.origin_station].scatter_m + 1.0);
        }
    }

    SUBCASE("extraction recovers exactly the generated trips") {
        check_same_trips(extract_from(res.pings), res.trips);
    }

    SUBCASE("deterministic, and seed-sensitive") {
        SynthResult again = generate(truth, opt);
        std::ostringstream a, b;
        ingest::write_pings_csv(a, res.pings);
        ingest::write_pings_csv(b, again.pings);
        CHECK(a.str() == b.str());

        SynthOptions other = opt;
        other.seed = 8;
        SynthResult diff = generate(truth, other);
        std::ostringstream c;
        ingest::write_pings_csv(c, diff.pings);
        CHECK(a.str() != c.str());
    }
}

TEST_CASE("noise and relocation exercise the filters without changing trips") {
    GroundTruth truth = uniform_truth(5, 15, 0.08);
    SynthOptions plain;
    plain.days = 2;
    plain.seed = 21;

    SynthOptions noisy = plain;
    noisy.noise_fraction = 1.0;
    SynthResult n = generate(truth, noisy);
    CHECK(n.trips.size() > 50);
    check_same_trips(extract_from(n.pings), n.trips);

    SynthOptions hops = plain;
    hops.relocation_fraction = 1.0;
    SynthResult h = generate(truth, hops);
    CHECK(h.trips.size() > 50);
    // Relocation adds two pings per trip, none of which survive the filters.
    CHECK(h.pings.size() > h.trips.size() * 3);
    check_same_trips(extract_from(h.pings), h.trips);

    SynthOptions both = plain;
    both.noise_fraction = 0.5;
    both.relocation_fraction = 0.5;
    SynthResult b = generate(truth, both);
    check_same_trips(extract_from(b.pings), b.trips);
}

TEST_CASE("starved fleet counts unserved demand") {
    GroundTruth truth = uniform_truth(4, 0, 0.2);
    SynthOptions opt;
    opt.days = 2;
    opt.seed = 3;
    SynthResult res = generate(truth, opt);
    CHECK(res.trips.empty());
    CHECK(res.pings.empty());  // no bikes, no pings
    CHECK(res.served == 0);
    CHECK(res.unserved > 100);
}

TEST_CASE("generate option validation") {
    GroundTruth truth = uniform_truth(4, 2, 0.1);
    SynthOptions opt;
    opt.days = 0;
    CHECK_THROWS_AS(generate(truth, opt), std::invalid_argument);
    opt.days = 7;
    opt.noise_fraction = 1.5;
    CHECK_THROWS_AS(generate(truth, opt), std::invalid_argument);
    opt.noise_fraction = 0.0;
    opt.relocation_fraction = -0.1;
    CHECK_THROWS_AS(generate(truth, opt), std::invalid_argument);
}

TEST_CASE("truth json round trip") {
    GroundTruth t = commuter_truth(6, 4, 0.25, 0.02);
    GroundTruth back = truth_from_json(truth_to_json(t));
    REQUIRE(back.station_count() == 6);
    CHECK(back.stations[2].center.lat == t.stations[2].center.lat);
    CHECK(back.stations[2].fleet == 4);
    CHECK(back.stations[2].scatter_m == t.stations[2].scatter_m);
    CHECK(back.rate == t.rate);
    CHECK(back.dest == t.dest);
    back.validate();

    CHECK_THROWS_AS(truth_from_json("{}"), std::exception);
}
