// Demand estimation and scenario sampling. The rate arithmetic is pinned by
// a hand-counted example: 30 trips out of one station in Mon-Thu hour 8 over
// a window holding 15 Mon-Thu days gives 30 / (15 * 30) = 1/15 per interval.

#include <stdexcept>

#include "bsr/demand.hpp"
#include "doctest.h"

using namespace bsr;
using namespace bsr::demand;

namespace {

constexpr std::int64_t kMonday = 17413;  // 2017-09-04, a Monday

Trip make_trip(int origin, int dest, std::int64_t t_start) {
    Trip t;
    t.bike_id = "b";
    t.t_start = t_start;
    t.t_end = t_start + 600;
    t.origin_station = origin;
    t.dest_station = dest;
    return t;
}

std::int64_t at_local(std::int64_t day, int hour, int minute = 0) {
    return day * 86400 + hour * 3600 + minute * 60;
}

}  // namespace

TEST_CASE("category_day_counts") {
    // One week starting Monday: 4 Mon-Thu, 1 Fri, 2 weekend days.
    auto week = category_day_counts(kMonday, 7);
    CHECK(week[0] == 4);
    CHECK(week[1] == 1);
    CHECK(week[2] == 2);

    auto one = category_day_counts(kMonday, 1);
    CHECK(one[0] == 1);
    CHECK(one[1] == 0);

    // Friday start, two days: Fri + Sat.
    auto fri = category_day_counts(kMonday + 4, 2);
    CHECK(fri[0] == 0);
    CHECK(fri[1] == 1);
    CHECK(fri[2] == 1);

    // 24 days from a Monday: 3 full weeks plus Mon/Tue/Wed = 15 Mon-Thu days.
    auto y = category_day_counts(kMonday, 24);
    CHECK(y[0] == 15);
    CHECK(y[1] == 3);
    CHECK(y[2] == 6);
}

TEST_CASE("estimate rates: the 1/15 example") {
    // 30 trips out of station 5 during Mon-Thu hour 8, window of 24 days
    // starting a Monday (15 Mon-Thu days observed).
    std::vector<Trip> trips;
    for (int i = 0; i < 30; ++i) {
        std::int64_t day = kMonday + (i % 4) + 7 * (i % 3);  // always Mon..Thu
        trips.push_back(make_trip(5, (i % 2) ? 1 : 2, at_local(day, 8, i % 60)));
    }
    DemandModel m = estimate(trips, 6, 0, kMonday, 24);

    CHECK(m.rates.at(5, DayCategory::MON_THU, 8) == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
    CHECK(m.rates.count[0][5][8] == 30);
    CHECK(m.rates.at(5, DayCategory::MON_THU, 9) == 0.0);
    CHECK(m.rates.at(5, DayCategory::FRI, 8) == 0.0);
    CHECK(m.rates.at(4, DayCategory::MON_THU, 8) == 0.0);
    CHECK(m.window_start_day == kMonday);
    CHECK(m.window_days == 24);

    SUBCASE("destinations pool over categories") {
        // 15 trips to station 1, 15 to station 2, all in hour 8.
        CHECK(m.dests.observations[5][8] == 30);
        CHECK(m.dests.prob[5][8][1] == doctest::Approx(0.5));
        CHECK(m.dests.prob[5][8][2] == doctest::Approx(0.5));
        CHECK(m.dests.prob[5][8][0] == doctest::Approx(0.0));
    }

    SUBCASE("unobserved rows fall back to uniform") {
        CHECK(m.dests.observations[3][12] == 0);
        CHECK(m.dests.prob[3][12][0] == doctest::Approx(1.0 / 6.0));
        CHECK(m.dests.prob[3][12][5] == doctest::Approx(1.0 / 6.0));
    }
}

TEST_CASE("estimate windows and offsets") {
    SUBCASE("window inferred from trip span") {
        std::vector<Trip> trips = {make_trip(0, 1, at_local(kMonday, 10)),
                                   make_trip(1, 0, at_local(kMonday + 2, 23))};
        DemandModel m = estimate(trips, 2, 0);
        CHECK(m.window_start_day == kMonday);
        CHECK(m.window_days == 3);
    }

    SUBCASE("utc offset shifts the local bin") {
        // 16:30 UTC Monday is 00:30 Tuesday at +480 minutes.
        std::vector<Trip> trips = {make_trip(0, 1, at_local(kMonday, 16, 30))};
        DemandModel m = estimate(trips, 2, 480, kMonday, 7);
        CHECK(m.utc_offset_min == 480);
        CHECK(m.rates.count[0][0][0] == 1);   // Tuesday hour 0
        CHECK(m.rates.count[0][0][16] == 0);  // not the UTC hour
    }

    SUBCASE("unannotated trips are rejected") {
        Trip t = make_trip(0, 1, at_local(kMonday, 10));
        t.dest_station = -1;
        CHECK_THROWS_AS(estimate({t}, 2, 0), std::invalid_argument);
    }

    SUBCASE("trips outside an explicit window are rejected") {
        std::vector<Trip> trips = {make_trip(0, 1, at_local(kMonday + 10, 10))};
        CHECK_THROWS_AS(estimate(trips, 2, 0, kMonday, 7), std::invalid_argument);
    }

    SUBCASE("station id out of range is rejected") {
        std::vector<Trip> trips = {make_trip(0, 5, at_local(kMonday, 10))};
        CHECK_THROWS_AS(estimate(trips, 2, 0), std::invalid_argument);
    }
}

TEST_CASE("scenario sampling") {
    // A model with deliberately lopsided rates.
    RateTable rates = RateTable::zeros(3);
    for (int h = 0; h < 24; ++h) {
        rates.rate[0][0][h] = 0.2;  // Mon-Thu, station 0
        rates.rate[1][0][h] = 0.05;
        rates.rate[2][1][h] = 0.1;
    }
    DestTable dests = DestTable::uniform(3);
    DemandModel model{rates, dests, 0, kMonday, 28};

    SUBCASE("conservation holds for every scenario-hour") {
        ScenarioSet s = sample_scenarios(model, 0, 24, 5, 123);
        REQUIRE(s.scenarios == 5);
        REQUIRE(s.horizon == 24);
        for (int k = 0; k < 5; ++k)
            for (int tau = 0; tau < 24; ++tau) {
                std::int64_t in = 0, out = 0;
                for (int st = 0; st < 3; ++st) {
                    in += s.flow_in[k][tau][st];
                    out += s.flow_out[k][tau][st];
                    CHECK(s.flow_in[k][tau][st] >= 0);
                    CHECK(s.flow_out[k][tau][st] >= 0);
                }
                CHECK(in == out);
                CHECK(out == static_cast<std::int64_t>(s.trips[k][tau].size()));
            }
    }

    SUBCASE("flows match the sampled trips") {
        ScenarioSet s = sample_scenarios(model, 0, 6, 2, 9);
        for (int k = 0; k < 2; ++k)
            for (int tau = 0; tau < 6; ++tau) {
                std::vector<std::int64_t> out(3, 0), in(3, 0);
                for (auto [o, d] : s.trips[k][tau]) {
                    ++out[o];
                    ++in[d];
                }
                CHECK(out == s.flow_out[k][tau]);
                CHECK(in == s.flow_in[k][tau]);
            }
    }

    SUBCASE("cumulative_net sums hours") {
        ScenarioSet s = sample_scenarios(model, 0, 4, 3, 77);
        auto net = s.cumulative_net();
        REQUIRE(net.size() == 3);
        for (int k = 0; k < 3; ++k) {
            std::int64_t total = 0;
            for (int st = 0; st < 3; ++st) {
                std::int64_t expect = 0;
                for (int tau = 0; tau < 4; ++tau)
                    expect += s.flow_in[k][tau][st] - s.flow_out[k][tau][st];
                CHECK(net[k][st] == expect);
                total += net[k][st];
            }
            CHECK(total == 0);  // conservation accumulates
        }
    }

    SUBCASE("deterministic and seed-sensitive") {
        ScenarioSet a = sample_scenarios(model, 12, 8, 3, 42);
        ScenarioSet b = sample_scenarios(model, 12, 8, 3, 42);
        ScenarioSet c = sample_scenarios(model, 12, 8, 3, 43);
        CHECK(a.flow_out == b.flow_out);
        CHECK(a.flow_in == b.flow_in);
        CHECK(a.flow_out != c.flow_out);
    }

    SUBCASE("zero rates sample zero flows") {
        DemandModel zero{RateTable::zeros(2), DestTable::uniform(2), 0, kMonday, 7};
        ScenarioSet s = sample_scenarios(zero, 0, 24, 2, 5);
        for (const auto& k : s.flow_out)
            for (const auto& tau : k)
                for (auto v : tau) CHECK(v == 0);
    }

    SUBCASE("weekday hours pick the right category") {
        // Rates only on Mon-Thu; steps 96..119 are a Friday, so nothing fires.
        ScenarioSet fri = sample_scenarios(model, 96, 24, 1, 4);
        std::int64_t total = 0;
        for (int tau = 0; tau < 24; ++tau)
            for (int st = 0; st < 3; ++st) total += fri.flow_out[0][tau][st];
        // station 0 fires at 0.05 per interval from the FRI table
        CHECK(total > 0);
        ScenarioSet sat = sample_scenarios(model, 120, 24, 1, 4);
        std::int64_t sat_out0 = 0, sat_out1 = 0;
        for (int tau = 0; tau < 24; ++tau) {
            sat_out0 += sat.flow_out[0][tau][0];
            sat_out1 += sat.flow_out[0][tau][1];
        }
        CHECK(sat_out0 == 0);  // SAT_SUN table has station 0 silent
        CHECK(sat_out1 > 0);
    }
}

TEST_CASE("model json round trip") {
    RateTable rates = RateTable::zeros(2);
    rates.rate[0][0][8] = 1.0 / 15.0;
    rates.count[0][0][8] = 30;
    DestTable dests = DestTable::uniform(2);
    dests.prob[0][8] = {0.25, 0.75};
    dests.observations[0][8] = 40;
    DemandModel m{rates, dests, 480, kMonday, 24};

    DemandModel back = model_from_json(model_to_json(m));
    CHECK(back.rates.stations == 2);
    CHECK(back.rates.rate[0][0][8] == m.rates.rate[0][0][8]);  // exact double round trip
    CHECK(back.rates.count[0][0][8] == 30);
    CHECK(back.dests.prob[0][8][1] == 0.75);
    CHECK(back.dests.observations[0][8] == 40);
    CHECK(back.utc_offset_min == 480);
    CHECK(back.window_start_day == kMonday);
    CHECK(back.window_days == 24);

    CHECK_THROWS_AS(model_from_json("{}"), std::runtime_error);
    CHECK_THROWS_AS(model_from_json("not json"), std::exception);
}
