// Calendar arithmetic, ISO-8601 parsing, and the step/day-category mapping.
// 1970-01-01 was a Thursday; 2017-09-04 was a Monday and is day 17413.

#include <stdexcept>

#include "bsr/timeutil.hpp"
#include "doctest.h"

using namespace bsr;

TEST_CASE("civil date arithmetic") {
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(1970, 1, 2) == 1);
    CHECK(days_from_civil(1969, 12, 31) == -1);
    CHECK(days_from_civil(2017, 9, 4) == 17413);
    CHECK(days_from_civil(2000, 3, 1) == 11017);  // leap year boundary

    SUBCASE("round trip") {
        for (std::int64_t day : {-1000, 0, 1, 17413, 20000}) {
            int y;
            unsigned m, d;
            civil_from_days(day, y, m, d);
            CHECK(days_from_civil(y, m, d) == day);
        }
    }

    SUBCASE("weekday") {
        CHECK(weekday_from_days(0) == 3);      // Thursday
        CHECK(weekday_from_days(17413) == 0);  // Monday
        CHECK(weekday_from_days(-1) == 2);     // Wednesday before the epoch
    }
}

TEST_CASE("iso8601 parsing") {
    CHECK(parse_iso8601("2017-09-04T00:00:00Z") == 1504483200);
    CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_iso8601("2017-09-04T08:00:00+08:00") == 1504483200);
    CHECK(parse_iso8601("2017-09-03T19:00:00-05:00") == 1504483200);
    CHECK(parse_iso8601("2017-09-04 00:00:00") == 1504483200);
    CHECK(parse_iso8601("2017-09-04T00:00:00.750Z") == 1504483200);

    CHECK_THROWS_AS(parse_iso8601(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso8601("not a date"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso8601("2017-13-01T00:00:00Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso8601("2017-09-04T25:00:00Z"), std::invalid_argument);

    SUBCASE("format round trip") {
        CHECK(format_iso8601_utc(1504483200) == "2017-09-04T00:00:00Z");
        for (std::int64_t t : {std::int64_t{0}, std::int64_t{1504483200}, std::int64_t{951868800}})
            CHECK(parse_iso8601(format_iso8601_utc(t)) == t);
    }
}

TEST_CASE("simulation steps") {
    // Step 0 is a Monday 00:00.
    CHECK(hour_of_day(0) == 0);
    CHECK(hour_of_day(25) == 1);
    CHECK(day_category_of_step(0) == DayCategory::MON_THU);
    CHECK(day_category_of_step(95) == DayCategory::MON_THU);   // Thursday 23:00
    CHECK(day_category_of_step(96) == DayCategory::FRI);       // Friday 00:00
    CHECK(day_category_of_step(119) == DayCategory::FRI);
    CHECK(day_category_of_step(120) == DayCategory::SAT_SUN);  // Saturday
    CHECK(day_category_of_step(167) == DayCategory::SAT_SUN);  // Sunday 23:00
    CHECK(day_category_of_step(168) == DayCategory::MON_THU);  // next Monday
}

TEST_CASE("local time under a utc offset") {
    // 2017-09-04T00:00:00Z is Monday midnight UTC; +480 min is Singapore.
    std::int64_t t = 1504483200;
    CHECK(local_day_index(t, 0) == 17413);
    CHECK(local_hour(t, 0) == 0);
    CHECK(local_hour(t, 480) == 8);
    CHECK(local_day_index(t, 480) == 17413);
    CHECK(local_day_category(t, 0) == DayCategory::MON_THU);

    // 17:00 UTC Monday is 01:00 Tuesday at +480.
    std::int64_t evening = t + 17 * 3600;
    CHECK(local_day_index(evening, 480) == 17414);
    CHECK(local_hour(evening, 480) == 1);

    // Negative offsets floor toward the previous day.
    CHECK(local_day_index(0, -60) == -1);
    CHECK(local_hour(0, -60) == 23);

    SUBCASE("category strings") {
        CHECK(day_category_from_string("MON_THU") == DayCategory::MON_THU);
        CHECK(day_category_from_string("FRI") == DayCategory::FRI);
        CHECK(day_category_from_string("SAT_SUN") == DayCategory::SAT_SUN);
        CHECK_THROWS_AS(day_category_from_string("TUESDAY"), std::invalid_argument);
    }
}
