#pragma once

// Calendar and simulation-time conventions.
//
// Simulation time is a plain hour counter ("time step"). Step 0 is a Monday
// 00:00, so weekday and hour-of-day fall out of modular arithmetic. Real
// timestamps are unix seconds (UTC); demand estimation shifts them by a
// configurable UTC offset before binning into local days and hours.

#include <cstdint>
#include <string>

namespace bsr {

enum class DayCategory { MON_THU = 0, FRI = 1, SAT_SUN = 2 };

inline const char* to_string(DayCategory c) {
    switch (c) {
        case DayCategory::MON_THU: return "MON_THU";
        case DayCategory::FRI: return "FRI";
        default: return "SAT_SUN";
    }
}

DayCategory day_category_from_string(const std::string& s);

// weekday: 0 = Monday .. 6 = Sunday
inline DayCategory day_category_of_weekday(int weekday) {
    if (weekday <= 3) return DayCategory::MON_THU;
    if (weekday == 4) return DayCategory::FRI;
    return DayCategory::SAT_SUN;
}

// --- simulation time steps (hours since a Monday 00:00) ---

inline int hour_of_day(std::int64_t step) { return static_cast<int>(step % 24); }

inline int weekday_of_step(std::int64_t step) { return static_cast<int>((step / 24) % 7); }

inline DayCategory day_category_of_step(std::int64_t step) {
    return day_category_of_weekday(weekday_of_step(step));
}

// --- civil date arithmetic (proleptic Gregorian, no leap seconds) ---

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

// Days between 1970-01-01 and y-m-d.
std::int64_t days_from_civil(int y, unsigned m, unsigned d);

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d);

// 0 = Monday .. 6 = Sunday. 1970-01-01 was a Thursday.
inline int weekday_from_days(std::int64_t days) {
    return static_cast<int>(((days % 7) + 10) % 7);
}

// Parse ISO-8601 timestamps: "2017-09-04T08:15:00Z", offset forms
// "...+08:00"/"...-05:00", and the space-separated variant without zone
// (treated as UTC). Fractional seconds are truncated. Returns unix seconds.
// Throws std::invalid_argument on malformed input.
std::int64_t parse_iso8601(const std::string& s);

// Format unix seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_utc(std::int64_t t);

// Local-day index and local hour for a UTC timestamp under a minute offset.
inline std::int64_t local_day_index(std::int64_t t_utc, int utc_offset_min) {
    return floor_div(t_utc + std::int64_t{60} * utc_offset_min, 86400);
}

inline int local_hour(std::int64_t t_utc, int utc_offset_min) {
    std::int64_t sec = t_utc + std::int64_t{60} * utc_offset_min;
    std::int64_t of_day = sec - 86400 * floor_div(sec, 86400);
    return static_cast<int>(of_day / 3600);
}

inline DayCategory local_day_category(std::int64_t t_utc, int utc_offset_min) {
    return day_category_of_weekday(weekday_from_days(local_day_index(t_utc, utc_offset_min)));
}

}  // namespace bsr
