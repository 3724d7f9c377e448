#include "bsr/timeutil.hpp"

#include <charconv>
#include <stdexcept>

namespace bsr {

DayCategory day_category_from_string(const std::string& s) {
    if (s == "MON_THU") return DayCategory::MON_THU;
    if (s == "FRI") return DayCategory::FRI;
    if (s == "SAT_SUN") return DayCategory::SAT_SUN;
    throw std::invalid_argument("unknown day category: " + s);
}

// Algorithms from Howard Hinnant's chrono date notes.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yr + (m <= 2));
}

namespace {

int parse_fixed_uint(const std::string& s, size_t pos, size_t len) {
    if (pos + len > s.size()) throw std::invalid_argument("timestamp too short: " + s);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc{} || p != s.data() + pos + len)
        throw std::invalid_argument("bad number in timestamp: " + s);
    return v;
}

}  // namespace

std::int64_t parse_iso8601(const std::string& s) {
    // YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+hh:mm|-hh:mm]
    if (s.size() < 19) throw std::invalid_argument("timestamp too short: " + s);
    int year = parse_fixed_uint(s, 0, 4);
    int mon = parse_fixed_uint(s, 5, 2);
    int day = parse_fixed_uint(s, 8, 2);
    int hh = parse_fixed_uint(s, 11, 2);
    int mi = parse_fixed_uint(s, 14, 2);
    int ss = parse_fixed_uint(s, 17, 2);
    if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':')
        throw std::invalid_argument("bad timestamp separators: " + s);
    if (mon < 1 || mon > 12 || day < 1 || day > 31 || hh > 23 || mi > 59 || ss > 60)
        throw std::invalid_argument("timestamp field out of range: " + s);

    size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }

    std::int64_t offset_sec = 0;
    if (pos < s.size()) {
        char c = s[pos];
        if (c == 'Z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            int oh = parse_fixed_uint(s, pos + 1, 2);
            if (pos + 3 >= s.size() || s[pos + 3] != ':')
                throw std::invalid_argument("bad zone offset: " + s);
            int om = parse_fixed_uint(s, pos + 4, 2);
            offset_sec = std::int64_t{3600} * oh + 60 * om;
            if (c == '-') offset_sec = -offset_sec;
            pos += 6;
        }
    }
    if (pos != s.size()) throw std::invalid_argument("trailing characters in timestamp: " + s);

    std::int64_t days = days_from_civil(year, static_cast<unsigned>(mon), static_cast<unsigned>(day));
    std::int64_t t = days * 86400 + hh * 3600 + mi * 60 + ss;
    return t - offset_sec;  // offset is local-ahead-of-UTC
}

std::string format_iso8601_utc(std::int64_t t) {
    std::int64_t days = floor_div(t, 86400);
    std::int64_t of_day = t - days * 86400;
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                  static_cast<long long>(of_day / 3600),
                  static_cast<long long>((of_day / 60) % 60),
                  static_cast<long long>(of_day % 60));
    return std::string(buf);
}

}  // namespace bsr
