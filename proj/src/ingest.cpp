#include "bsr/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bsr/timeutil.hpp"

namespace bsr {
namespace ingest {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && *b == ' ') ++b;
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && p == e;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::vector<ParsedPing> parse_pings(std::istream& in, const ParseOptions& opts, ErrorReport& report) {
    std::vector<ParsedPing> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = opts.has_header;

    auto fail = [&](std::size_t ln, const std::string& msg) {
        if (opts.strict) throw std::runtime_error("line " + std::to_string(ln) + ": " + msg);
        report.errors.push_back({ln, msg});
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        if (line.empty() || line == "\r") continue;
        ++report.rows_total;

        auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            fail(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
            continue;
        }
        Ping p;
        p.bike_id = fields[0];
        if (p.bike_id.empty()) {
            fail(line_no, "empty bike_id");
            continue;
        }
        try {
            p.t = parse_iso8601(fields[1]);
        } catch (const std::exception& e) {
            fail(line_no, e.what());
            continue;
        }
        if (!parse_double(fields[2], p.pos.lat) || !parse_double(fields[3], p.pos.lon)) {
            fail(line_no, "unparseable coordinate");
            continue;
        }
        if (!geo_valid(p.pos)) {
            fail(line_no, "coordinate out of range: lat=" + fields[2] + " lon=" + fields[3]);
            continue;
        }
        ++report.rows_kept;
        rows.push_back({std::move(p), line_no});
    }
    return rows;
}

std::vector<ParsedPing> parse_pings_file(const std::string& path, const ParseOptions& opts,
                                         ErrorReport& report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ping file: " + path);
    return parse_pings(in, opts, report);
}

std::vector<BikeHistory> group_histories(std::vector<ParsedPing> rows, ErrorReport& report) {
    std::map<std::string, std::vector<std::size_t>> by_bike;  // ordered -> deterministic output
    for (std::size_t i = 0; i < rows.size(); ++i) by_bike[rows[i].ping.bike_id].push_back(i);

    std::vector<BikeHistory> out;
    out.reserve(by_bike.size());
    for (auto& [bike, idxs] : by_bike) {
        // Stable by construction: sort on timestamp, file order breaks ties.
        std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
            if (rows[a].ping.t != rows[b].ping.t) return rows[a].ping.t < rows[b].ping.t;
            return a < b;
        });
        BikeHistory h;
        h.bike_id = bike;
        for (std::size_t k = 0; k < idxs.size(); ++k) {
            const ParsedPing& r = rows[idxs[k]];
            if (!h.pings.empty() && h.pings.back().t == r.ping.t) {
                ++report.duplicates;
                report.errors.push_back(
                    {r.line, "duplicate timestamp for bike " + bike + ", row dropped"});
                continue;
            }
            h.pings.push_back(r.ping);
        }
        out.push_back(std::move(h));
    }
    return out;
}

bool trip_filters_pass(std::int64_t dt_s, double dist_m) {
    if (dt_s < kMinTripSeconds) return false;
    if (dist_m < kMinTripMeters) return false;
    // speed <= 25 km/h, kept as an integer-coefficient comparison so the
    // boundary is exact: dist/1000 / (dt/3600) <= 25.
    return dist_m * 3600.0 <= kMaxTripKmh * 1000.0 * static_cast<double>(dt_s);
}

std::vector<Trip> extract_trips(const std::vector<BikeHistory>& histories) {
    std::vector<Trip> trips;
    for (const auto& h : histories) {
        for (std::size_t i = 0; i + 1 < h.pings.size(); ++i) {
            const Ping& a = h.pings[i];
            const Ping& b = h.pings[i + 1];
            std::int64_t dt = b.t - a.t;
            double d = haversine_m(a.pos, b.pos);
            if (!trip_filters_pass(dt, d)) continue;
            Trip t;
            t.bike_id = h.bike_id;
            t.t_start = a.t;
            t.t_end = b.t;
            t.origin = a.pos;
            t.dest = b.pos;
            trips.push_back(std::move(t));
        }
    }
    return trips;
}

UsageStats usage_stats(const std::vector<BikeHistory>& histories,
                       std::int64_t window_start, std::int64_t window_end) {
    if (window_end <= window_start)
        throw std::invalid_argument("usage_stats: empty observation window");

    std::vector<Trip> trips = extract_trips(histories);

    std::map<std::string, std::vector<std::int64_t>> events;
    for (const auto& h : histories) events[h.bike_id];  // every bike appears
    for (const auto& t : trips) {
        if (t.t_start < window_start || t.t_end >= window_end)
            throw std::invalid_argument("usage_stats: trip outside observation window for bike " +
                                        t.bike_id);
        events[t.bike_id].push_back(t.t_start);
        events[t.bike_id].push_back(t.t_end);
    }

    UsageStats stats;
    for (auto& [bike, ev] : events) {
        std::sort(ev.begin(), ev.end());
        stats.bike_ids.push_back(bike);
        stats.trips_per_bike.push_back(static_cast<std::int64_t>(ev.size() / 2));

        // Gaps between consecutive trip events, window edges included.
        std::int64_t prev = window_start;
        auto consider = [&](std::int64_t from, std::int64_t to) {
            if (to - from >= kIdleThresholdSeconds)
                stats.idle_intervals.push_back({bike, from, to});
        };
        for (std::int64_t e : ev) {
            consider(prev, e);
            prev = e;
        }
        consider(prev, window_end);
    }
    return stats;
}

void write_pings_csv(std::ostream& out, const std::vector<Ping>& pings) {
    out << "bike_id,timestamp,lat,lon\n";
    for (const auto& p : pings) {
        out << p.bike_id << ',' << format_iso8601_utc(p.t) << ',' << format_double(p.pos.lat)
            << ',' << format_double(p.pos.lon) << '\n';
    }
}

void write_trips_csv(std::ostream& out, const std::vector<Trip>& trips, bool with_stations) {
    out << "bike_id,t_start,t_end,origin_lat,origin_lon,dest_lat,dest_lon";
    if (with_stations) out << ",origin_station,dest_station";
    out << '\n';
    for (const auto& t : trips) {
        out << t.bike_id << ',' << format_iso8601_utc(t.t_start) << ',' << format_iso8601_utc(t.t_end)
            << ',' << format_double(t.origin.lat) << ',' << format_double(t.origin.lon) << ','
            << format_double(t.dest.lat) << ',' << format_double(t.dest.lon);
        if (with_stations) out << ',' << t.origin_station << ',' << t.dest_station;
        out << '\n';
    }
}

std::vector<Trip> read_trips_csv(std::istream& in) {
    std::vector<Trip> trips;
    std::string line;
    if (!std::getline(in, line)) return trips;
    auto header = split_csv_line(line);
    bool with_stations = header.size() >= 9;
    if (header.size() != 7 && header.size() != 9)
        throw std::runtime_error("trips CSV: expected 7 or 9 columns, got " +
                                 std::to_string(header.size()));
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw std::runtime_error("trips CSV line " + std::to_string(line_no) +
                                     ": wrong field count");
        Trip t;
        t.bike_id = f[0];
        t.t_start = parse_iso8601(f[1]);
        t.t_end = parse_iso8601(f[2]);
        bool ok = parse_double(f[3], t.origin.lat) && parse_double(f[4], t.origin.lon) &&
                  parse_double(f[5], t.dest.lat) && parse_double(f[6], t.dest.lon);
        if (with_stations) {
            double os = 0, ds = 0;
            ok = ok && parse_double(f[7], os) && parse_double(f[8], ds);
            t.origin_station = static_cast<std::int32_t>(os);
            t.dest_station = static_cast<std::int32_t>(ds);
        }
        if (!ok)
            throw std::runtime_error("trips CSV line " + std::to_string(line_no) +
                                     ": unparseable number");
        trips.push_back(std::move(t));
    }
    return trips;
}

void write_error_report(std::ostream& out, const ErrorReport& report) {
    out << "rows_total=" << report.rows_total << " rows_kept=" << report.rows_kept
        << " duplicates=" << report.duplicates << " errors=" << report.errors.size() << '\n';
    for (const auto& e : report.errors) out << "line " << e.line << ": " << e.message << '\n';
}

}  // namespace ingest
}  // namespace bsr
