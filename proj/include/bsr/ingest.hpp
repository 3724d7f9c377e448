#pragma once

// GPS ping ingestion and trip extraction.
//
// Input is a ping CSV (bike_id, timestamp, lat, lon). Rows that fail
// validation are skipped and reported with their line number; strict mode
// turns the first bad row into an exception. Trips come from strictly
// consecutive ping pairs of one bike that look like a ride rather than GPS
// jitter or a relocation: at least 180 s apart, at least 200 m apart, and no
// faster than 25 km/h. Both ends of each threshold are pinned by tests.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bsr/types.hpp"

namespace bsr {
namespace ingest {

struct ParseError {
    std::size_t line = 0;  // 1-based, header included in numbering
    std::string message;
};

struct ErrorReport {
    std::vector<ParseError> errors;
    std::size_t rows_total = 0;   // data rows seen (header excluded)
    std::size_t rows_kept = 0;    // rows that parsed and validated
    std::size_t duplicates = 0;   // same-bike same-timestamp rows dropped
};

struct ParsedPing {
    Ping ping;
    std::size_t line = 0;
};

struct ParseOptions {
    bool strict = false;     // throw on the first invalid row
    bool has_header = true;  // first line is a header and is skipped
};

// Parse a ping CSV stream. Invalid rows are recorded in the report (or throw
// in strict mode). Duplicate handling happens later, per bike.
std::vector<ParsedPing> parse_pings(std::istream& in, const ParseOptions& opts, ErrorReport& report);

std::vector<ParsedPing> parse_pings_file(const std::string& path, const ParseOptions& opts,
                                         ErrorReport& report);

struct BikeHistory {
    std::string bike_id;
    std::vector<Ping> pings;  // time-sorted, duplicate timestamps removed
};

// Group pings per bike, sort by (timestamp, input order), and drop rows that
// repeat an earlier timestamp of the same bike (first row wins). Dropped rows
// are appended to the report as errors and counted in report.duplicates.
// Bikes come back sorted by id so downstream output is deterministic.
std::vector<BikeHistory> group_histories(std::vector<ParsedPing> rows, ErrorReport& report);

// The trip filter on an already-measured ping pair. Exposed separately so the
// boundary semantics are testable without manufacturing coordinates:
// accept iff dt_s >= 180, dist_m >= 200, and speed <= 25 km/h, where the
// speed test is evaluated as dist_m * 3600 <= 25000 * dt_s to keep the
// boundary exact in floating point.
bool trip_filters_pass(std::int64_t dt_s, double dist_m);

inline constexpr std::int64_t kMinTripSeconds = 180;
inline constexpr double kMinTripMeters = 200.0;
inline constexpr double kMaxTripKmh = 25.0;

// Extract trips from consecutive ping pairs of each bike history.
std::vector<Trip> extract_trips(const std::vector<BikeHistory>& histories);

// --- usage statistics ---

struct IdleInterval {
    std::string bike_id;
    std::int64_t start = 0;
    std::int64_t end = 0;  // half-open [start, end)
};

struct UsageStats {
    // Parallel arrays sorted by bike_id.
    std::vector<std::string> bike_ids;
    std::vector<std::int64_t> trips_per_bike;
    std::vector<IdleInterval> idle_intervals;  // every maximal idle gap >= threshold
};

inline constexpr std::int64_t kIdleThresholdSeconds = 7 * 86400;

// A bike is idle over an interval iff no extracted trip of that bike starts
// or ends inside it. Reported intervals are the maximal gaps of at least
// seven days between consecutive trip events, clipped to the observation
// window [window_start, window_end). Bikes with no trips contribute the whole
// window. Throws if any trip event falls outside the window.
UsageStats usage_stats(const std::vector<BikeHistory>& histories,
                       std::int64_t window_start, std::int64_t window_end);

// --- CSV I/O ---

void write_pings_csv(std::ostream& out, const std::vector<Ping>& pings);
void write_trips_csv(std::ostream& out, const std::vector<Trip>& trips, bool with_stations);
std::vector<Trip> read_trips_csv(std::istream& in);
void write_error_report(std::ostream& out, const ErrorReport& report);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace ingest
}  // namespace bsr
