#pragma once

// Shared domain records passed between pipeline stages.

#include <cstdint>
#include <string>

#include "bsr/geo.hpp"

namespace bsr {

struct Ping {
    std::string bike_id;
    std::int64_t t = 0;  // unix seconds, UTC
    GeoPoint pos;
};

struct Trip {
    std::string bike_id;
    std::int64_t t_start = 0;
    std::int64_t t_end = 0;
    GeoPoint origin;
    GeoPoint dest;
    // Filled in by station clustering; -1 until assigned.
    std::int32_t origin_station = -1;
    std::int32_t dest_station = -1;
};

}  // namespace bsr
