#pragma once

// Geographic primitives: WGS84 points, great-circle distance, and the local
// planar projection used for clustering.

#include <cmath>

namespace bsr {

inline constexpr double kEarthRadiusM = 6371000.0;  // mean Earth radius
inline constexpr double kPi = 3.14159265358979323846;

struct GeoPoint {
    double lat = 0.0;  // degrees, [-90, 90]
    double lon = 0.0;  // degrees, [-180, 180]
};

inline bool geo_valid(const GeoPoint& p) {
    return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

// Haversine great-circle distance in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

struct Vec2 {
    double x = 0.0;  // meters east of reference
    double y = 0.0;  // meters north of reference
};

inline double dist2(const Vec2& a, const Vec2& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(const Vec2& a, const Vec2& b) { return std::sqrt(dist2(a, b)); }

// Equirectangular projection around a fixed reference point. Adequate for
// city-scale extents where clustering happens; distances are meters.
struct PlanarProjection {
    double ref_lat = 0.0;
    double ref_lon = 0.0;

    Vec2 to_xy(const GeoPoint& p) const {
        double k = kEarthRadiusM * (kPi / 180.0);
        return Vec2{(p.lon - ref_lon) * k * std::cos(deg2rad(ref_lat)),
                    (p.lat - ref_lat) * k};
    }

    GeoPoint to_geo(const Vec2& v) const {
        double k = kEarthRadiusM * (kPi / 180.0);
        double lat = ref_lat + v.y / k;
        double lon = ref_lon + v.x / (k * std::cos(deg2rad(ref_lat)));
        return GeoPoint{lat, lon};
    }
};

}  // namespace bsr
