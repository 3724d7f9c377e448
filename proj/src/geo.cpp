#include "bsr/geo.hpp"

namespace bsr {

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    double phi1 = deg2rad(a.lat);
    double phi2 = deg2rad(b.lat);
    double dphi = deg2rad(b.lat - a.lat);
    double dlam = deg2rad(b.lon - a.lon);

    double sp = std::sin(dphi / 2.0);
    double sl = std::sin(dlam / 2.0);
    double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    if (h > 1.0) h = 1.0;  // guard asin domain against rounding
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

}  // namespace bsr
