// Geographic primitives against closed-form geodesy: one degree of arc on
// the sphere is exactly R * pi / 180 meters, and the projection must agree
// with the haversine distance at city scale.

#include "bsr/geo.hpp"
#include "doctest.h"

using namespace bsr;

TEST_CASE("haversine distance") {
    SUBCASE("coincident points") {
        GeoPoint p{40.44, -79.95};
        CHECK(haversine_m(p, p) == 0.0);
    }

    SUBCASE("one degree of longitude on the equator") {
        // R * pi / 180 with R = 6,371,000 m
        double expected = kEarthRadiusM * kPi / 180.0;
        CHECK(haversine_m({0.0, 0.0}, {0.0, 1.0}) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(expected == doctest::Approx(111194.92664455873).epsilon(1e-12));
    }

    SUBCASE("one degree of latitude anywhere") {
        double expected = kEarthRadiusM * kPi / 180.0;
        CHECK(haversine_m({10.0, 25.0}, {11.0, 25.0}) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(haversine_m({-45.0, 120.0}, {-44.0, 120.0}) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("antipodal points give half the circumference") {
        double half = kEarthRadiusM * kPi;
        CHECK(haversine_m({0.0, 0.0}, {0.0, 180.0}) == doctest::Approx(half).epsilon(1e-12));
        CHECK(haversine_m({90.0, 0.0}, {-90.0, 0.0}) == doctest::Approx(half).epsilon(1e-12));
    }

    SUBCASE("symmetry") {
        GeoPoint a{40.44, -79.95}, b{40.45, -79.91};
        CHECK(haversine_m(a, b) == haversine_m(b, a));
        CHECK(haversine_m(a, b) > 0.0);
    }
}

TEST_CASE("geo_valid bounds") {
    CHECK(geo_valid({0.0, 0.0}));
    CHECK(geo_valid({90.0, 180.0}));
    CHECK(geo_valid({-90.0, -180.0}));
    CHECK_FALSE(geo_valid({90.1, 0.0}));
    CHECK_FALSE(geo_valid({0.0, -180.5}));
}

TEST_CASE("planar projection") {
    PlanarProjection proj{40.44, -79.95};

    SUBCASE("reference maps to the origin") {
        Vec2 v = proj.to_xy({40.44, -79.95});
        CHECK(v.x == doctest::Approx(0.0));
        CHECK(v.y == doctest::Approx(0.0));
    }

    SUBCASE("round trip") {
        GeoPoint p{40.4512, -79.9321};
        GeoPoint q = proj.to_geo(proj.to_xy(p));
        CHECK(q.lat == doctest::Approx(p.lat).epsilon(1e-12));
        CHECK(q.lon == doctest::Approx(p.lon).epsilon(1e-12));
    }

    SUBCASE("agrees with haversine at city scale") {
        GeoPoint a{40.44, -79.95}, b{40.46, -79.92};
        double planar = dist(proj.to_xy(a), proj.to_xy(b));
        double sphere = haversine_m(a, b);
        CHECK(planar == doctest::Approx(sphere).epsilon(1e-3));
    }

    SUBCASE("one kilometer north is one kilometer in y") {
        Vec2 v = proj.to_xy(proj.to_geo({0.0, 1000.0}));
        CHECK(v.x == doctest::Approx(0.0));
        CHECK(v.y == doctest::Approx(1000.0).epsilon(1e-9));
    }
}
