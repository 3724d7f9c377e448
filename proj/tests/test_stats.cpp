// Statistics kit against textbook values: exact lines, a small hand-computed
// regression, classic chi-square and t critical points, and rank behavior
// under ties.

#include <stdexcept>
#include <vector>

#include "bsr/stats.hpp"
#include "doctest.h"

using namespace bsr;

TEST_CASE("ols_fit") {
    SUBCASE("exact line") {
        std::vector<double> x = {0, 1, 2, 3, 4};
        std::vector<double> y = {1, 3, 5, 7, 9};
        OlsFit f = ols_fit(x, y);
        CHECK(f.slope == doctest::Approx(2.0));
        CHECK(f.intercept == doctest::Approx(1.0));
        CHECK(f.r2 == doctest::Approx(1.0));
        CHECK(f.n == 5);
    }

    SUBCASE("hand-computed fit") {
        // Sxy = 8, Sxx = 5, Syy = 13 -> slope 1.6, intercept 0.5, r2 64/65.
        std::vector<double> x = {1, 2, 3, 4};
        std::vector<double> y = {2, 4, 5, 7};
        OlsFit f = ols_fit(x, y);
        CHECK(f.slope == doctest::Approx(1.6));
        CHECK(f.intercept == doctest::Approx(0.5));
        CHECK(f.r2 == doctest::Approx(64.0 / 65.0));
    }

    SUBCASE("errors") {
        std::vector<double> one = {1.0}, also_one = {2.0};
        CHECK_THROWS_AS(ols_fit(one, also_one), std::invalid_argument);
        std::vector<double> cx = {2, 2, 2}, cy = {1, 2, 3};
        CHECK_THROWS_AS(ols_fit(cx, cy), std::invalid_argument);
        std::vector<double> a = {1, 2}, b = {1, 2, 3};
        CHECK_THROWS_AS(ols_fit(a, b), std::invalid_argument);
    }
}

TEST_CASE("ranks") {
    std::vector<double> v = {10.0, 20.0, 20.0, 30.0};
    std::vector<double> r = ranks(v);
    CHECK(r[0] == doctest::Approx(1.0));
    CHECK(r[1] == doctest::Approx(2.5));
    CHECK(r[2] == doctest::Approx(2.5));
    CHECK(r[3] == doctest::Approx(4.0));
}

TEST_CASE("spearman") {
    SUBCASE("perfect monotone") {
        std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        std::vector<double> up = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
        SpearmanResult r = spearman(x, up);
        CHECK(r.rho == doctest::Approx(1.0));
        CHECK(r.p_two_sided < 1e-6);

        std::vector<double> down(up.rbegin(), up.rend());
        SpearmanResult d = spearman(x, down);
        CHECK(d.rho == doctest::Approx(-1.0));
        CHECK(d.p_two_sided < 1e-6);
    }

    SUBCASE("independent data is insignificant") {
        std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8};
        std::vector<double> y = {3, 1, 4, 1, 5, 9, 2, 6};
        SpearmanResult r = spearman(x, y);
        CHECK(std::abs(r.rho) < 0.7);
        CHECK(r.p_two_sided > 0.05);
    }

    CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("distribution tails") {
    // gamma_p(1, x) = 1 - exp(-x)
    CHECK(gamma_p(1.0, 1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-10));
    CHECK(gamma_q(1.0, 1.0) == doctest::Approx(0.3678794411714423).epsilon(1e-10));
    CHECK(gamma_p(3.5, 0.0) == doctest::Approx(0.0));

    // Classic chi-square 95th percentiles.
    CHECK(chi2_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(chi2_sf(5.991464547107979, 2.0) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(chi2_sf(18.307038053275146, 10.0) == doctest::Approx(0.05).epsilon(1e-6));

    // I_x(1, 1) = x; I_x(2, 2) = x^2 (3 - 2x).
    CHECK(beta_i(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(beta_i(2.0, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(beta_i(2.0, 2.0, 0.25) == doctest::Approx(0.15625).epsilon(1e-8));

    // Two-sided t critical values at the 5% level.
    CHECK(student_t_two_sided(2.2281388519649385, 10.0) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(student_t_two_sided(2.0422724563012373, 30.0) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(student_t_two_sided(0.0, 5.0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(gamma_p(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(beta_i(1.0, 1.0, 1.5), std::invalid_argument);
}
