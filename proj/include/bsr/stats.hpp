#pragma once

// Small statistics kit used by the report command and by statistical tests:
// least-squares fits, Spearman rank correlation with a t-approximation
// p-value, and chi-square tail probabilities.

#include <cstddef>
#include <span>
#include <vector>

namespace bsr {

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

// Simple linear regression y ~ a + b*x. Requires n >= 2 and non-constant x.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

struct SpearmanResult {
    double rho = 0.0;
    double p_two_sided = 1.0;  // t-approximation, n >= 3
    std::size_t n = 0;
};

SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double beta_i(double a, double b, double x);

// Upper-tail probability of a chi-square statistic with df degrees of freedom.
inline double chi2_sf(double stat, double df) { return gamma_q(df / 2.0, stat / 2.0); }

// Two-sided p-value for a Student-t statistic with df degrees of freedom.
double student_t_two_sided(double t, double df);

// Average ranks (1-based, ties averaged).
std::vector<double> ranks(std::span<const double> v);

}  // namespace bsr
