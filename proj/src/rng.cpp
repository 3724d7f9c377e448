#include "bsr/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace bsr {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    // Reject the tail that would bias the modulus.
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v > limit);
    return v % n;
}

std::int64_t poisson(Rng& rng, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("poisson: lambda must be >= 0");
    std::int64_t total = 0;
    // Split large rates; Poisson(a+b) = Poisson(a) + Poisson(b).
    while (lambda > 500.0) {
        total += poisson(rng, 500.0);
        lambda -= 500.0;
    }
    if (lambda == 0.0) return total;
    double limit = std::exp(-lambda);
    double prod = 1.0;
    std::int64_t k = -1;
    do {
        prod *= uniform_double(rng);
        ++k;
    } while (prod > limit);
    return total + k;
}

std::size_t categorical(Rng& rng, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("categorical: negative weight");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("categorical: weights sum to zero");
    double u = uniform_double(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    // Rounding can push u past the last accumulator; return the last positive weight.
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0.0) return i;
    }
    return weights.size() - 1;
}

}  // namespace bsr
