#pragma once

// Deterministic random sampling. The engine is std::mt19937_64 (bit-exact
// across platforms); the distributions are implemented here because the
// standard library's are implementation-defined and would break the
// byte-identical-output guarantees.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bsr {

using Rng = std::mt19937_64;

// splitmix64 finalizer, used to derive independent seed streams.
std::uint64_t mix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
    return mix64(base ^ mix64(a + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), n > 0. Rejection sampling, unbiased.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

// Poisson(lambda) by Knuth's product-of-uniforms method, chunked so that
// exp(-lambda) never underflows. Exact for any lambda >= 0.
std::int64_t poisson(Rng& rng, double lambda);

// Draw an index with probability proportional to weights[i]. Weights must be
// non-negative with a positive sum.
std::size_t categorical(Rng& rng, std::span<const double> weights);

}  // namespace bsr
