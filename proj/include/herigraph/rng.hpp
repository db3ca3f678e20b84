#pragma once

#include <cstdint>
#include <span>

namespace herigraph {

// ctr64 v1: a counter-based 64-bit generator.
//
//   key    = mix(seed ^ mix(stream ^ mix(substream)))
//   out(n) = mix(key + (n + 1) * 0x9E3779B97F4A7C15)
//
// where mix is the SplitMix64 finaliser. Every (seed, stream, substream)
// triple is an independent sequence that can be opened at random access,
// so per-post draws do not depend on generation order.
class CounterRng {
public:
    static constexpr std::uint64_t kVersion = 1;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer on [0, n); n > 0. Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }
    // Standard normal via Box-Muller (cosine branch only).
    double normal();
    // Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the U^(1/shape) boost.
    double gamma(double shape);
    // Symmetric Dirichlet(alpha) sample written into `out`.
    void dirichlet(double alpha, std::span<double> out);

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace herigraph
