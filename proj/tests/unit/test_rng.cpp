#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "herigraph/rng.hpp"

using namespace herigraph;

TEST_SUITE("rng") {
    TEST_CASE("mix is the SplitMix64 finaliser") {
        // First output of SplitMix64 seeded with 0.
        CHECK(CounterRng::mix(0x9E3779B97F4A7C15ULL) == 0xe220a8397b1dcdafULL);
        CHECK(CounterRng::mix(0) == 0);
    }

    TEST_CASE("pinned outputs of the versioned stream") {
        CounterRng rng(42, 7, 3);
        CHECK(rng.next_u64() == 0xf1ab54dabe8e3b4eULL);
        CHECK(rng.next_u64() == 0x6bad758671e7124dULL);
        CHECK(rng.next_u64() == 0xa285e925fbb5307aULL);
        CHECK(CounterRng::kVersion == 1);
    }

    TEST_CASE("streams and substreams are independent and reproducible") {
        CounterRng a(1, 2, 3), b(1, 2, 3), c(1, 2, 4), d(1, 3, 3), e(2, 2, 3);
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        std::set<std::uint64_t> firsts{x, c.next_u64(), d.next_u64(), e.next_u64()};
        CHECK(firsts.size() == 4);
    }

    TEST_CASE("uniform and below stay in range") {
        CounterRng rng(5, 1);
        std::vector<int> hist(7, 0);
        for (int i = 0; i < 70000; ++i) {
            const double u = rng.uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            const auto k = rng.below(7);
            REQUIRE(k < 7);
            ++hist[k];
        }
        for (int h : hist) CHECK(std::abs(h - 10000) < 500);
        CHECK(rng.below(1) == 0);
    }

    TEST_CASE("normal and gamma moments") {
        CounterRng rng(9, 1);
        double s = 0, s2 = 0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double x = rng.normal();
            s += x;
            s2 += x * x;
        }
        CHECK(std::abs(s / n) < 0.01);
        CHECK(std::abs(s2 / n - 1.0) < 0.02);

        for (double shape : {0.3, 1.0, 2.5}) {
            double m = 0;
            for (int i = 0; i < n; ++i) {
                const double g = rng.gamma(shape);
                REQUIRE(g >= 0.0);
                m += g;
            }
            CHECK(std::abs(m / n - shape) < 0.02 * std::max(1.0, shape));
        }
    }

    TEST_CASE("dirichlet draws are simplexes") {
        CounterRng rng(11, 1);
        for (int t = 0; t < 200; ++t) {
            std::vector<double> v(365);
            rng.dirichlet(0.3, v);
            double sum = 0;
            for (double x : v) {
                REQUIRE(x >= 0.0);
                sum += x;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}
