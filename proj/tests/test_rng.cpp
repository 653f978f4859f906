#include <doctest.h>

#include <cmath>
#include <vector>

#include "heatctrl/rng.hpp"

using namespace heatctrl;

TEST_SUITE_BEGIN("rng");

TEST_CASE("same seed gives identical streams") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("different seeds and streams decorrelate") {
    CounterRng a(42), b(43), c(42, 1);
    CHECK(a.next_u64() != b.next_u64());
    CounterRng a2(42);
    CHECK(a2.next_u64() != c.next_u64());
}

TEST_CASE("uniform01 stays in [0,1) and is roughly uniform") {
    CounterRng rng(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal moments") {
    CounterRng rng(11);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("uniform_int bounds and restore round-trip") {
    CounterRng rng(3);
    for (int i = 0; i < 1000; ++i) {
        CHECK(rng.uniform_int(17) < 17);
    }
    const auto key = rng.key();
    const auto counter = rng.counter();
    const double next = rng.uniform01();
    CounterRng restored;
    restored.restore(key, counter);
    CHECK(restored.uniform01() == next);
}

TEST_SUITE_END();
