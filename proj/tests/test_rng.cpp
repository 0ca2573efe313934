#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sderk/rng.hpp"

using sderk::RngStream;

TEST_CASE("identical seeds reproduce identical draws") {
    auto a = RngStream::from_seed(1234);
    auto b = RngStream::from_seed(1234);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    auto a = RngStream::from_seed(1);
    auto b = RngStream::from_seed(2);
    int equal = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    REQUIRE(equal == 0);
}

TEST_CASE("child derivation is pure and does not advance the parent") {
    auto parent = RngStream::from_seed(7);
    auto c1 = parent.child(3);
    const auto first = parent.next_u64();
    auto parent2 = RngStream::from_seed(7);
    auto c2 = parent2.child(3);
    REQUIRE(c1.key() == c2.key());
    REQUIRE(parent2.next_u64() == first);
    REQUIRE(parent.child(0).key() != parent.child(1).key());
}

TEST_CASE("uniforms live in (0, 1]") {
    auto s = RngStream::from_seed(99);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next_uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }
}

TEST_CASE("gaussian draws match the standard normal law") {
    auto s = RngStream::from_seed(2024);
    const std::size_t n = 200000;
    long double sum = 0.0L, sum2 = 0.0L, sum4 = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = s.next_gaussian();
        sum += z;
        sum2 += z * z;
        sum4 += z * z * z * z;
    }
    const double mean = static_cast<double>(sum / n);
    const double var = static_cast<double>(sum2 / n) - mean * mean;
    const double fourth = static_cast<double>(sum4 / n);
    // 5 sigma bounds on the moment estimators
    REQUIRE(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
    REQUIRE(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / static_cast<double>(n)));
    REQUIRE(std::abs(fourth - 3.0) < 5.0 * std::sqrt(96.0 / static_cast<double>(n)));
}

TEST_CASE("rademacher draws are unit signs with mean near zero") {
    auto s = RngStream::from_seed(31337);
    const std::size_t n = 100000;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = s.next_sign();
        REQUIRE(v * v == 1.0);
        sum += v;
    }
    REQUIRE(std::abs(static_cast<double>(sum / n)) < 4.0 / std::sqrt(static_cast<double>(n)));
}
