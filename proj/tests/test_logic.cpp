#include <doctest.h>

#include <random>

#include "cpm/errors.hpp"
#include "cpm/logic.hpp"

using cpm::BitVector;
using namespace cpm::logic;

namespace {

BitVector oracle_multiples(std::size_t carry, std::size_t width) {
    BitVector v(width);
    for (std::size_t a = 0; a < width; ++a)
        if (carry == 0 ? a == 0 : a % carry == 0) v.set(a);
    return v;
}

BitVector oracle_range(std::size_t start, std::size_t end, std::size_t carry, std::size_t width) {
    BitVector v(width);
    for (std::size_t a = start; a <= end && a < width; a += carry) {
        v.set(a);
        if (carry == 0) break;
    }
    return v;
}

}  // namespace

TEST_CASE("carry pattern marks multiples of the carry number") {
    CHECK(carry_pattern(1, 8) == BitVector(8, true));
    CHECK(carry_pattern(2, 8) == BitVector::from_indices(8, {0, 2, 4, 6}));
    CHECK(carry_pattern(3, 8) == BitVector::from_indices(8, {0, 3, 6}));
    CHECK(carry_pattern(0, 8) == BitVector::from_indices(8, {0}));
    for (std::size_t w = 1; w <= 512; w *= 2)
        for (std::size_t c = 0; c < w; ++c) REQUIRE(carry_pattern(c, w) == oracle_multiples(c, w));
}

TEST_CASE("carry pattern rejects bad widths and carries") {
    CHECK_THROWS_AS(carry_pattern(1, 6), cpm::ConfigError);
    CHECK_THROWS_AS(carry_pattern(8, 8), cpm::ConfigError);
}

TEST_CASE("carry pattern low half is the narrower pattern") {
    for (std::size_t w = 2; w <= 256; w *= 2)
        for (std::size_t c = 0; c < w; ++c) {
            const BitVector wide = carry_pattern(c, 2 * w);
            const BitVector narrow = carry_pattern(c, w);
            for (std::size_t a = 0; a < w; ++a) REQUIRE(wide.test(a) == narrow.test(a));
        }
}

TEST_CASE("parallel shifter") {
    CHECK(parallel_shift(BitVector::from_indices(8, {0, 2, 4, 6}), 3) ==
          BitVector::from_indices(8, {3, 5, 7}));
    const BitVector v = BitVector::from_indices(8, {1, 4});
    CHECK(parallel_shift(v, 0) == v);
    CHECK(parallel_shift(BitVector::from_indices(8, {7}), 1) == BitVector(8));
    CHECK_THROWS_AS(parallel_shift(v, 8), cpm::ConfigError);

    std::mt19937_64 rng(7);
    for (int t = 0; t < 2000; ++t) {
        BitVector in(64);
        for (std::size_t i = 0; i < 64; ++i) in.set(i, rng() & 1);
        const std::size_t s1 = rng() % 64, s2 = rng() % (64 - s1);
        REQUIRE(parallel_shift(parallel_shift(in, s1), s2) == parallel_shift(in, s1 + s2));
    }
}

TEST_CASE("all-line decoder matches a <= end") {
    CHECK(all_line_decode(5, 8) == BitVector::from_indices(8, {0, 1, 2, 3, 4, 5}));
    CHECK(all_line_decode(0, 8) == BitVector::from_indices(8, {0}));
    CHECK(all_line_decode(7, 8) == BitVector(8, true));
    CHECK_THROWS_AS(all_line_decode(8, 8), cpm::ConfigError);
    for (std::size_t w = 2; w <= 1024; w *= 2)
        for (std::size_t e = 0; e < w; ++e) {
            const BitVector f = all_line_decode(e, w);
            for (std::size_t a = 0; a < w; ++a) REQUIRE(f.test(a) == (a <= e));
        }
}

TEST_CASE("general decoder examples") {
    CHECK(general_decode({2, 7, 3, 8}) == BitVector::from_indices(8, {2, 5}));
    CHECK(general_decode({0, 7, 1, 8}) == BitVector(8, true));
    CHECK(general_decode({6, 3, 1, 8}) == BitVector(8));
    for (std::size_t k = 0; k < 8; ++k)
        for (std::size_t c = 0; c < 8; ++c)
            CHECK(general_decode({k, k, c, 8}) == BitVector::from_indices(8, {k}));
    CHECK_THROWS_AS(general_decode({8, 2, 1, 8}), cpm::ConfigError);
}

TEST_CASE("general decoder and unit-carry path agree with the set oracle at width 64") {
    const std::size_t w = 64;
    for (std::size_t s = 0; s < w; ++s)
        for (std::size_t e = 0; e < w; ++e) {
            for (std::size_t c = 0; c < w; ++c)
                REQUIRE(general_decode({s, e, c, w}) == oracle_range(s, e, c, w));
            REQUIRE(unit_carry_decode(s, e, w) == general_decode({s, e, 1, w}));
        }
}
