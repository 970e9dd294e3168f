#include <doctest.h>

#include <random>

#include "cpm/comparable.hpp"

using namespace cpm;

namespace {

constexpr Predicate kAll[] = {Predicate::eq, Predicate::ne, Predicate::lt,
                              Predicate::gt, Predicate::le, Predicate::ge};

}  // namespace

TEST_CASE("loading a single-byte predicate") {
    ComparableMemory mem(3);
    for (std::size_t i = 0; i < 3; ++i) mem.exclusive_write(i, static_cast<std::uint8_t>(3 + 2 * i));
    mem.control().activate_all();
    mem.load_predicate(Predicate::lt, 6);
    CHECK(mem.storage_bits() == BitVector::from_indices(3, {0, 1}));
}

TEST_CASE("update code false leaves storage bits alone") {
    ComparableMemory mem(4);
    mem.control().activate_all();
    mem.load_predicate(Predicate::ge, 0);
    const BitVector before = mem.storage_bits();
    mem.compare_step({0xFF, 0, Predicate::eq, Dir::left, false, false});
    CHECK(mem.storage_bits() == before);
}

TEST_CASE("selecting the left neighbor routes bits upward by one") {
    ComparableMemory mem(5);
    const std::uint8_t v[] = {1, 0, 1, 1, 0};
    for (std::size_t i = 0; i < 5; ++i) mem.exclusive_write(i, v[i]);
    mem.control().activate_all();
    mem.load_predicate(Predicate::eq, 1);
    mem.compare_step({0xFF, 0, Predicate::eq, Dir::left, true, true});
    CHECK(mem.storage_bits() == BitVector::from_indices(5, {1, 3, 4}));
}

TEST_CASE("literal gating only lets matching PEs update") {
    ComparableMemory mem(3, UpdateGate::update_and_compare);
    for (std::size_t i = 0; i < 3; ++i) mem.exclusive_write(i, static_cast<std::uint8_t>(i));
    mem.control().activate_all();
    // NAND(cmp, 0) = 1 would land everywhere, but only PE 1 passes the gate.
    mem.compare_step({0xFF, 1, Predicate::eq, Dir::left, false, true});
    CHECK(mem.storage_bits() == BitVector::from_indices(3, {1}));
}

TEST_CASE("two-byte field examples") {
    ComparableMemory mem(6);
    const FieldLayout l{2, 0, 2};
    mem.load_field(l, {0x0100, 0x0102, 0x0200});
    CHECK(mem.field_predicate(l, Predicate::lt, 0x0102) == std::vector<bool>{true, false, false});
    CHECK(mem.field_predicate(l, Predicate::eq, 0x0200) == std::vector<bool>{false, false, true});
    CHECK(mem.field_predicate(l, Predicate::ge, 0x0102) == std::vector<bool>{false, true, true});
    const auto r = mem.select_records(l, Predicate::gt, 0x0100);
    CHECK(r.matched == std::vector<std::size_t>{2, 4});
}

TEST_CASE("layout validation") {
    ComparableMemory mem(10);
    CHECK_THROWS_AS(mem.field_predicate({4, 0, 2}, Predicate::lt, 1), ConfigError);
    CHECK_THROWS_AS(mem.field_predicate({5, 4, 2}, Predicate::lt, 1), ConfigError);
    CHECK_THROWS_AS(mem.histogram({5, 0, 1}, {3, 2}), ArgumentError);
}

TEST_CASE("all predicates agree with unsigned comparison on random records") {
    std::mt19937_64 rng(11);
    for (std::size_t width = 1; width <= 8; ++width) {
        const std::size_t record = width + 2;
        const std::size_t n = 300;
        ComparableMemory mem(n * record);
        const FieldLayout l{record, 1, width};
        const std::uint64_t mask = width == 8 ? ~0ull : (1ull << (8 * width)) - 1;
        std::vector<std::uint64_t> vals(n);
        for (auto& v : vals) {
            v = rng() & mask;
            // Shared high bytes exercise the ripple.
            if (rng() % 2) v = (v & ~0xFFull) | (rng() % 4);
        }
        mem.load_field(l, vals);
        for (int t = 0; t < 5; ++t) {
            const std::uint64_t pivot = t == 0 ? vals[0] : (rng() & mask);
            for (auto p : kAll) {
                const auto before = mem.control().ledger();
                const auto flags = mem.field_predicate(l, p, pivot);
                for (std::size_t r = 0; r < n; ++r) REQUIRE(flags[r] == apply(p, vals[r], pivot));
                REQUIRE((mem.control().ledger() - before).macro_cycles <= 4 * width);
            }
        }
    }
}

TEST_CASE("predicate cost does not depend on record count") {
    const FieldLayout l{4, 0, 4};
    std::vector<std::uint64_t> costs;
    for (std::size_t n : {64u, 256u}) {
        ComparableMemory mem(n * 4);
        const auto before = mem.control().ledger();
        mem.field_predicate(l, Predicate::le, 12345);
        costs.push_back((mem.control().ledger() - before).macro_cycles);
    }
    CHECK(costs[0] == costs[1]);
}

TEST_CASE("histogram") {
    ComparableMemory mem(5);
    const FieldLayout l{1, 0, 1};
    mem.load_field(l, {5, 12, 25, 28, 31});
    CHECK(mem.histogram(l, {10, 20, 30}) == std::vector<std::size_t>{1, 1, 2, 1});
    CHECK(mem.histogram(l, {}) == std::vector<std::size_t>{5});

    ComparableMemory same(4);
    same.load_field(l, {7, 7, 7, 7});
    CHECK(same.histogram(l, {7}) == std::vector<std::size_t>{0, 4});
}

TEST_CASE("histogram bins conserve the record count") {
    std::mt19937_64 rng(5);
    ComparableMemory mem(400 * 2);
    const FieldLayout l{2, 0, 2};
    std::vector<std::uint64_t> vals(400);
    for (auto& v : vals) v = rng() % 65536;
    mem.load_field(l, vals);
    const std::vector<std::uint64_t> limits{100, 5000, 20000, 40000, 65000};
    const auto bins = mem.histogram(l, limits);
    std::size_t total = 0;
    for (auto b : bins) total += b;
    CHECK(total == 400);
    std::vector<std::size_t> oracle(limits.size() + 1, 0);
    for (auto v : vals) {
        std::size_t k = 0;
        while (k < limits.size() && v >= limits[k]) ++k;
        ++oracle[k];
    }
    CHECK(bins == oracle);
}
