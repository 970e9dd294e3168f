#include <doctest.h>

#include <algorithm>
#include <random>

#include "cpm/algorithms.hpp"

using namespace cpm;

namespace {

ComputableMemory with_items(const std::vector<std::uint64_t>& items, std::size_t w = 16) {
    ComputableMemory mem(Topology::line(items.size()), {w, 4, 0});
    for (std::size_t i = 0; i < items.size(); ++i) mem.poke(i, RegRef::nb(), items[i]);
    return mem;
}

std::vector<std::uint64_t> random_items(std::mt19937_64& rng, std::size_t n, std::uint64_t bound) {
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = rng() % bound;
    return v;
}

std::size_t inversions(const std::vector<std::uint64_t>& v, bool ascending) {
    std::size_t c = 0;
    for (std::size_t i = 1; i < v.size(); ++i) c += ascending ? v[i] < v[i - 1] : v[i - 1] < v[i];
    return c;
}

std::vector<std::int64_t> sorted_signed(std::vector<std::uint64_t> v, bool ascending) {
    std::sort(v.begin(), v.end());
    if (!ascending) std::reverse(v.begin(), v.end());
    return {v.begin(), v.end()};
}

// Sorted 0, 4, 8, ... with k items replaced by out-of-place values that the
// moving sort fixes one at a time.
std::vector<std::uint64_t> sparse_defects(std::size_t n, std::size_t k) {
    std::vector<std::uint64_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 4 * i;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t at = 16 + 64 * j;
        v[at] = j % 2 ? 1 : 8 * n + j;  // valley or peak
    }
    return v;
}

}  // namespace

TEST_CASE("count_disorder") {
    auto mem = with_items({1, 3, 2, 4});
    CHECK(count_disorder(mem, Order::ascending) == 1);
    CHECK(count_disorder(mem, Order::descending) == 2);
    auto sorted = with_items({1, 2, 2, 5});
    CHECK(count_disorder(sorted, Order::ascending) == 0);
    auto rev = with_items({9, 7, 5, 3, 1});
    CHECK(count_disorder(rev, Order::ascending) == 4);
    CHECK(count_disorder(rev, Order::descending) == 0);
    auto one = with_items({3});
    CHECK(count_disorder(one, Order::ascending) == 0);

    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t) {
        const auto v = random_items(rng, 2 + rng() % 100, 50);
        auto m = with_items(v);
        const auto before = m.control().ledger().macro_cycles;
        REQUIRE(count_disorder(m, Order::ascending) == inversions(v, true));
        REQUIRE(m.control().ledger().macro_cycles - before <= 4);
        REQUIRE(count_disorder(m, Order::descending) == inversions(v, false));
    }
}

TEST_CASE("classify_defects examples") {
    auto peak = with_items({1, 2, 9, 3, 4});
    auto s = classify_defects(peak);
    REQUIRE(s.defects.size() == 1);
    CHECK(s.defects[0].address == 2);
    CHECK(s.defects[0].kind == DefectKind::peak);
    CHECK(s.reliable);

    auto valley = with_items({5, 1, 6, 7});
    s = classify_defects(valley);
    REQUIRE(s.defects.size() == 1);
    CHECK(s.defects[0].address == 1);
    CHECK(s.defects[0].kind == DefectKind::valley);

    auto fault = with_items({1, 3, 2, 4});
    s = classify_defects(fault);
    REQUIRE(s.defects.size() == 1);
    CHECK(s.defects[0].address == 1);
    CHECK(s.defects[0].kind == DefectKind::fault);
    CHECK(to_string(DefectKind::fault) == "fault");

    // Inside the array interior a valley has a larger item on its left.
    auto inner = with_items({1, 2, 3, 4, 0, 5, 6, 7});
    s = classify_defects(inner);
    REQUIRE(s.defects.size() == 1);
    CHECK(s.defects[0].address == 4);
    CHECK(s.defects[0].kind == DefectKind::valley);

    auto edge_peak = with_items({1, 2, 3, 9, 4});
    s = classify_defects(edge_peak);
    REQUIRE(s.defects.size() == 1);
    CHECK(s.defects[0].address == 3);
    CHECK(s.defects[0].kind == DefectKind::peak);

    auto desc = with_items({9, 8, 1, 7, 6});
    s = classify_defects(desc, Order::descending);
    REQUIRE(s.defects.size() == 1);
    CHECK(s.defects[0].address == 2);
    CHECK(s.defects[0].kind == DefectKind::valley);
    CHECK(desc.snapshot(RegRef::nb()) == std::vector<std::uint64_t>{9, 8, 1, 7, 6});
}

TEST_CASE("classify_defects flags dense disorder") {
    auto dense = with_items({2, 1, 4, 3, 6, 5, 8, 7});
    CHECK_FALSE(classify_defects(dense).reliable);
    auto sorted = with_items({1, 2, 3});
    const auto s = classify_defects(sorted);
    CHECK(s.defects.empty());
    CHECK(s.reliable);
}

TEST_CASE("classified defects fix the array") {
    // Every isolated peak, valley or adjacent exchange: removing the flagged
    // item (or swapping the fault) must leave a sorted array.
    std::mt19937_64 rng(12);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 4 + rng() % 20;
        std::vector<std::uint64_t> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = 3 * i;
        const std::size_t a = rng() % n, b = rng() % n;
        if (t % 3 == 0) {
            if (a + 1 < n) std::swap(v[a], v[a + 1]);
        } else {
            const auto item = v[a];
            v.erase(v.begin() + a);
            v.insert(v.begin() + b, item);
        }
        auto mem = with_items(v);
        const auto s = classify_defects(mem);
        if (inversions(v, true) == 0) {
            REQUIRE(s.defects.empty());
            continue;
        }
        REQUIRE(s.defects.size() == 1);
        auto w = v;
        const auto& d = s.defects[0];
        if (d.kind == DefectKind::fault) std::swap(w[d.address], w[d.address + 1]);
        else w.erase(w.begin() + d.address);
        REQUIRE(std::is_sorted(w.begin(), w.end()));
    }
}

TEST_CASE("local_exchange_round") {
    auto mem = with_items({2, 1, 4, 3});
    local_exchange_round(mem, 0, Order::ascending);
    CHECK(mem.snapshot(RegRef::nb()) == std::vector<std::uint64_t>{1, 2, 3, 4});
    local_exchange_round(mem, 1, Order::ascending);
    CHECK(mem.snapshot(RegRef::nb()) == std::vector<std::uint64_t>{1, 2, 3, 4});

    auto odd = with_items({5, 4, 3, 2, 1});
    local_exchange_round(odd, 1, Order::ascending);
    CHECK(odd.snapshot(RegRef::nb()) == std::vector<std::uint64_t>{5, 3, 4, 1, 2});
    local_exchange_round(odd, 0, Order::descending);
    CHECK(odd.snapshot(RegRef::nb()) == std::vector<std::uint64_t>{5, 3, 4, 1, 2});

    const auto before = odd.control().ledger().macro_cycles;
    local_exchange_round(odd, 0, Order::ascending);
    CHECK(odd.control().ledger().macro_cycles - before <= 10);
}

TEST_CASE("odd-even transposition sorts in N rounds") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 1 + rng() % 256;
        const auto v = random_items(rng, n, t % 2 ? 8 : 60000);
        const bool asc = t % 3 != 0;
        auto mem = with_items(v);
        for (std::size_t r = 0; r < n; ++r) local_exchange_round(mem, r, asc ? Order::ascending : Order::descending);
        const auto got = mem.snapshot(RegRef::nb());
        REQUIRE(std::vector<std::int64_t>(got.begin(), got.end()) == sorted_signed(v, asc));
    }
}

TEST_CASE("global_moving_sort examples") {
    auto mem = with_items({1, 2, 9, 3, 4, 5});
    auto rep = global_moving_sort(mem);
    CHECK(rep.values == std::vector<std::int64_t>{1, 2, 3, 4, 5, 9});
    CHECK(rep.params.at("defects_fixed") == 1);
    CHECK(rep.params.at("fallback_rounds") == 0);
    CHECK(rep.ledger_delta.macro_cycles <= 4 * 7);

    auto sorted = with_items({1, 2, 3, 4});
    rep = global_moving_sort(sorted);
    CHECK(rep.params.at("defects_fixed") == 0);
    CHECK(rep.ledger_delta.macro_cycles <= 4);

    auto desc = with_items({9, 7, 1, 6, 5, 4});
    rep = global_moving_sort(desc, Order::descending);
    CHECK(rep.values == std::vector<std::int64_t>{9, 7, 6, 5, 4, 1});
    CHECK(rep.direction == "descending");
}

TEST_CASE("global_moving_sort cost per defect does not depend on N") {
    auto small = with_items(sparse_defects(1024, 8), 32);
    auto large = with_items(sparse_defects(4096, 8), 32);
    const auto a = global_moving_sort(small), b = global_moving_sort(large);
    CHECK(a.params.at("defects_fixed") == 8);
    CHECK(b.params.at("defects_fixed") == 8);
    CHECK(a.params.at("fallback_rounds") == 0);
    CHECK(a.ledger_delta.macro_cycles == b.ledger_delta.macro_cycles);
    CHECK(a.ledger_delta.macro_cycles <= 30 * 8);
    auto want = sparse_defects(4096, 8);
    CHECK(b.values == sorted_signed(want, true));
}

TEST_CASE("global_moving_sort sorts anything") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + rng() % 120;
        const auto v = random_items(rng, n, t % 2 ? 5 : 1000);
        const bool asc = t % 4 != 0;
        auto mem = with_items(v);
        const auto rep = global_moving_sort(mem, asc ? Order::ascending : Order::descending);
        REQUIRE(rep.values == sorted_signed(v, asc));
    }
}

TEST_CASE("hybrid_sort") {
    std::mt19937_64 rng(77);
    const auto v = random_items(rng, 1024, 1u << 15);
    auto mem = with_items(v);
    const auto rep = hybrid_sort(mem, 32);
    CHECK(rep.values == sorted_signed(v, rep.direction == "ascending"));
    CHECK(rep.params.at("M") == 32);
    CHECK(rep.phase("local").macro_cycles <= 10 * 32);

    // Nearly descending input is sorted descending.
    std::vector<std::uint64_t> down(200);
    for (std::size_t i = 0; i < down.size(); ++i) down[i] = 1000 - 5 * i;
    std::swap(down[50], down[51]);
    auto dm = with_items(down);
    const auto drep = hybrid_sort(dm, 4);
    CHECK(drep.direction == "descending");
    CHECK(drep.values == sorted_signed(down, false));

    auto one = with_items({7});
    const auto orep = hybrid_sort(one, 8);
    CHECK(orep.values == std::vector<std::int64_t>{7});
    CHECK(orep.ledger_delta.macro_cycles == 0);

    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 2 + rng() % 200;
        const auto w = random_items(rng, n, t % 2 ? 4 : 5000);
        auto m = with_items(w);
        const auto r = hybrid_sort(m, rng() % 12);
        REQUIRE(r.values == sorted_signed(w, r.direction == "ascending"));
        const bool asc_chosen = inversions(w, true) <= inversions(w, false);
        REQUIRE(r.direction == (asc_chosen ? "ascending" : "descending"));
    }
}
