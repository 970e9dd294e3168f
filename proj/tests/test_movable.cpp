#include <doctest.h>

#include <random>

#include "cpm/movable.hpp"

using namespace cpm;
using Words = std::vector<std::uint64_t>;

namespace {

// Serial reference: a list of (id, contents) in layout order.
struct FlatModel {
    std::vector<std::pair<std::size_t, Words>> objects;
};

Words contents(MovableMemory& mem, std::size_t n) {
    Words out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(mem.array().peek(i).addr_reg);
    return out;
}

}  // namespace

TEST_CASE("block shift copies the neighbor's old value") {
    MovableMemory mem(5);
    for (std::size_t i = 0; i < 5; ++i) mem.array().poke(i).addr_reg = 'a' + i;
    mem.shift_block(1, 4, ShiftDir::right);
    CHECK(contents(mem, 5) == Words{'a', 'a', 'b', 'c', 'd'});
    CHECK(mem.control().ledger().macro_cycles == 2);

    MovableMemory one(4);
    for (std::size_t i = 0; i < 4; ++i) one.array().poke(i).addr_reg = 10 + i;
    one.shift_block(1, 1, ShiftDir::left);
    CHECK(contents(one, 4) == Words{10, 12, 12, 13});
    CHECK_THROWS_AS(one.shift_block(2, 4, ShiftDir::left), AddressError);
}

TEST_CASE("right then left shift restores interior cells") {
    MovableMemory mem(8);
    for (std::size_t i = 0; i < 8; ++i) mem.array().poke(i).addr_reg = i * 3 + 1;
    const Words before = contents(mem, 8);
    mem.shift_block(1, 7, ShiftDir::right);
    mem.shift_block(0, 6, ShiftDir::left);
    const Words after = contents(mem, 8);
    for (std::size_t i = 0; i < 7; ++i) CHECK(after[i] == before[i]);
}

TEST_CASE("insert opens a gap and shifts later objects") {
    MovableMemory mem(8);
    const auto a = mem.create({1, 2});
    const auto b = mem.create({9});
    const auto before = mem.control().ledger();
    mem.insert(a, 1, {7});
    CHECK(mem.object(a) == Words{1, 7, 2});
    CHECK(mem.object(b) == Words{9});
    CHECK(mem.start_of(b) == 3);
    CHECK((mem.control().ledger() - before).macro_cycles == 2);
}

TEST_CASE("zero-length delete and resize") {
    MovableMemory mem(16);
    const auto a = mem.create({1, 2});
    const auto b = mem.create({9});
    auto before = mem.control().ledger();
    mem.erase(a, 0, 0);
    CHECK((mem.control().ledger() - before).macro_cycles == 0);
    before = mem.control().ledger();
    mem.resize(a, 5);
    CHECK((mem.control().ledger() - before).macro_cycles == 6);
    CHECK(mem.object(a) == Words{1, 2, 0, 0, 0});
    CHECK(mem.object(b) == Words{9});
    CHECK(mem.start_of(b) == 5);
    mem.resize(a, 1);
    CHECK(mem.object(a) == Words{1});
    CHECK(mem.object(b) == Words{9});
}

TEST_CASE("object manager errors") {
    MovableMemory mem(4);
    const auto a = mem.create({1, 2, 3});
    CHECK_THROWS_AS(mem.insert(a, 0, {4, 5}), AllocationError);
    CHECK_THROWS_AS(mem.erase(42, 0, 1), LookupError);
    CHECK_THROWS_AS(mem.create({1, 2}), AllocationError);
}

TEST_CASE("gap cost does not depend on the suffix length") {
    for (std::size_t tail : {1u, 10u, 200u}) {
        MovableMemory mem(512);
        const auto a = mem.create({1, 2, 3});
        mem.create(Words(tail, 5));
        auto before = mem.control().ledger();
        mem.insert(a, 2, {8, 8, 8});
        CHECK((mem.control().ledger() - before).macro_cycles == 6);
        before = mem.control().ledger();
        mem.erase(a, 0, 4);
        CHECK((mem.control().ledger() - before).macro_cycles == 8);
    }
}

TEST_CASE("refresh is a 4-cycle round trip") {
    MovableMemory mem(8);
    mem.refresh();
    CHECK(mem.control().ledger().macro_cycles == 4);
    const auto a = mem.create({4, 5, 6, 7, 8});
    mem.refresh();
    CHECK(mem.object(a) == Words{4, 5, 6, 7, 8});
    CHECK(mem.control().ledger().macro_cycles == 8);

    // A full array has no spare cell, so only the interior survives.
    MovableMemory full(4);
    const auto f = full.create({1, 2, 3, 4});
    full.refresh();
    const Words after = full.object(f);
    CHECK(Words(after.begin(), after.end() - 1) == Words{1, 2, 3});
}

TEST_CASE("random object operations match a flat-buffer model") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        MovableMemory mem(256);
        FlatModel model;
        std::uint64_t next_value = 1;
        auto fresh = [&](std::size_t n) {
            Words w;
            for (std::size_t i = 0; i < n; ++i) w.push_back(next_value++);
            return w;
        };
        for (int op = 0; op < 60; ++op) {
            const std::size_t used = mem.used();
            const int kind = static_cast<int>(rng() % 6);
            if (model.objects.empty() || kind == 0) {
                const Words w = fresh(rng() % 5);
                if (used + w.size() > mem.size()) continue;
                const auto id = mem.create(w);
                model.objects.push_back({id, w});
                continue;
            }
            auto& [id, w] = model.objects[rng() % model.objects.size()];
            if (kind == 1) {
                const Words d = fresh(1 + rng() % 4);
                if (used + d.size() > mem.size()) continue;
                const std::size_t off = rng() % (w.size() + 1);
                mem.insert(id, off, d);
                w.insert(w.begin() + static_cast<std::ptrdiff_t>(off), d.begin(), d.end());
            } else if (kind == 2 && !w.empty()) {
                const std::size_t off = rng() % w.size();
                const std::size_t cnt = rng() % (w.size() - off + 1);
                mem.erase(id, off, cnt);
                w.erase(w.begin() + static_cast<std::ptrdiff_t>(off),
                        w.begin() + static_cast<std::ptrdiff_t>(off + cnt));
            } else if (kind == 3) {
                const std::size_t len = rng() % 8;
                if (len > w.size() && used + (len - w.size()) > mem.size()) continue;
                mem.resize(id, len);
                w.resize(len, 0);
            } else if (kind == 4) {
                const std::size_t to = rng() % model.objects.size();
                const std::size_t the_id = id;
                mem.move_object(the_id, to);
                std::size_t from = 0;
                while (model.objects[from].first != the_id) ++from;
                auto entry = model.objects[from];
                model.objects.erase(model.objects.begin() + static_cast<std::ptrdiff_t>(from));
                model.objects.insert(model.objects.begin() + static_cast<std::ptrdiff_t>(to), entry);
            } else {
                mem.refresh();
            }
            // Layout stays one packed prefix in table order.
            std::size_t expect_start = 0;
            REQUIRE(mem.table().size() == model.objects.size());
            for (std::size_t k = 0; k < model.objects.size(); ++k) {
                const auto& [mid, mw] = model.objects[k];
                REQUIRE(mem.table()[k].id == mid);
                REQUIRE(mem.start_of(mid) == expect_start);
                REQUIRE(mem.object(mid) == mw);
                expect_start += mw.size();
            }
            REQUIRE(mem.used() == expect_start);
        }
    }
}
