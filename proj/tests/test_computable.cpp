#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "cpm/computable.hpp"

using namespace cpm;

namespace {

std::uint64_t mask_of(std::size_t w) { return w == 64 ? ~0ull : (1ull << w) - 1; }

// One PE per operand pair so a single macro checks the whole batch.
struct Batch {
    ComputableMemory mem;
    std::vector<std::uint64_t> a, b;

    Batch(std::size_t n, std::size_t w, std::uint64_t seed)
        : mem(Topology::line(n), ComputableConfig{w, 4, 0}), a(n), b(n) {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng() & mask_of(w);
            b[i] = rng() & mask_of(w);
            if (i % 7 == 0) b[i] = a[i];
            if (i % 11 == 0) b[i] = (a[i] + 1) & mask_of(w);
        }
        for (std::size_t i = 0; i < n; ++i) {
            mem.poke(i, RegRef::op(), a[i]);
            mem.poke(i, RegRef::data(1), b[i]);
        }
        mem.control().activate_all();
    }
};

}  // namespace

TEST_CASE("ALU truth table") {
    for (int row = 0; row < 16; ++row) {
        const bool m = row & 8, c = row & 4, v = row & 2, d = row & 1;
        const bool expect = m || (c && ((v && d) || (!v && !d))) || (!c && v);
        CHECK(alu_eval(m, c, v, d) == expect);
    }
    CHECK(alu_eval(true, false, false, false));
    CHECK(alu_eval(false, true, true, true));
    CHECK_FALSE(alu_eval(false, true, true, false));
    CHECK(alu_eval(false, false, true, false));
    CHECK_FALSE(alu_eval(false, false, false, true));
}

TEST_CASE("micro step basics") {
    ComputableMemory mem(Topology::line(4), {8, 2, 0});
    mem.poke(1, RegRef::op(), 1);
    mem.control().activate_all();
    MicroInstruction mi;
    mi.cond = CondSource::op_bit;
    mi.chain_m = false;
    mi.writeback = wb::b_to_m;
    mem.micro_step(mi);
    CHECK(mem.match_lines() == BitVector::from_indices(4, {1}));
    CHECK(mem.m_bit(1));
    CHECK_FALSE(mem.m_bit(0));
    CHECK(mem.control().ledger().micro_cycles == 1);

    MicroInstruction idle;
    const auto op_before = mem.snapshot(RegRef::op());
    mem.micro_step(idle);
    CHECK(mem.snapshot(RegRef::op()) == op_before);
    CHECK(mem.control().ledger().micro_cycles == 2);

    // Gate closed where B = 0: PE 0 has M = 0 and op bit 0 = 0.
    MicroInstruction gated;
    gated.cond = CondSource::op_bit;
    gated.chain_m = false;
    gated.reg = RegRef::data(0);
    gated.writeback = wb::opbit_to_regbit;
    mem.poke(0, RegRef::data(0), 1);
    mem.micro_step(gated);
    CHECK(mem.peek(0, RegRef::data(0)) == 1);
}

TEST_CASE("writes to a neighbor's register are rejected") {
    ComputableMemory mem(Topology::line(4), {8, 2, 0});
    MicroInstruction mi;
    mi.reg = RegRef::neighbor(Dir::left);
    mi.writeback = wb::opbit_to_regbit;
    CHECK_THROWS_AS(mem.micro_step(mi), InstructionError);
    CHECK_THROWS_AS(mem.run_macro(MacroOp::copy(RegRef::data(0), RegRef::data(1))), InstructionError);
    CHECK_THROWS_AS(mem.run_macro(MacroOp::read_neighbor(Dir::top)), InstructionError);
}

TEST_CASE("add example and expansion length") {
    ComputableMemory mem(Topology::line(1), {8, 4, 0});
    mem.poke(0, RegRef::op(), 5);
    mem.poke(0, RegRef::data(0), 7);
    mem.run_macro(MacroOp::add(RegRef::data(0)));
    CHECK(mem.peek(0, RegRef::op()) == 12);
    CHECK(mem.control().ledger().macro_cycles == 1);
    CHECK(mem.control().ledger().micro_cycles == 5 * 8 + 2);
}

TEST_CASE("bit-serial arithmetic equals integer arithmetic") {
    for (std::size_t w : {8u, 16u, 32u}) {
        const std::size_t n = 2000;
        const std::uint64_t mk = mask_of(w);
        {  // add
            Batch t(n, w, w);
            t.mem.run_macro(MacroOp::add(RegRef::data(1)));
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(t.mem.peek(i, RegRef::op()) == ((t.a[i] + t.b[i]) & mk));
        }
        {  // sub
            Batch t(n, w, w + 1);
            t.mem.run_macro(MacroOp::sub(RegRef::data(1)));
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(t.mem.peek(i, RegRef::op()) == ((t.a[i] - t.b[i]) & mk));
        }
        {  // abs_diff
            Batch t(n, w, w + 2);
            t.mem.run_macro(MacroOp::abs_diff(RegRef::data(1)));
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t d = t.a[i] > t.b[i] ? t.a[i] - t.b[i] : t.b[i] - t.a[i];
                REQUIRE(t.mem.peek(i, RegRef::op()) == d);
            }
        }
        {  // compare_lt
            Batch t(n, w, w + 3);
            t.mem.run_macro(MacroOp::compare_lt(RegRef::data(1)));
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(t.mem.m_bit(i) == (t.a[i] < t.b[i]));
                REQUIRE(t.mem.peek(i, RegRef::op()) == t.a[i]);
            }
            CHECK(t.mem.match_lines() == t.mem.m_plane());
        }
        {  // compare_eq
            Batch t(n, w, w + 4);
            t.mem.run_macro(MacroOp::compare_eq(RegRef::data(1)));
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(t.mem.m_bit(i) == (t.a[i] == t.b[i]));
                REQUIRE(t.mem.peek(i, RegRef::op()) == t.a[i]);
            }
        }
        {  // threshold
            Batch t(n, w, w + 5);
            using Cmp = MacroOp::Cmp;
            const std::pair<Cmp, bool (*)(std::uint64_t, std::uint64_t)> cases[] = {
                {Cmp::lt, [](std::uint64_t x, std::uint64_t k) { return x < k; }},
                {Cmp::le, [](std::uint64_t x, std::uint64_t k) { return x <= k; }},
                {Cmp::gt, [](std::uint64_t x, std::uint64_t k) { return x > k; }},
                {Cmp::ge, [](std::uint64_t x, std::uint64_t k) { return x >= k; }},
                {Cmp::eq, [](std::uint64_t x, std::uint64_t k) { return x == k; }},
                {Cmp::ne, [](std::uint64_t x, std::uint64_t k) { return x != k; }},
            };
            for (std::uint64_t k : {std::uint64_t{0}, t.a[3], t.a[7], mk}) {
                for (auto [cmp, f] : cases) {
                    t.mem.run_macro(MacroOp::threshold(cmp, k));
                    for (std::size_t i = 0; i < n; ++i) REQUIRE(t.mem.m_bit(i) == f(t.a[i], k));
                }
            }
        }
        {  // select, exchange, copy, load immediate
            Batch t(n, w, w + 6);
            t.mem.run_macro(MacroOp::compare_lt(RegRef::data(1)));
            t.mem.run_macro(MacroOp::select_if(RegRef::data(1)));
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(t.mem.peek(i, RegRef::op()) == std::max(t.a[i], t.b[i]));
            t.mem.run_macro(MacroOp::exchange(RegRef::data(1)));
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(t.mem.peek(i, RegRef::op()) == t.b[i]);
                REQUIRE(t.mem.peek(i, RegRef::data(1)) == std::max(t.a[i], t.b[i]));
            }
            t.mem.run_macro(MacroOp::copy(RegRef::data(2), RegRef::op()));
            t.mem.run_macro(MacroOp::load_immediate(0x5A & mk));
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(t.mem.peek(i, RegRef::data(2)) == t.b[i]);
                REQUIRE(t.mem.peek(i, RegRef::op()) == (0x5A & mk));
            }
        }
    }
}

TEST_CASE("signed abs and multiply") {
    const std::size_t w = 16, n = 500;
    Batch t(n, w, 77);
    t.mem.run_macro(MacroOp::abs());
    for (std::size_t i = 0; i < n; ++i) {
        const auto s = static_cast<std::int16_t>(t.a[i]);
        REQUIRE(t.mem.peek(i, RegRef::op()) == static_cast<std::uint16_t>(s < 0 ? -s : s));
    }
    Batch m(n, w, 78);
    m.mem.run_macro(MacroOp::mul(RegRef::data(1), 2));
    for (std::size_t i = 0; i < n; ++i)
        REQUIRE(m.mem.peek(i, RegRef::op()) == ((m.a[i] * m.b[i]) & 0xFFFF));
    CHECK(m.mem.control().ledger().micro_cycles <= 10 * w * w);
}

TEST_CASE("neighbor copy is an array-wide two-phase shift") {
    const std::size_t n = 10;
    ComputableMemory mem(Topology::line(n), {8, 2, 0xEE});
    for (std::size_t i = 0; i < n; ++i) mem.poke(i, RegRef::nb(), i + 1);
    mem.control().activate_all();
    mem.run_macro(MacroOp::read_neighbor(Dir::left));
    CHECK(mem.peek(0, RegRef::op()) == 0xEE);
    for (std::size_t i = 1; i < n; ++i) CHECK(mem.peek(i, RegRef::op()) == i);
    mem.run_macro(MacroOp::copy(RegRef::nb(), RegRef::op()));
    mem.run_macro(MacroOp::read_neighbor(Dir::right));
    CHECK(mem.peek(n - 1, RegRef::op()) == 0xEE);
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(mem.peek(i, RegRef::op()) == i + 1);
}

TEST_CASE("2-D neighbor reads respect row edges") {
    ComputableMemory mem(Topology::lattice(4, 3), {8, 2, 0});
    for (std::size_t i = 0; i < 12; ++i) mem.poke(i, RegRef::nb(), 10 + i);
    mem.control().activate_all();
    mem.run_macro(MacroOp::read_neighbor(Dir::right));
    for (std::size_t y = 0; y < 3; ++y)
        for (std::size_t x = 0; x < 4; ++x)
            CHECK(mem.peek(y * 4 + x, RegRef::op()) == (x == 3 ? 0 : 10 + y * 4 + x + 1));
    mem.run_macro(MacroOp::read_neighbor(Dir::top));
    for (std::size_t i = 0; i < 12; ++i) CHECK(mem.peek(i, RegRef::op()) == (i < 4 ? 0 : 10 + i - 4));
    mem.run_macro(MacroOp::read_neighbor(Dir::bottom));
    for (std::size_t i = 0; i < 12; ++i) CHECK(mem.peek(i, RegRef::op()) == (i >= 8 ? 0 : 10 + i + 4));
}

TEST_CASE("macros act on each PE in isolation") {
    const std::size_t n = 64;
    ComputableMemory mem(Topology::line(n), {12, 3, 0});
    std::mt19937_64 rng(3);
    std::vector<std::uint64_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng() & 0xFFF;
        b[i] = rng() & 0xFFF;
        mem.poke(i, RegRef::op(), a[i]);
        mem.poke(i, RegRef::data(0), b[i]);
    }
    mem.control().activate_all();
    mem.run_macro(MacroOp::abs_diff(RegRef::data(0)));
    for (std::size_t i = 0; i < n; ++i) {
        ComputableMemory single(Topology::line(1), {12, 3, 0});
        single.poke(0, RegRef::op(), a[i]);
        single.poke(0, RegRef::data(0), b[i]);
        single.run_macro(MacroOp::abs_diff(RegRef::data(0)));
        CHECK(single.peek(0, RegRef::op()) == mem.peek(i, RegRef::op()));
    }
}

TEST_CASE("inactive PEs are untouched by macros") {
    ComputableMemory mem(Topology::line(8), {8, 2, 0});
    for (std::size_t i = 0; i < 8; ++i) mem.poke(i, RegRef::op(), 3), mem.poke(i, RegRef::data(0), 4);
    mem.control().activate(0, 7, 2);
    mem.run_macro(MacroOp::add(RegRef::data(0)));
    for (std::size_t i = 0; i < 8; ++i) CHECK(mem.peek(i, RegRef::op()) == (i % 2 == 0 ? 7 : 3));
}

TEST_CASE("micro trace prints one line per step") {
    ComputableMemory mem(Topology::line(2), {4, 2, 0});
    std::ostringstream trace;
    mem.set_trace(&trace);
    mem.run_macro(MacroOp::add(RegRef::data(0)));
    const std::string s = trace.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == 22);
    CHECK(s.rfind("cond=c~ C=0 D=0 M=off op[0] reg=d0[0] wb=B>M", 0) == 0);
}

TEST_CASE("comparison on equal operands is strict") {
    ComputableMemory mem(Topology::line(1), {8, 2, 0});
    mem.poke(0, RegRef::op(), 5);
    mem.poke(0, RegRef::data(0), 5);
    mem.run_macro(MacroOp::compare_lt(RegRef::data(0)));
    CHECK_FALSE(mem.m_bit(0));
}
