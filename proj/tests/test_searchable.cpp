#include <doctest.h>

#include <random>
#include <string>

#include "cpm/searchable.hpp"

using namespace cpm;

namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

SearchableMemory loaded(const std::string& text, std::size_t pes = 0) {
    SearchableMemory mem(pes ? pes : text.size());
    mem.load(bytes(text));
    return mem;
}

std::vector<std::size_t> naive_ends(const std::vector<std::uint8_t>& text,
                                    const std::vector<std::uint8_t>& pat) {
    std::vector<std::size_t> out;
    for (std::size_t e = pat.size() - 1; e < text.size(); ++e) {
        bool ok = true;
        for (std::size_t k = 0; k < pat.size() && ok; ++k)
            ok = text[e + 1 - pat.size() + k] == pat[k];
        if (ok) out.push_back(e);
    }
    return out;
}

}  // namespace

TEST_CASE("single match step") {
    auto mem = loaded("aba");
    mem.control().activate_all();
    mem.match_step({0xFF, 'a', true, true, std::nullopt});
    CHECK(mem.storage_bits() == BitVector::from_indices(3, {0, 2}));

    mem.match_step({0x00, 0x00, true, true, std::nullopt});
    CHECK(mem.storage_bits() == BitVector(3, true));

    auto none = loaded("abc");
    none.control().activate_all();
    none.match_step({0xFF, 'b', true, false, std::nullopt});
    CHECK(none.storage_bits().none());
}

TEST_CASE("chained steps read the pre-step neighbor bits") {
    auto mem = loaded("aaaa");
    mem.control().activate_all();
    mem.match_step({0xFF, 'a', true, true, std::nullopt});
    mem.match_step({0xFF, 'a', true, false, std::nullopt});
    // A sequential in-place sweep would let PE i see the already updated
    // PE i-1; two-phase keeps the old bits, so only PE 0 loses its match.
    CHECK(mem.storage_bits() == BitVector::from_indices(4, {1, 2, 3}));
    std::vector<bool> serial{true, true, true, true};
    for (std::size_t i = 0; i < 4; ++i) serial[i] = i > 0 && serial[i - 1];
    CHECK(serial == std::vector<bool>{false, false, false, false});
}

TEST_CASE("substring search examples") {
    auto m1 = loaded("abcabd");
    const auto r1 = m1.find_substring(bytes("abd"));
    CHECK(r1.report.matched == std::vector<std::size_t>{5});
    CHECK(r1.match_phase.macro_cycles == 3);

    auto m2 = loaded("aaa");
    const auto r2 = m2.find_substring(bytes("a"));
    CHECK(r2.report.matched == std::vector<std::size_t>{0, 1, 2});
    CHECK(r2.match_phase.macro_cycles == 1);

    auto m3 = loaded("AbaB");
    const auto r3 = m3.find_substring(bytes("ab"), {0xDF, 0xDF});
    CHECK(r3.report.matched == std::vector<std::size_t>{1, 3});

    auto m4 = loaded("abab");
    CHECK(m4.find_substring(bytes("abab")).report.matched == std::vector<std::size_t>{3});

    CHECK_THROWS_AS(m4.find_substring({}), ArgumentError);
}

TEST_CASE("random substring search matches the naive search") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 512, m = 1 + rng() % 8;
        std::vector<std::uint8_t> text(n), pat(m);
        const int alpha = 2 + static_cast<int>(rng() % 3);
        for (auto& c : text) c = static_cast<std::uint8_t>('a' + rng() % alpha);
        for (auto& c : pat) c = static_cast<std::uint8_t>('a' + rng() % alpha);
        SearchableMemory mem(n);
        mem.load(text);
        const auto r = mem.find_substring(pat);
        REQUIRE(r.report.matched == naive_ends(text, pat));
        REQUIRE(r.match_phase.macro_cycles == m);
    }
}

TEST_CASE("match phase cost is independent of text length") {
    for (std::size_t n : {256u, 1024u}) {
        SearchableMemory mem(n);
        std::vector<std::uint8_t> text(n, 'x');
        mem.load(text);
        CHECK(mem.find_substring(bytes("xyzzy")).match_phase.macro_cycles == 5);
    }
}

TEST_CASE("text placement offsets shift results") {
    const std::string text = "banananab";
    for (std::size_t off : {0u, 3u, 7u}) {
        SearchableMemory mem(32);
        mem.load(bytes(text), off);
        auto r = mem.find_substring(bytes("ana"));
        std::vector<std::size_t> expect;
        for (auto e : naive_ends(bytes(text), bytes("ana"))) expect.push_back(e + off);
        CHECK(r.report.matched == expect);
    }
}

TEST_CASE("chaining from the higher neighbor reports occurrence starts") {
    SearchableMemory mem(6, ChainFrom::higher_address);
    mem.load(bytes("abcabd"));
    CHECK(mem.find_substring(bytes("ab")).report.matched == std::vector<std::size_t>{0, 3});
}

TEST_CASE("structured search with a carry activation") {
    // Records of 4 bytes; only the first byte of each record is searched.
    auto mem = loaded("xabcyabcxzzz");
    SearchStep s{0xFF, 'x', true, true, AxisRange{0, 11, 4}};
    mem.match_step(s);
    mem.control().activate_all();
    CHECK(mem.control().count(mem.storage_bits()) == 2);
}
