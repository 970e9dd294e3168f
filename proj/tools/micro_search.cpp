// Breadth-first search for per-bit micro programs.
//
// The single-bit PE state is (a, c, s, m) with a = op bit, b = reg bit
// (read-only), c = carry, s = status, m = match latch. All 32 input
// combinations are evaluated at once, one per bit of a 32-bit word, so a
// state is four truth tables. A step code uses the layout documented in
// src/computable.cpp (writeback bits 0-3, condition bits 4-5, negate bit 7,
// chain bit 8).
//
// usage: micro_search <add|sub|lt|eq|neg> [max_depth]

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <unordered_set>
#include <vector>

namespace {

struct State {
    std::uint32_t a, c, s, m;
    bool operator==(const State&) const = default;
};

struct StateHash {
    std::size_t operator()(const State& x) const {
        return (x.a * 0x9E3779B97F4A7C15ull) ^ (std::uint64_t{x.c} << 17) ^
               (x.s * 0xC2B2AE3D27D4EB4Full) ^ (std::uint64_t{x.m} << 41);
    }
};

std::uint32_t column(int var) {
    std::uint32_t t = 0;
    for (int i = 0; i < 32; ++i) t |= std::uint32_t((i >> (4 - var)) & 1) << i;
    return t;
}

const std::uint32_t kA = column(0), kB = column(1), kC = column(2), kS = column(3), kM = column(4);

State apply(const State& x, unsigned code) {
    const unsigned src = (code >> 4) & 3;
    std::uint32_t v = src == 0 ? x.a : src == 1 ? kB : src == 2 ? x.s : x.c;
    if ((code >> 7) & 1) v = ~v;
    const std::uint32_t b = (((code >> 8) & 1) ? x.m : 0) | v;
    auto merge = [&](std::uint32_t old) { return (old & ~b) | (x.m & b); };
    State r = x;
    if (code & 1) r.m = b;
    if (code & 2) r.s = merge(x.s);
    if (code & 4) r.c = merge(x.c);
    if (code & 8) r.a = merge(x.a);
    return r;
}

struct Target {
    std::uint32_t a, c, s;
    bool check_s;
    bool reached(const State& y) const { return y.a == a && y.c == c && (!check_s || y.s == s); }
};

std::optional<Target> target(const char* name) {
    Target t{0, 0, 0, false};
    for (int i = 0; i < 32; ++i) {
        const int a = (i >> 4) & 1, b = (i >> 3) & 1, c = (i >> 2) & 1, s = (i >> 1) & 1;
        int ea, ec;
        if (!std::strcmp(name, "add")) {
            ea = a ^ b ^ c;
            ec = a + b + c >= 2;
        } else if (!std::strcmp(name, "sub")) {
            ea = a ^ b ^ c;
            ec = a - b - c < 0;
        } else if (!std::strcmp(name, "lt")) {
            ea = a;
            ec = a - b - c < 0;
        } else if (!std::strcmp(name, "eq")) {
            ea = a;
            ec = c | (a ^ b);
        } else if (!std::strcmp(name, "neg")) {
            ea = (s & c) ? !a : a;
            ec = c | a;
            t.check_s = true;
        } else {
            return std::nullopt;
        }
        t.a |= std::uint32_t(ea) << i;
        t.c |= std::uint32_t(ec) << i;
        t.s |= std::uint32_t(s) << i;
    }
    return t;
}

void print(int depth, const std::vector<unsigned>& codes) {
    std::printf("depth %d:", depth);
    for (unsigned c : codes) std::printf(" %u", c);
    std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: micro_search <add|sub|lt|eq|neg> [max_depth]\n");
        return 2;
    }
    const auto goal = target(argv[1]);
    if (!goal) {
        std::fprintf(stderr, "unknown target %s\n", argv[1]);
        return 2;
    }
    const int max_depth = argc > 2 ? std::atoi(argv[2]) : 5;

    std::vector<unsigned> steps;
    for (unsigned chain = 0; chain < 2; ++chain)
        for (unsigned src = 0; src < 4; ++src)
            for (unsigned neg = 0; neg < 2; ++neg)
                for (unsigned wb = 0; wb < 16; ++wb) steps.push_back(wb | src << 4 | neg << 7 | chain << 8);

    // Frontier states are stored up to depth 3; the last two levels are
    // enumerated without deduplication to bound memory.
    using Node = std::pair<State, std::vector<unsigned>>;
    std::vector<Node> frontier{{State{kA, kC, kS, kM}, {}}};
    std::unordered_set<State, StateHash> seen{frontier[0].first};
    const int stored = max_depth < 3 ? max_depth : 3;
    for (int d = 1; d <= stored; ++d) {
        std::vector<Node> next;
        for (const auto& [x, path] : frontier)
            for (unsigned st : steps) {
                const State y = apply(x, st);
                auto p = path;
                p.push_back(st);
                if (goal->reached(y)) {
                    print(d, p);
                    return 0;
                }
                if (seen.insert(y).second) next.push_back({y, std::move(p)});
            }
        frontier.swap(next);
        std::fprintf(stderr, "depth %d: %zu new states\n", d, frontier.size());
    }
    if (max_depth >= 4) {
        for (const auto& [x, path] : frontier)
            for (unsigned s1 : steps)
                if (goal->reached(apply(x, s1))) {
                    auto p = path;
                    p.push_back(s1);
                    print(4, p);
                    return 0;
                }
        std::fprintf(stderr, "depth 4: none\n");
    }
    if (max_depth >= 5) {
        for (const auto& [x, path] : frontier)
            for (unsigned s1 : steps) {
                const State y = apply(x, s1);
                for (unsigned s2 : steps)
                    if (goal->reached(apply(y, s2))) {
                        auto p = path;
                        p.push_back(s1);
                        p.push_back(s2);
                        print(5, p);
                        return 0;
                    }
            }
    }
    std::printf("none within depth %d\n", max_depth);
    return 1;
}
