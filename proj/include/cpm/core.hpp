#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cpm/bit_vector.hpp"
#include "cpm/errors.hpp"
#include "cpm/ledger.hpp"

namespace cpm {

// Largest PE count a single array may hold.
inline constexpr std::size_t kMaxPeCount = std::size_t{1} << 24;

enum class Dir { left, right, top, bottom };

// Element addresses are linear; 2-D lattices map (x, y) to y * nx + x.
struct Topology {
    enum class Kind { line_1d, lattice_2d };

    Kind kind = Kind::line_1d;
    std::size_t nx = 0;
    std::size_t ny = 1;

    static Topology line(std::size_t n);
    static Topology lattice(std::size_t nx, std::size_t ny);

    std::size_t size() const { return nx * ny; }
    bool is_2d() const { return kind == Kind::lattice_2d; }
    std::size_t linear(std::size_t x, std::size_t y) const { return y * nx + x; }
    std::size_t x_of(std::size_t linear) const { return linear % nx; }
    std::size_t y_of(std::size_t linear) const { return linear / nx; }

    // Address of the neighbor in `d`, or nothing past the edge. 1-D lines
    // only have left/right neighbors.
    std::optional<std::size_t> neighbor(std::size_t linear, Dir d) const;
};

// One Rule 4 triple along an axis.
struct AxisRange {
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t carry = 1;
};

struct MatchReport {
    std::vector<std::size_t> matched;  // ascending, priority-encoder order
    std::size_t count = 0;
};

// Control unit shared by every memory type: owns the enable lines, the
// instruction-cycle ledger and the match-line aggregation logic.
class ControlUnit {
public:
    explicit ControlUnit(Topology topo);

    const Topology& topology() const { return topo_; }
    std::size_t size() const { return topo_.size(); }

    // Drives the general decoder. One macro cycle regardless of PE count.
    const BitVector& activate(std::size_t start, std::size_t end, std::size_t carry = 1);
    const BitVector& activate_2d(const AxisRange& x, const AxisRange& y);
    const BitVector& activate_all();

    // Latches a mask computed elsewhere without charging a cycle. Used by
    // memories whose command word carries its own range.
    void set_mask_uncharged(BitVector mask);

    const BitVector& mask() const { return mask_; }

    void charge_macro(std::uint64_t n = 1) { ledger_.macro_cycles += n; }
    void charge_micro(std::uint64_t n = 1) { ledger_.micro_cycles += n; }
    void charge_exclusive(std::uint64_t n = 1) { ledger_.exclusive_ops += n; }
    const CycleLedger& ledger() const { return ledger_; }

    // Match lines are only visible from enabled PEs.
    MatchReport enumerate(const BitVector& match_lines);       // 1 macro per reported PE
    std::size_t count(const BitVector& match_lines);           // 1 macro
    std::optional<std::size_t> first(const BitVector& match_lines);  // 1 macro
    std::optional<std::size_t> last(const BitVector& match_lines);   // 1 macro

    void check_address(std::size_t linear) const;

private:
    BitVector decode_axis(const AxisRange& r, std::size_t extent) const;

    // Recent decoder outputs keyed by (start, end, carry, extent); simulation
    // speed only, the decoder is pure.
    using DecodeKey = std::array<std::size_t, 4>;
    mutable std::map<DecodeKey, BitVector> decode_cache_;

    Topology topo_;
    BitVector mask_;
    CycleLedger ledger_;
};

// Homogeneous PE register files with synchronous two-phase update: a
// broadcast reads every PE (and its neighbors) as they were before the step,
// then commits all writes at once.
template <class Pe>
class PeArray {
public:
    // Read-only view of the pre-step state around one PE.
    class View {
    public:
        View(const PeArray& arr, std::size_t at) : arr_(arr), at_(at) {}
        const Pe& self() const { return arr_.state_[at_]; }
        std::size_t address() const { return at_; }
        // Neighbor register file, or the configured fill past the edge.
        const Pe& neighbor(Dir d) const {
            auto n = arr_.control_.topology().neighbor(at_, d);
            return n ? arr_.state_[*n] : arr_.fill_;
        }
        bool at_edge(Dir d) const { return !arr_.control_.topology().neighbor(at_, d).has_value(); }

    private:
        const PeArray& arr_;
        std::size_t at_;
    };

    explicit PeArray(Topology topo, Pe init = {}, Pe fill = {})
        : control_(topo), state_(topo.size(), init), fill_(fill) {}

    ControlUnit& control() { return control_; }
    const ControlUnit& control() const { return control_; }
    std::size_t size() const { return state_.size(); }

    // Test hook: evaluate PEs in a shuffled order during broadcasts.
    void shuffle_evaluation(std::uint64_t seed) { shuffle_seed_ = seed; }

    // Applies `step(view, next)` at every enabled PE as one concurrent step.
    template <class Step>
    void broadcast(Step&& step) {
        control_.charge_macro();
        std::vector<std::size_t> order = control_.mask().indices();
        if (shuffle_seed_) {
            std::mt19937_64 rng(*shuffle_seed_ + ++shuffle_count_);
            std::shuffle(order.begin(), order.end(), rng);
        }
        std::vector<Pe> next = state_;
        for (auto i : order) step(View(*this, i), next[i]);
        state_.swap(next);
    }

    // Rule 2 access through the exclusive bus.
    Pe& exclusive(std::size_t linear) {
        control_.check_address(linear);
        control_.charge_exclusive();
        return state_[linear];
    }

    // Simulator introspection; never charged.
    const Pe& peek(std::size_t linear) const { return state_.at(linear); }
    Pe& poke(std::size_t linear) { return state_.at(linear); }
    const std::vector<Pe>& state() const { return state_; }

    void set_fill(Pe fill) { fill_ = fill; }
    const Pe& fill() const { return fill_; }

private:
    ControlUnit control_;
    std::vector<Pe> state_;
    Pe fill_;
    std::optional<std::uint64_t> shuffle_seed_;
    std::uint64_t shuffle_count_ = 0;
};

}  // namespace cpm
