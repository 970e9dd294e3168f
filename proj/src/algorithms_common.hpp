#pragma once

#include <string>
#include <utility>

#include "cpm/algorithms.hpp"
#include "cpm/errors.hpp"

namespace cpm::detail {

inline RegRef op() { return RegRef::op(); }
inline RegRef nb() { return RegRef::nb(); }
inline RegRef d(std::size_t i) { return RegRef::data(i); }
inline RegRef from(Dir dir) { return RegRef::neighbor(dir); }

inline std::uint64_t word_mask(std::size_t w) {
    return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
}

// Tracks the ledger of one algorithm run and its named phases.
class Run {
public:
    Run(ComputableMemory& mem, std::string name) : mem_(mem), start_(mem.control().ledger()) {
        rep_.algorithm = std::move(name);
    }

    void phase(std::string name) {
        close();
        open_ = std::move(name);
        mark_ = mem_.control().ledger();
    }
    AlgorithmReport& report() { return rep_; }
    AlgorithmReport finish() {
        close();
        rep_.ledger_delta = mem_.control().ledger() - start_;
        return std::move(rep_);
    }

private:
    void close() {
        if (!open_.empty()) rep_.phases.emplace_back(open_, mem_.control().ledger() - mark_);
        open_.clear();
    }

    ComputableMemory& mem_;
    CycleLedger start_, mark_;
    std::string open_;
    AlgorithmReport rep_;
};

inline void need_2d(const ComputableMemory& mem, const char* what) {
    if (!mem.topology().is_2d()) throw ConfigError(std::string(what) + " needs a 2-D lattice");
}

inline void need_zero_fill(const ComputableMemory& mem, const char* what) {
    if (mem.config().edge_fill != 0) throw ConfigError(std::string(what) + " needs a zero edge fill");
}

// Activation whose start may lie past the end of the array; such a range
// selects nothing but still costs its instruction cycle.
inline void activate(ControlUnit& cu, std::size_t start, std::size_t end, std::size_t carry = 1) {
    if (start > end) {
        cu.set_mask_uncharged(BitVector(cu.size()));
        cu.charge_macro();
        return;
    }
    cu.activate(start, end, carry);
}

inline void activate(ControlUnit& cu, const AxisRange& x, const AxisRange& y) {
    if (x.start > x.end || y.start > y.end) {
        cu.set_mask_uncharged(BitVector(cu.size()));
        cu.charge_macro();
        return;
    }
    cu.activate_2d(x, y);
}

// nb := ~nb at every PE, which reverses the unsigned order.
void complement_nb(ComputableMemory& mem);

// Smallest op value among active PEs by bisection over the word range:
// two instruction cycles per bit, independent of the PE count.
std::uint64_t active_minimum(ComputableMemory& mem);

}  // namespace cpm::detail
