#pragma once

#include <cstdint>

namespace cpm {

// Instruction-cycle counters. Macro cycles are word-level concurrent
// broadcasts (activations and control-unit steps included); micro cycles are
// bit-serial ALU steps; exclusive ops are single-register bus accesses.
struct CycleLedger {
    std::uint64_t macro_cycles = 0;
    std::uint64_t micro_cycles = 0;
    std::uint64_t exclusive_ops = 0;

    CycleLedger& operator+=(const CycleLedger& o) {
        macro_cycles += o.macro_cycles;
        micro_cycles += o.micro_cycles;
        exclusive_ops += o.exclusive_ops;
        return *this;
    }
    friend CycleLedger operator+(CycleLedger a, const CycleLedger& b) { return a += b; }
    friend CycleLedger operator-(const CycleLedger& a, const CycleLedger& b) {
        return {a.macro_cycles - b.macro_cycles, a.micro_cycles - b.micro_cycles,
                a.exclusive_ops - b.exclusive_ops};
    }
    friend bool operator==(const CycleLedger&, const CycleLedger&) = default;
};

}  // namespace cpm
