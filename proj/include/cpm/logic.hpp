#pragma once

#include <cstddef>

#include "cpm/bit_vector.hpp"

// Combinational models of the activation decoder. Widths are powers of two
// because the all-line decoder is built by doubling.
namespace cpm::logic {

struct DecoderInput {
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t carry = 1;
    std::size_t width = 0;
};

bool is_power_of_two(std::size_t v);

// Line a is asserted iff a is a non-negative multiple of `carry`. carry == 0
// asserts only line 0.
BitVector carry_pattern(std::size_t carry, std::size_t width);

// out[a] = in[a - shift] for a >= shift, else 0. Built as one conditional
// power-of-two stage per bit of `shift`.
BitVector parallel_shift(const BitVector& input, std::size_t shift);

// Line a is asserted iff a <= end, built by the recursive doubling
// construction.
BitVector all_line_decode(std::size_t end, std::size_t width);

// AND of the shifted carry pattern and the all-line decode of `end`.
BitVector general_decode(const DecoderInput& in);

// Simplified decoder for carry == 1: a negated all-line decoder on `start`
// (lines >= start) ANDed with a positive one on `end`.
BitVector unit_carry_decode(std::size_t start, std::size_t end, std::size_t width);

}  // namespace cpm::logic
