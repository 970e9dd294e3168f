#include "cpm/logic.hpp"

#include <string>

#include "cpm/errors.hpp"

namespace cpm::logic {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

namespace {

void require_width(std::size_t width) {
    if (!is_power_of_two(width))
        throw ConfigError("decoder width must be a power of two, got " + std::to_string(width));
}

}  // namespace

BitVector carry_pattern(std::size_t carry, std::size_t width) {
    require_width(width);
    if (carry >= width)
        throw ConfigError("carry number " + std::to_string(carry) + " does not fit decoder width " +
                          std::to_string(width));
    // Sum-of-products form: line a is its own product term (carry == a) ORed
    // with the lines of its proper divisors. Evaluated in ascending order, an
    // asserted line feeds every multiple of its address.
    BitVector d(width);
    d.set(0);
    for (std::size_t a = 1; a < width; ++a) {
        if (carry == a) d.set(a);
        if (!d.test(a)) continue;
        for (std::size_t m = 2 * a; m < width; m += a) d.set(m);
    }
    return d;
}

BitVector parallel_shift(const BitVector& input, std::size_t shift) {
    if (shift >= input.size())
        throw ConfigError("shift amount " + std::to_string(shift) + " must be below width " +
                          std::to_string(input.size()));
    BitVector h = input;
    for (std::size_t j = 0; (std::size_t{1} << j) <= shift; ++j)
        if (shift & (std::size_t{1} << j)) h = h.shifted_up(std::size_t{1} << j);
    return h;
}

BitVector all_line_decode(std::size_t end, std::size_t width) {
    require_width(width);
    if (end >= width)
        throw ConfigError("end address " + std::to_string(end) + " must be below width " +
                          std::to_string(width));
    if (width == 1) return BitVector(1, true);

    // Base decoder on one address bit: F[0] = 1, F[1] = E[0].
    BitVector f(2);
    f.set(0);
    f.set(1, end & 1u);
    for (std::size_t n = 1; (std::size_t{1} << n) < width; ++n) {
        const std::size_t half = std::size_t{1} << n;
        const bool top = (end >> n) & 1u;
        BitVector g(half * 2);
        for (std::size_t a = 0; a < half; ++a) {
            g.set(a, f.test(a) || top);          // address bit n clear
            g.set(half + a, f.test(a) && top);   // address bit n set
        }
        f = std::move(g);
    }
    return f;
}

BitVector general_decode(const DecoderInput& in) {
    require_width(in.width);
    if (in.start >= in.width || in.end >= in.width)
        throw ConfigError("decoder addresses must be below width " + std::to_string(in.width));
    return parallel_shift(carry_pattern(in.carry, in.width), in.start) &
           all_line_decode(in.end, in.width);
}

BitVector unit_carry_decode(std::size_t start, std::size_t end, std::size_t width) {
    require_width(width);
    if (start >= width || end >= width)
        throw ConfigError("decoder addresses must be below width " + std::to_string(width));
    // The negatively asserted decoder is driven with start - 1 so that it
    // releases every line at or above start.
    BitVector lower = start == 0 ? BitVector(width, true) : ~all_line_decode(start - 1, width);
    return lower & all_line_decode(end, width);
}

}  // namespace cpm::logic
