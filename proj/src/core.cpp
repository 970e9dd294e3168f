#include "cpm/core.hpp"

#include <bit>
#include <string>

#include "cpm/logic.hpp"

namespace cpm {

namespace {

std::size_t decoder_width(std::size_t n) {
    std::size_t w = 1;
    while (w < n) w <<= 1;
    return w;
}

}  // namespace

Topology Topology::line(std::size_t n) {
    if (n == 0 || n > kMaxPeCount)
        throw ConfigError("PE count must be in [1, 2^24], got " + std::to_string(n));
    return Topology{Kind::line_1d, n, 1};
}

Topology Topology::lattice(std::size_t nx, std::size_t ny) {
    if (nx == 0 || ny == 0 || nx > kMaxPeCount / ny)
        throw ConfigError("lattice dimensions must be positive with at most 2^24 PEs");
    return Topology{Kind::lattice_2d, nx, ny};
}

std::optional<std::size_t> Topology::neighbor(std::size_t linear, Dir d) const {
    const std::size_t x = x_of(linear), y = y_of(linear);
    switch (d) {
        case Dir::left:
            if (x == 0) return std::nullopt;
            return linear - 1;
        case Dir::right:
            if (x + 1 >= nx) return std::nullopt;
            return linear + 1;
        case Dir::top:
            if (!is_2d() || y == 0) return std::nullopt;
            return linear - nx;
        case Dir::bottom:
            if (!is_2d() || y + 1 >= ny) return std::nullopt;
            return linear + nx;
    }
    return std::nullopt;
}

ControlUnit::ControlUnit(Topology topo) : topo_(topo), mask_(topo.size(), true) {}

BitVector ControlUnit::decode_axis(const AxisRange& r, std::size_t extent) const {
    if (r.start >= extent || r.end >= extent)
        throw ConfigError("activation range [" + std::to_string(r.start) + ", " +
                          std::to_string(r.end) + "] outside axis of " + std::to_string(extent));
    const std::size_t width = decoder_width(extent);
    if (r.start > r.end) return BitVector(extent);
    // A carry past the decoder width can only ever reach the start address.
    const std::size_t carry = r.carry >= width ? 0 : r.carry;
    const DecodeKey key{r.start, r.end, carry, extent};
    if (auto it = decode_cache_.find(key); it != decode_cache_.end()) return it->second;
    BitVector lines = carry == 1 ? logic::unit_carry_decode(r.start, r.end, width)
                                 : logic::general_decode({r.start, r.end, carry, width});
    BitVector out(extent);
    for (auto i : lines.indices()) out.set(i);
    if (decode_cache_.size() >= 64) decode_cache_.clear();
    decode_cache_.emplace(key, out);
    return out;
}

const BitVector& ControlUnit::activate(std::size_t start, std::size_t end, std::size_t carry) {
    if (topo_.is_2d()) {
        if (start >= size() || end >= size())
            throw ConfigError("activation address outside the array");
        // Linear activation on a lattice: decode over the flattened address.
        const std::size_t width = decoder_width(size());
        charge_macro();
        if (start > end) {
            mask_ = BitVector(size());
            return mask_;
        }
        const std::size_t c = carry >= width ? 0 : carry;
        BitVector lines = logic::general_decode({start, end, c, width});
        BitVector out(size());
        for (auto i : lines.indices()) out.set(i);
        mask_ = std::move(out);
        return mask_;
    }
    BitVector m = decode_axis({start, end, carry}, size());
    charge_macro();
    mask_ = std::move(m);
    return mask_;
}

const BitVector& ControlUnit::activate_2d(const AxisRange& x, const AxisRange& y) {
    BitVector mx = decode_axis(x, topo_.nx);
    BitVector my = decode_axis(y, topo_.ny);
    charge_macro();
    BitVector out(size());
    for (auto yy : my.indices())
        for (auto xx : mx.indices()) out.set(topo_.linear(xx, yy));
    mask_ = std::move(out);
    return mask_;
}

const BitVector& ControlUnit::activate_all() {
    charge_macro();
    mask_ = BitVector(size(), true);
    return mask_;
}

void ControlUnit::set_mask_uncharged(BitVector mask) {
    if (mask.size() != size()) throw ConfigError("mask width does not match the array");
    mask_ = std::move(mask);
}

MatchReport ControlUnit::enumerate(const BitVector& match_lines) {
    MatchReport r;
    r.matched = (match_lines & mask_).indices();
    r.count = r.matched.size();
    charge_macro(r.count);
    return r;
}

std::size_t ControlUnit::count(const BitVector& match_lines) {
    charge_macro();
    return (match_lines & mask_).count();
}

std::optional<std::size_t> ControlUnit::first(const BitVector& match_lines) {
    charge_macro();
    BitVector visible = match_lines & mask_;
    const auto& w = visible.words();
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w[k]));
    return std::nullopt;
}

std::optional<std::size_t> ControlUnit::last(const BitVector& match_lines) {
    charge_macro();
    BitVector visible = match_lines & mask_;
    const auto& w = visible.words();
    for (std::size_t k = w.size(); k-- > 0;)
        if (w[k]) return k * 64 + 63 - static_cast<std::size_t>(std::countl_zero(w[k]));
    return std::nullopt;
}

void ControlUnit::check_address(std::size_t linear) const {
    if (linear >= size())
        throw AddressError("address " + std::to_string(linear) + " outside array of " +
                           std::to_string(size()));
}

}  // namespace cpm
