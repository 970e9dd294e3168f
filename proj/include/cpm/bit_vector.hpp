#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace cpm {

// Fixed-width vector of lines. Bits past `size()` in the last storage word are
// kept at zero so word-wise equality is bitwise equality.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t width, bool value = false);

    static BitVector from_indices(std::size_t width, std::initializer_list<std::size_t> indices);
    static BitVector from_indices(std::size_t width, const std::vector<std::size_t>& indices);

    std::size_t size() const { return width_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true) {
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= bit;
        else
            words_[i >> 6] &= ~bit;
    }
    void fill(bool v);

    std::size_t count() const;
    bool any() const;
    bool none() const { return !any(); }
    std::vector<std::size_t> indices() const;

    // Moves every line toward higher indices by `amount`; vacated low lines
    // take `fill`, lines pushed past the top are dropped.
    BitVector shifted_up(std::size_t amount, bool fill = false) const;
    // Moves every line toward lower indices by `amount`; vacated high lines
    // take `fill`.
    BitVector shifted_down(std::size_t amount, bool fill = false) const;

    BitVector& operator&=(const BitVector& o);
    BitVector& operator|=(const BitVector& o);
    BitVector& operator^=(const BitVector& o);
    BitVector operator~() const;

    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.width_ == b.width_ && a.words_ == b.words_;
    }

    // a = (a & ~sel) | (b & sel)
    void assign_where(const BitVector& sel, const BitVector& value);

    std::vector<std::uint64_t>& words() { return words_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    std::string to_string() const;  // index 0 first

private:
    void clear_padding();

    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace cpm
