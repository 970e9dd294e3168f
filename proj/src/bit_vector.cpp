#include "cpm/bit_vector.hpp"

#include <bit>

namespace cpm {

BitVector::BitVector(std::size_t width, bool value)
    : width_(width), words_((width + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    clear_padding();
}

BitVector BitVector::from_indices(std::size_t width, std::initializer_list<std::size_t> indices) {
    BitVector v(width);
    for (auto i : indices) v.set(i);
    return v;
}

BitVector BitVector::from_indices(std::size_t width, const std::vector<std::size_t>& indices) {
    BitVector v(width);
    for (auto i : indices) v.set(i);
    return v;
}

void BitVector::fill(bool v) {
    for (auto& w : words_) w = v ? ~std::uint64_t{0} : 0;
    clear_padding();
}

std::size_t BitVector::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool BitVector::any() const {
    for (auto w : words_)
        if (w) return true;
    return false;
}

std::vector<std::size_t> BitVector::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
        std::uint64_t w = words_[k];
        while (w) {
            out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

BitVector BitVector::shifted_up(std::size_t amount, bool fill) const {
    BitVector out(width_);
    if (amount >= width_) {
        out.fill(fill);
        return out;
    }
    const std::size_t ws = amount / 64, bs = amount % 64;
    for (std::size_t k = words_.size(); k-- > ws;) {
        std::uint64_t v = words_[k - ws] << bs;
        if (bs && k - ws > 0) v |= words_[k - ws - 1] >> (64 - bs);
        out.words_[k] = v;
    }
    if (fill)
        for (std::size_t i = 0; i < amount; ++i) out.set(i);
    out.clear_padding();
    return out;
}

BitVector BitVector::shifted_down(std::size_t amount, bool fill) const {
    BitVector out(width_);
    if (amount >= width_) {
        out.fill(fill);
        return out;
    }
    const std::size_t ws = amount / 64, bs = amount % 64;
    for (std::size_t k = 0; k + ws < words_.size(); ++k) {
        std::uint64_t v = words_[k + ws] >> bs;
        if (bs && k + ws + 1 < words_.size()) v |= words_[k + ws + 1] << (64 - bs);
        out.words_[k] = v;
    }
    if (fill)
        for (std::size_t i = width_ - amount; i < width_; ++i) out.set(i);
    return out;
}

BitVector& BitVector::operator&=(const BitVector& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
}

BitVector& BitVector::operator|=(const BitVector& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
}

BitVector BitVector::operator~() const {
    BitVector out(*this);
    for (auto& w : out.words_) w = ~w;
    out.clear_padding();
    return out;
}

void BitVector::assign_where(const BitVector& sel, const BitVector& value) {
    for (std::size_t k = 0; k < words_.size(); ++k)
        words_[k] = (words_[k] & ~sel.words_[k]) | (value.words_[k] & sel.words_[k]);
}

std::string BitVector::to_string() const {
    std::string s(width_, '0');
    for (std::size_t i = 0; i < width_; ++i)
        if (test(i)) s[i] = '1';
    return s;
}

void BitVector::clear_padding() {
    if (width_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (width_ % 64)) - 1;
}

}  // namespace cpm
