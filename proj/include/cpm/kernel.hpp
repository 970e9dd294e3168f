#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cpm/computable.hpp"

namespace cpm {

// Odd-length weight vector indexed -r..+r. Index 0 is the PE's own
// neighboring layer, -1 its left neighbor's, +1 its right neighbor's.
class Kernel1D {
public:
    Kernel1D() : taps_{0} {}
    explicit Kernel1D(std::vector<std::int64_t> taps);

    static Kernel1D unit() { return Kernel1D({1}); }
    static Kernel1D zero() { return Kernel1D(); }

    std::size_t radius() const { return taps_.size() / 2; }
    // Weight at offset i; zero outside the span.
    std::int64_t at(std::ptrdiff_t i) const;
    const std::vector<std::int64_t>& taps() const { return taps_; }
    std::string to_string() const;

    // Equality ignores zero padding at the ends.
    friend bool operator==(const Kernel1D& a, const Kernel1D& b);

private:
    std::vector<std::int64_t> taps_;
};

// Pointwise sum: C[i] = A[i] + B[i].
Kernel1D operator+(const Kernel1D& a, const Kernel1D& b);
// Result of applying B to the output of A: C[i] = sum_k A[k] B[i - k].
Kernel1D compose(const Kernel1D& a, const Kernel1D& b);

// (2ry+1) x (2rx+1) weights, row-major from top (dy = -ry) to bottom.
// dx < 0 is the left side and dy < 0 the top side.
class Kernel2D {
public:
    Kernel2D() : rx_(0), ry_(0), taps_{0} {}
    Kernel2D(std::size_t rx, std::size_t ry, std::vector<std::int64_t> taps);

    static Kernel2D row(const Kernel1D& k);
    static Kernel2D column(const Kernel1D& k);

    std::size_t rx() const { return rx_; }
    std::size_t ry() const { return ry_; }
    std::int64_t at(std::ptrdiff_t dx, std::ptrdiff_t dy) const;
    const std::vector<std::int64_t>& taps() const { return taps_; }
    std::string to_string() const;

    friend bool operator==(const Kernel2D& a, const Kernel2D& b);

private:
    std::size_t rx_, ry_;
    std::vector<std::int64_t> taps_;
};

Kernel2D operator+(const Kernel2D& a, const Kernel2D& b);
Kernel2D compose(const Kernel2D& a, const Kernel2D& b);

// Algebraic value of a stencil schedule that starts with the input in nb.
// Accepted steps: op := nb or a neighbor's nb, nb := op, exchange op <-> nb,
// op +=/-= nb or a neighbor's nb, op := 0. Anything else is a PlanError.
Kernel2D plan_value(const std::vector<MacroOp>& plan);

// Neighbor reads past the edge see zero. A plan is edge exact when every
// such read targets a kernel with no taps beyond that edge; its result then
// equals zero-padded convolution at every PE, not only in the interior.
bool edge_exact(const std::vector<MacroOp>& plan);

// Built-in schedules.
std::vector<MacroOp> plan_gauss3();   // (1 2 1), 4 steps, edge exact
std::vector<MacroOp> plan_gauss5();   // (1 2 4 2 1), 7 steps, interior only
std::vector<MacroOp> plan_gauss9();   // 3 x 3 (1 2 1) outer product, 8 steps, edge exact

}  // namespace cpm
