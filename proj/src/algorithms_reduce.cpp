#include <algorithm>

#include "algorithms_common.hpp"

namespace cpm {

using namespace detail;

const CycleLedger& AlgorithmReport::phase(const std::string& name) const {
    for (const auto& [n, l] : phases)
        if (n == name) return l;
    throw LookupError("no phase named " + name);
}

std::int64_t sign_extend(std::uint64_t v, std::size_t width) {
    if (width >= 64) return static_cast<std::int64_t>(v);
    const std::uint64_t sign = std::uint64_t{1} << (width - 1);
    v &= word_mask(width);
    return static_cast<std::int64_t>((v ^ sign) - sign);
}

namespace detail {

void complement_nb(ComputableMemory& mem) {
    mem.control().activate_all();
    mem.run_macro(MacroOp::load_immediate(word_mask(mem.width())));
    mem.run_macro(MacroOp::sub(nb()));
    mem.run_macro(MacroOp::copy(nb(), op()));
}

std::uint64_t active_minimum(ComputableMemory& mem) {
    std::uint64_t lo = 0, hi = word_mask(mem.width());
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        mem.run_macro(MacroOp::threshold(MacroOp::Cmp::le, mid));
        if (mem.control().count(mem.m_plane()) > 0) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

}  // namespace detail

namespace {

std::vector<std::int64_t> signed_snapshot(const ComputableMemory& mem, RegRef r) {
    std::vector<std::int64_t> out;
    for (auto v : mem.snapshot(r)) out.push_back(sign_extend(v, mem.width()));
    return out;
}

}  // namespace

AlgorithmReport run_local_op(ComputableMemory& mem, const Kernel1D& kernel, const std::vector<MacroOp>& plan) {
    return run_local_op(mem, Kernel2D::row(kernel), plan);
}

AlgorithmReport run_local_op(ComputableMemory& mem, const Kernel2D& kernel, const std::vector<MacroOp>& plan) {
    if (!(plan_value(plan) == kernel))
        throw PlanError("plan computes " + plan_value(plan).to_string() + ", not " + kernel.to_string());
    need_zero_fill(mem, "a stencil");
    Run run(mem, "local_op");
    auto& rep = run.report();
    rep.params = {{"N", mem.size()}, {"Nx", mem.topology().nx}, {"Ny", mem.topology().ny}};
    mem.control().activate_all();
    run.phase("plan");
    for (const auto& m : plan) mem.run_macro(m);
    rep.values = signed_snapshot(mem, op());
    return run.finish();
}

AlgorithmReport sum_1d(ComputableMemory& mem, std::size_t m) {
    if (m == 0) throw ArgumentError("section size must be positive");
    need_zero_fill(mem, "sum");
    const std::size_t n = mem.size();
    auto& cu = mem.control();
    Run run(mem, "sum_1d");
    run.report().params = {{"N", n}, {"M", m}};

    run.phase("sections");
    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    for (std::size_t k = 1; k < std::min(m, n); ++k) {
        activate(cu, k, n - 1, m);
        mem.run_macro(MacroOp::add(from(Dir::left)));
        mem.run_macro(MacroOp::copy(nb(), op()));
    }

    run.phase("combine");
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < n; s += m) {
        total += mem.exclusive_read(std::min(s + m, n) - 1, nb());
        cu.charge_macro();
    }
    run.report().scalar = static_cast<std::int64_t>(total & word_mask(mem.width()));
    return run.finish();
}

AlgorithmReport sum_2d(ComputableMemory& mem, std::size_t mx, std::size_t my) {
    if (mx == 0 || my == 0) throw ArgumentError("section size must be positive");
    need_2d(mem, "sum_2d");
    need_zero_fill(mem, "sum");
    const std::size_t nx = mem.topology().nx, ny = mem.topology().ny;
    auto& cu = mem.control();
    Run run(mem, "sum_2d");
    run.report().params = {{"N", mem.size()}, {"Nx", nx}, {"Ny", ny}, {"Mx", mx}, {"My", my}};
    // A section larger than the image is the whole image.
    mx = std::min(mx, nx);
    my = std::min(my, ny);

    run.phase("rows");
    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    for (std::size_t k = 1; k < mx; ++k) {
        activate(cu, {k, nx - 1, mx}, {0, ny - 1, 1});
        mem.run_macro(MacroOp::add(from(Dir::left)));
        mem.run_macro(MacroOp::copy(nb(), op()));
    }

    // Every column accumulates upward; only the sections' right-most
    // columns are read afterwards.
    run.phase("columns");
    for (std::size_t k = 1; k < my; ++k) {
        const std::size_t row = my - 1 - k;
        activate(cu, {0, nx - 1, 1}, {row, ny - 1, my});
        mem.run_macro(MacroOp::add(from(Dir::bottom)));
        mem.run_macro(MacroOp::copy(nb(), op()));
    }

    run.phase("combine");
    std::uint64_t total = 0;
    for (std::size_t y = 0; y < ny; y += my)
        for (std::size_t x = 0; x < nx; x += mx) {
            total += mem.exclusive_read(mem.topology().linear(std::min(x + mx, nx) - 1, y), nb());
            cu.charge_macro();
        }
    run.report().scalar = static_cast<std::int64_t>(total & word_mask(mem.width()));
    return run.finish();
}

AlgorithmReport global_limit(ComputableMemory& mem, std::size_t m, Extremum which) {
    if (m == 0) throw ArgumentError("section size must be positive");
    const std::size_t n = mem.size();
    auto& cu = mem.control();
    Run run(mem, which == Extremum::max ? "global_max" : "global_min");
    run.report().params = {{"N", n}, {"M", m}};

    run.phase("sections");
    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    mem.run_macro(MacroOp::copy(d(0), op()));
    for (std::size_t k = 1; k < std::min(m, n); ++k) {
        activate(cu, k, n - 1, m);
        mem.run_macro(MacroOp::compare_lt(from(Dir::left)));
        mem.run_macro(MacroOp::select_if(from(Dir::left), which == Extremum::min));
        mem.run_macro(MacroOp::copy(nb(), op()));
    }

    run.phase("combine");
    std::uint64_t best = 0;
    for (std::size_t s = 0; s < n; s += m) {
        const std::uint64_t v = mem.exclusive_read(std::min(s + m, n) - 1, nb());
        cu.charge_macro();
        if (s == 0 || (which == Extremum::max ? v > best : v < best)) best = v;
    }

    // The priority encoder picks the lowest address holding the limit.
    run.phase("witness");
    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), d(0)));
    mem.run_macro(MacroOp::threshold(MacroOp::Cmp::eq, best));
    run.report().address = cu.first(mem.m_plane());
    run.report().scalar = static_cast<std::int64_t>(best);
    return run.finish();
}

AlgorithmReport threshold(ComputableMemory& mem, std::uint64_t value, MacroOp::Cmp cmp) {
    Run run(mem, "threshold");
    run.report().params = {{"N", mem.size()}};
    mem.control().activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    mem.run_macro(MacroOp::threshold(cmp, value));
    const BitVector& m = mem.m_plane();
    for (std::size_t i = 0; i < mem.size(); ++i) run.report().flags.push_back(m.test(i));
    return run.finish();
}

}  // namespace cpm
