#include "algorithms_common.hpp"

namespace cpm {

using namespace detail;

// Registers: d0 data, d1 template, d2 row sums (2-D), SAD results in d2
// (1-D) or d3 (2-D).

namespace {

// op := |data - template| at every PE, then nb := op.
void difference_plane(ComputableMemory& mem) {
    mem.control().activate_all();
    mem.run_macro(MacroOp::copy(op(), d(0)));
    mem.run_macro(MacroOp::abs_diff(d(1)));
    mem.run_macro(MacroOp::copy(nb(), op()));
}

// Every PE takes the template word of its left neighbor.
void shift_template_right(ComputableMemory& mem) {
    mem.control().activate_all();
    mem.run_macro(MacroOp::copy(op(), d(1)));
    mem.run_macro(MacroOp::copy(nb(), op()));
    mem.run_macro(MacroOp::read_neighbor(Dir::left));
    mem.run_macro(MacroOp::copy(d(1), op()));
}

void select_best(ComputableMemory& mem, Run& run, RegRef results) {
    run.phase("select");
    mem.run_macro(MacroOp::copy(op(), results));
    const std::uint64_t best = active_minimum(mem);
    mem.run_macro(MacroOp::threshold(MacroOp::Cmp::eq, best));
    run.report().scalar = static_cast<std::int64_t>(best);
    run.report().address = mem.control().first(mem.m_plane());
}

}  // namespace

AlgorithmReport template_search_1d(ComputableMemory& mem, const std::vector<std::uint64_t>& tmpl) {
    const std::size_t n = mem.size(), m = tmpl.size();
    if (m == 0) throw ArgumentError("template must not be empty");
    if (m > n) throw ArgumentError("template is larger than the data");
    need_zero_fill(mem, "template search");
    auto& cu = mem.control();
    Run run(mem, "template_search_1d");
    run.report().params = {{"N", n}, {"M", m}};

    run.phase("search");
    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    mem.run_macro(MacroOp::copy(d(0), op()));
    for (std::size_t k = 0; k < m; ++k) {
        activate(cu, k, n - 1, m);
        mem.run_macro(MacroOp::load_immediate(tmpl[k]));
        mem.run_macro(MacroOp::copy(d(1), op()));
    }
    // With the template shifted by s, the windows starting at s, s + m, ...
    // are summed right to left into their first PE.
    for (std::size_t s = 0; s < m; ++s) {
        difference_plane(mem);
        for (std::size_t k = m - 1; k-- > 0;) {
            activate(cu, s + k, n - 1, m);
            mem.run_macro(MacroOp::add(from(Dir::right)));
            mem.run_macro(MacroOp::copy(nb(), op()));
        }
        activate(cu, s, n - 1, m);
        mem.run_macro(MacroOp::copy(d(2), op()));
        if (s + 1 < m) shift_template_right(mem);
    }

    activate(cu, 0, n - m);
    select_best(mem, run, d(2));

    auto& rep = run.report();
    const auto sad = mem.snapshot(d(2));
    for (std::size_t p = 0; p < n; ++p) {
        rep.flags.push_back(p + m <= n);
        rep.values.push_back(p + m <= n ? static_cast<std::int64_t>(sad[p]) : 0);
    }
    return run.finish();
}

AlgorithmReport template_search_2d(ComputableMemory& mem, const std::vector<std::uint64_t>& tmpl,
                                   std::size_t mx, std::size_t my) {
    need_2d(mem, "template_search_2d");
    need_zero_fill(mem, "template search");
    const std::size_t nx = mem.topology().nx, ny = mem.topology().ny;
    if (mx == 0 || my == 0 || tmpl.size() != mx * my)
        throw ArgumentError("template must hold mx * my values");
    if (mx > nx || my > ny) throw ArgumentError("template is larger than the data");
    auto& cu = mem.control();
    const AxisRange all_x{0, nx - 1, 1}, all_y{0, ny - 1, 1};
    Run run(mem, "template_search_2d");
    run.report().params = {{"N", mem.size()}, {"Nx", nx}, {"Ny", ny}, {"Mx", mx}, {"My", my}};

    run.phase("search");
    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    mem.run_macro(MacroOp::copy(d(0), op()));
    for (std::size_t sy = 0; sy < my; ++sy) {
        // Broadcast the template aligned to rows sy, sy + my, ...
        for (std::size_t ty = 0; ty < my; ++ty)
            for (std::size_t tx = 0; tx < mx; ++tx) {
                activate(cu, {tx, nx - 1, mx}, {(ty + sy) % my, ny - 1, my});
                mem.run_macro(MacroOp::load_immediate(tmpl[ty * mx + tx]));
                mem.run_macro(MacroOp::copy(d(1), op()));
            }
        // Row sums of every horizontal placement into d2.
        for (std::size_t sx = 0; sx < mx; ++sx) {
            difference_plane(mem);
            for (std::size_t k = mx - 1; k-- > 0;) {
                activate(cu, {sx + k, nx - 1, mx}, all_y);
                mem.run_macro(MacroOp::add(from(Dir::right)));
                mem.run_macro(MacroOp::copy(nb(), op()));
            }
            activate(cu, {sx, nx - 1, mx}, all_y);
            mem.run_macro(MacroOp::copy(d(2), op()));
            if (sx + 1 < mx) shift_template_right(mem);
        }
        // Column sums of the row sums, bottom to top, at every column.
        cu.activate_all();
        mem.run_macro(MacroOp::copy(op(), d(2)));
        mem.run_macro(MacroOp::copy(nb(), op()));
        for (std::size_t k = my - 1; k-- > 0;) {
            activate(cu, all_x, {sy + k, ny - 1, my});
            mem.run_macro(MacroOp::add(from(Dir::bottom)));
            mem.run_macro(MacroOp::copy(nb(), op()));
        }
        activate(cu, all_x, {sy, ny - 1, my});
        mem.run_macro(MacroOp::copy(d(3), op()));
    }

    activate(cu, {0, nx - mx, 1}, {0, ny - my, 1});
    select_best(mem, run, d(3));

    auto& rep = run.report();
    const auto sad = mem.snapshot(d(3));
    for (std::size_t i = 0; i < mem.size(); ++i) {
        const bool ok = mem.topology().x_of(i) + mx <= nx && mem.topology().y_of(i) + my <= ny;
        rep.flags.push_back(ok);
        rep.values.push_back(ok ? static_cast<std::int64_t>(sad[i]) : 0);
    }
    return run.finish();
}

}  // namespace cpm
