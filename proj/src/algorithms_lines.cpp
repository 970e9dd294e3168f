#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "algorithms_common.hpp"

namespace cpm {

using namespace detail;

// Registers: d0 image, d1 edge differences or |value|, d2 best |value|,
// d3 best slope index; nb carries the messenger.

LineSegmentPath line_segment_path(int mx, int my) {
    if (mx == 0 || my == 0) throw ArgumentError("axis-aligned segments have no messenger path");
    const long a = std::labs(mx), b = std::labs(my);
    const int ux = mx > 0 ? -1 : 1, uy = my > 0 ? -1 : 1;
    // Cells from the pixel toward the far corner, staying closest to the line.
    std::vector<std::pair<int, int>> cells{{0, 0}};
    long i = 0, j = 0;
    while (i < a || j < b) {
        const long ex = std::labs(a * j - b * (i + 1)), ey = std::labs(a * (j + 1) - b * i);
        if (j == b || (i < a && ex <= ey)) ++i;
        else ++j;
        cells.emplace_back(static_cast<int>(ux * i), static_cast<int>(uy * j));
    }
    std::reverse(cells.begin(), cells.end());

    LineSegmentPath path;
    path.cells = cells;
    path.signs.assign(cells.size(), 0);
    // The messenger walks along (mx, my); a positive cross product with a
    // cell offset puts the cell on its left. Cells on the line join the
    // smaller side, + first, so flat images cancel where the count allows.
    int balance = 0;
    std::vector<std::size_t> on_line;
    for (std::size_t k = 1; k + 1 < cells.size(); ++k) {
        const long cross = static_cast<long>(mx) * cells[k].second - static_cast<long>(my) * cells[k].first;
        path.signs[k] = cross > 0 ? 1 : cross < 0 ? -1 : 0;
        if (cross == 0) on_line.push_back(k);
        balance += path.signs[k];
    }
    for (std::size_t k : on_line) {
        path.signs[k] = balance > 0 ? -1 : 1;
        balance += path.signs[k];
    }
    return path;
}

namespace {

Dir read_from(int dx, int dy) {
    if (dx == 1) return Dir::left;
    if (dx == -1) return Dir::right;
    return dy == 1 ? Dir::top : Dir::bottom;
}

struct Region {
    AxisRange x, y;
    bool empty;
};

// Pixels whose area lies inside the image.
Region valid_region(const Topology& t, int mx, int my) {
    const long nx = static_cast<long>(t.nx), ny = static_cast<long>(t.ny);
    long x0 = std::max(0L, static_cast<long>(mx)), x1 = std::min(nx - 1, nx - 1 + mx);
    long y0 = std::max(0L, static_cast<long>(my)), y1 = std::min(ny - 1, ny - 1 + my);
    // The edge-difference count also needs the rows (columns) on both sides.
    if (my == 0) y0 = std::max(y0, 1L), y1 = std::min(y1, ny - 2);
    if (mx == 0) x0 = std::max(x0, 1L), x1 = std::min(x1, nx - 2);
    const bool empty = x0 > x1 || y0 > y1;
    auto u = [](long v) { return static_cast<std::size_t>(std::max(0L, v)); };
    return {{u(x0), u(x1), 1}, {u(y0), u(y1), 1}, empty};
}

// Leaves the segment value in op with every PE active. The image is in d0
// and nb is free.
void segment(ComputableMemory& mem, int mx, int my) {
    auto& cu = mem.control();
    cu.activate_all();
    if (mx == 0 || my == 0) {
        // Difference across the line, then summed over the pixel and its
        // neighbors along the line.
        const bool horizontal = my == 0;
        const int len = std::abs(horizontal ? mx : my);
        mem.run_macro(MacroOp::copy(op(), d(0)));
        mem.run_macro(MacroOp::copy(nb(), op()));
        mem.run_macro(MacroOp::read_neighbor(horizontal ? Dir::top : Dir::left));
        mem.run_macro(MacroOp::sub(from(horizontal ? Dir::bottom : Dir::right)));
        mem.run_macro(MacroOp::copy(d(1), op()));
        mem.run_macro(MacroOp::load_immediate(0));
        const Dir dir = horizontal ? (mx > 0 ? Dir::left : Dir::right) : (my > 0 ? Dir::top : Dir::bottom);
        for (int k = len; k >= 0; --k) {
            mem.run_macro(MacroOp::add(d(1)));
            if (k == 0) break;
            mem.run_macro(MacroOp::copy(nb(), op()));
            mem.run_macro(MacroOp::read_neighbor(dir));
        }
        return;
    }
    const LineSegmentPath path = line_segment_path(mx, my);
    mem.run_macro(MacroOp::load_immediate(0));
    for (std::size_t k = 0; k + 1 < path.cells.size(); ++k) {
        if (path.signs[k] > 0) mem.run_macro(MacroOp::add(d(0)));
        if (path.signs[k] < 0) mem.run_macro(MacroOp::sub(d(0)));
        const int dx = path.cells[k + 1].first - path.cells[k].first;
        const int dy = path.cells[k + 1].second - path.cells[k].second;
        mem.run_macro(MacroOp::copy(nb(), op()));
        mem.run_macro(MacroOp::read_neighbor(read_from(dx, dy)));
    }
}

}  // namespace

AlgorithmReport detect_line_segment(ComputableMemory& mem, int mx, int my) {
    need_2d(mem, "line detection");
    if (mx == 0 && my == 0) throw ArgumentError("segment area must not be empty");
    const Topology& t = mem.topology();
    if (static_cast<std::size_t>(std::abs(mx)) >= t.nx || static_cast<std::size_t>(std::abs(my)) >= t.ny)
        throw ArgumentError("segment area exceeds the image");
    Run run(mem, "detect_line_segment");
    auto& rep = run.report();
    rep.params = {{"N", mem.size()}, {"Nx", t.nx}, {"Ny", t.ny},
                  {"Mx", static_cast<std::uint64_t>(std::abs(mx))}, {"My", static_cast<std::uint64_t>(std::abs(my))}};
    rep.slopes = {{mx, my}};
    mem.control().activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    mem.run_macro(MacroOp::copy(d(0), op()));
    segment(mem, mx, my);

    const Region r = valid_region(t, mx, my);
    const auto raw = mem.snapshot(op());
    for (std::size_t i = 0; i < mem.size(); ++i) {
        const std::size_t x = t.x_of(i), y = t.y_of(i);
        const bool ok = !r.empty && x >= r.x.start && x <= r.x.end && y >= r.y.start && y <= r.y.end;
        rep.flags.push_back(ok);
        rep.values.push_back(sign_extend(raw[i], mem.width()));
    }
    return run.finish();
}

std::vector<std::pair<int, int>> build_slope_set(std::size_t d) {
    if (d == 0) throw ArgumentError("radius must be at least 1");
    const double r = static_cast<double>(d), band = std::sqrt(2.0) / 2;
    std::vector<std::pair<int, int>> out;
    const int lim = static_cast<int>(d) + 1;
    for (int y = 0; y <= lim; ++y)
        for (int x = 0; x <= lim; ++x)
            if ((x || y) && std::abs(std::hypot(x, y) - r) <= band) out.emplace_back(x, y);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::atan2(a.second, a.first) < std::atan2(b.second, b.first);
    });
    return out;
}

AlgorithmReport detect_all_lines(ComputableMemory& mem, std::size_t radius) {
    need_2d(mem, "line detection");
    const Topology& t = mem.topology();
    auto& cu = mem.control();
    // The quarter circle plus its mirror covers every orientation.
    std::vector<std::pair<int, int>> slopes;
    for (auto [x, y] : build_slope_set(radius)) {
        if (static_cast<std::size_t>(x) >= t.nx || static_cast<std::size_t>(y) >= t.ny) continue;
        slopes.emplace_back(x, y);
        if (x > 0 && y > 0) slopes.emplace_back(-x, y);
    }
    Run run(mem, "detect_all_lines");
    auto& rep = run.report();
    rep.params = {{"N", mem.size()}, {"Nx", t.nx}, {"Ny", t.ny}, {"D", radius}};
    rep.slopes = slopes;

    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    mem.run_macro(MacroOp::copy(d(0), op()));
    mem.run_macro(MacroOp::load_immediate(0));
    mem.run_macro(MacroOp::copy(d(2), op()));
    mem.run_macro(MacroOp::copy(d(3), op()));
    for (std::size_t s = 0; s < slopes.size(); ++s) {
        const auto [mx, my] = slopes[s];
        segment(mem, mx, my);
        mem.run_macro(MacroOp::abs());
        mem.run_macro(MacroOp::copy(d(1), op()));
        mem.run_macro(MacroOp::load_immediate(s));
        mem.run_macro(MacroOp::copy(nb(), op()));
        const Region r = valid_region(t, mx, my);
        if (r.empty) continue;
        // Strictly larger values win, so ties keep the earlier slope.
        cu.activate_2d(r.x, r.y);
        mem.run_macro(MacroOp::copy(op(), d(2)));
        mem.run_macro(MacroOp::compare_lt(d(1)));
        mem.run_macro(MacroOp::select_if(d(1)));
        mem.run_macro(MacroOp::copy(d(2), op()));
        mem.run_macro(MacroOp::copy(op(), d(3)));
        mem.run_macro(MacroOp::select_if(nb(), false, true));
        mem.run_macro(MacroOp::copy(d(3), op()));
    }

    const auto best = mem.snapshot(d(2));
    const auto label = mem.snapshot(d(3));
    for (std::size_t i = 0; i < mem.size(); ++i) {
        rep.values.push_back(static_cast<std::int64_t>(best[i]));
        rep.labels.push_back(static_cast<std::size_t>(label[i]));
    }
    return run.finish();
}

}  // namespace cpm
