#include <algorithm>

#include "algorithms_common.hpp"

namespace cpm {

using namespace detail;

std::string to_string(DefectKind k) {
    switch (k) {
        case DefectKind::peak: return "peak";
        case DefectKind::valley: return "valley";
        case DefectKind::fault: return "fault";
    }
    return "?";
}

std::size_t count_disorder(ComputableMemory& mem, Order order) {
    const std::size_t n = mem.size();
    if (n < 2) return 0;
    auto& cu = mem.control();
    cu.activate(1, n - 1);
    if (order == Order::ascending) {
        mem.run_macro(MacroOp::copy(op(), nb()));
        mem.run_macro(MacroOp::compare_lt(from(Dir::left)));  // x[i] < x[i-1]
    } else {
        mem.run_macro(MacroOp::read_neighbor(Dir::left));
        mem.run_macro(MacroOp::compare_lt(nb()));  // x[i-1] < x[i]
    }
    return cu.count(mem.m_plane());
}

void local_exchange_round(ComputableMemory& mem, std::size_t parity, Order order) {
    const std::size_t n = mem.size();
    parity %= 2;
    if (n < 2 || parity > n - 2) return;
    auto& cu = mem.control();
    const bool asc = order == Order::ascending;
    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    // Left member of each pair keeps the smaller item (ascending).
    cu.activate(parity, n - 2, 2);
    mem.run_macro(MacroOp::compare_lt(from(Dir::right)));
    mem.run_macro(MacroOp::select_if(from(Dir::right), asc));
    // Right member keeps the larger one.
    cu.activate(parity + 1, n - 1, 2);
    mem.run_macro(MacroOp::compare_lt(from(Dir::left)));
    mem.run_macro(MacroOp::select_if(from(Dir::left), !asc));
    cu.activate_all();
    mem.run_macro(MacroOp::copy(nb(), op()));
}

namespace {

// At every PE j < n-1, d3 bit 1 := x[j+1] < x[j-1]. For a descent at i
// (x[i] > x[i+1]) the bit at i says removing x[i] leaves a descent and the
// bit at i+1 says removing x[i+1] does. Leaves M = descent at PEs 0..n-2
// and nb unchanged.
void defect_flags(ComputableMemory& mem) {
    const std::size_t n = mem.size();
    auto& cu = mem.control();
    cu.activate_all();
    mem.run_macro(MacroOp::copy(op(), nb()));
    mem.run_macro(MacroOp::copy(d(0), op()));
    cu.activate(0, n - 2);
    mem.run_macro(MacroOp::read_neighbor(Dir::right));
    mem.run_macro(MacroOp::compare_lt(from(Dir::left)));
    mem.run_macro(MacroOp::store_match(1));  // copies go through M, so store first
    mem.run_macro(MacroOp::copy(d(3), op()));
    mem.run_macro(MacroOp::read_neighbor(Dir::right));
    mem.run_macro(MacroOp::compare_lt(d(0)));
}

// Classifies the descent at i from its 4-item neighborhood.
std::optional<Defect> classify_at(ComputableMemory& mem, std::size_t i) {
    const std::size_t n = mem.size();
    const bool left_edge = i == 0, right_edge = i + 2 >= n;
    const bool drop_left = !((mem.exclusive_read(i, d(3)) >> 1) & 1u);  // x[i-1] <= x[i+1]
    const bool drop_right = right_edge || !((mem.exclusive_read(i + 1, d(3)) >> 1) & 1u);  // x[i] <= x[i+2]
    if (drop_left && drop_right) {
        if (left_edge == right_edge) return Defect{i, DefectKind::fault};
        return left_edge ? Defect{i + 1, DefectKind::valley} : Defect{i, DefectKind::peak};
    }
    if (drop_right) return Defect{i + 1, DefectKind::valley};
    if (drop_left) return Defect{i, DefectKind::peak};
    return std::nullopt;
}

DefectScan scan_ascending(ComputableMemory& mem) {
    DefectScan out;
    if (mem.size() < 2) return out;
    defect_flags(mem);
    const auto descents = mem.control().enumerate(mem.m_plane()).matched;
    for (std::size_t k = 0; k < descents.size(); ++k) {
        if (k + 1 < descents.size() && descents[k + 1] - descents[k] < 4) out.reliable = false;
        if (auto d = classify_at(mem, descents[k])) out.defects.push_back(*d);
        else out.reliable = false;
    }
    return out;
}

void swap_pair(ComputableMemory& mem, std::size_t i) {
    auto& cu = mem.control();
    cu.activate(i, i);
    mem.run_macro(MacroOp::read_neighbor(Dir::right));
    cu.activate(i + 1, i + 1);
    mem.run_macro(MacroOp::read_neighbor(Dir::left));
    cu.activate(i, i + 1);
    mem.run_macro(MacroOp::copy(nb(), op()));
}

// First address in [lo, hi] holding an item greater than v.
std::optional<std::size_t> first_greater(ComputableMemory& mem, std::size_t lo, std::size_t hi, std::uint64_t v) {
    activate(mem.control(), lo, hi);
    mem.run_macro(MacroOp::copy(op(), nb()));
    mem.run_macro(MacroOp::threshold(MacroOp::Cmp::gt, v));
    return mem.control().first(mem.m_plane());
}

void fix(ComputableMemory& mem, const Defect& d) {
    const std::size_t n = mem.size();
    auto& cu = mem.control();
    switch (d.kind) {
        case DefectKind::fault: swap_pair(mem, d.address); break;
        case DefectKind::peak: {
            // Move left of the first larger item to its right.
            const std::size_t i = d.address;
            const std::uint64_t a = mem.exclusive_read(i, nb());
            const std::size_t j = first_greater(mem, i + 1, n - 1, a).value_or(n);
            cu.activate(i, j - 2);
            mem.run_macro(MacroOp::read_neighbor(Dir::right));
            mem.run_macro(MacroOp::copy(nb(), op()));
            mem.exclusive_write(j - 1, nb(), a);
            break;
        }
        case DefectKind::valley: {
            // Move in front of the first larger item to its left.
            const std::size_t v = d.address;
            const std::uint64_t b = mem.exclusive_read(v, nb());
            const std::size_t j = first_greater(mem, 0, v - 1, b).value_or(v);
            cu.activate(j + 1, v);
            mem.run_macro(MacroOp::read_neighbor(Dir::left));
            mem.run_macro(MacroOp::copy(nb(), op()));
            mem.exclusive_write(j, nb(), b);
            break;
        }
    }
}

// Sorts ascending; descending runs on complemented items.
void moving_sort(ComputableMemory& mem, Order order, std::uint64_t& defects_fixed, std::uint64_t& fallback_rounds) {
    const std::size_t n = mem.size();
    if (n < 2) return;
    if (order == Order::descending) complement_nb(mem);
    std::size_t parity = 0;
    while (count_disorder(mem, Order::ascending) > 0) {
        // The right-most defect first: a peak then only moves into sorted
        // items and cannot land next to another defect.
        defect_flags(mem);
        const auto last = mem.control().last(mem.m_plane());
        std::optional<Defect> d = last ? classify_at(mem, *last) : std::nullopt;
        if (d) {
            fix(mem, *d);
            ++defects_fixed;
            continue;
        }
        // Too dense to classify: thin out the disorder with local rounds.
        do {
            local_exchange_round(mem, parity, Order::ascending);
            local_exchange_round(mem, parity + 1, Order::ascending);
            fallback_rounds += 2;
        } while (count_disorder(mem, Order::ascending) >= std::max<std::size_t>(1, n / 8));
    }
    if (order == Order::descending) complement_nb(mem);
}

std::vector<std::int64_t> items(const ComputableMemory& mem) {
    std::vector<std::int64_t> out;
    for (auto v : mem.snapshot(nb())) out.push_back(static_cast<std::int64_t>(v));
    return out;
}

}  // namespace

DefectScan classify_defects(ComputableMemory& mem, Order order) {
    if (order == Order::ascending) return scan_ascending(mem);
    complement_nb(mem);
    DefectScan s = scan_ascending(mem);
    complement_nb(mem);
    // Complementing turns local maxima into minima; report the data's shape.
    for (auto& d : s.defects) {
        if (d.kind == DefectKind::peak) d.kind = DefectKind::valley;
        else if (d.kind == DefectKind::valley) d.kind = DefectKind::peak;
    }
    return s;
}

AlgorithmReport global_moving_sort(ComputableMemory& mem, Order order) {
    Run run(mem, "global_moving_sort");
    std::uint64_t fixed = 0, rounds = 0;
    moving_sort(mem, order, fixed, rounds);
    auto& rep = run.report();
    rep.params = {{"N", mem.size()}, {"defects_fixed", fixed}, {"fallback_rounds", rounds}};
    rep.direction = order == Order::ascending ? "ascending" : "descending";
    rep.values = items(mem);
    return run.finish();
}

AlgorithmReport hybrid_sort(ComputableMemory& mem, std::size_t local_rounds) {
    Run run(mem, "hybrid_sort");
    auto& rep = run.report();
    const std::size_t n = mem.size();
    std::uint64_t fixed = 0, rounds = 0;
    Order order = Order::ascending;
    if (n >= 2) {
        run.phase("direction");
        const std::size_t up = count_disorder(mem, Order::ascending);
        const std::size_t down = count_disorder(mem, Order::descending);
        if (down < up) order = Order::descending;
        run.phase("local");
        for (std::size_t t = 0; t < local_rounds; ++t) local_exchange_round(mem, t, order);
        run.phase("global");
        moving_sort(mem, order, fixed, rounds);
    }
    rep.params = {{"N", n}, {"M", local_rounds}, {"defects_fixed", fixed}, {"fallback_rounds", rounds}};
    rep.direction = order == Order::ascending ? "ascending" : "descending";
    rep.values = items(mem);
    return run.finish();
}

}  // namespace cpm
