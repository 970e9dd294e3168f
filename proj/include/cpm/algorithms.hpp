#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpm/computable.hpp"
#include "cpm/kernel.hpp"

namespace cpm {

// Register roles shared by the algorithms. Input data always starts in nb,
// the neighboring layer that adjacent PEs can read. Data registers d0..d3
// are scratch and are overwritten.
//
// Values are W-bit words. Signed results (stencils with negative taps, line
// detection) are two's complement and sign-extended when reported.

struct AlgorithmReport {
    std::string algorithm;
    std::map<std::string, std::uint64_t> params;  // N, Nx, Ny, M, Mx, My, D
    CycleLedger ledger_delta;                      // everything this run consumed
    std::vector<std::pair<std::string, CycleLedger>> phases;

    std::vector<std::int64_t> values;  // per-PE payload where one exists
    std::vector<bool> flags;           // per-PE flags (threshold, validity)
    std::vector<std::size_t> labels;   // per-PE index into `slopes`
    std::optional<std::int64_t> scalar;
    std::optional<std::size_t> address;
    std::string direction;             // sorting: "ascending" or "descending"
    std::vector<std::pair<int, int>> slopes;

    const CycleLedger& phase(const std::string& name) const;
};

enum class Order { ascending, descending };
enum class Extremum { min, max };

std::int64_t sign_extend(std::uint64_t v, std::size_t width);

// Stencils. The report's phase "plan" excludes the activation cycle.
AlgorithmReport run_local_op(ComputableMemory& mem, const Kernel1D& kernel, const std::vector<MacroOp>& plan);
AlgorithmReport run_local_op(ComputableMemory& mem, const Kernel2D& kernel, const std::vector<MacroOp>& plan);

// Sectioned reductions: concurrent section passes, then a serial combine of
// the section results over the exclusive bus, one instruction cycle each.
AlgorithmReport sum_1d(ComputableMemory& mem, std::size_t m);
AlgorithmReport sum_2d(ComputableMemory& mem, std::size_t mx, std::size_t my);
AlgorithmReport global_limit(ComputableMemory& mem, std::size_t m, Extremum which);

// Sum of absolute differences at every placement; values[p] holds SAD(p)
// for valid placements. Phase "search" covers the SAD sweep, phase "select"
// the bit-serial minimum search and witness.
AlgorithmReport template_search_1d(ComputableMemory& mem, const std::vector<std::uint64_t>& tmpl);
AlgorithmReport template_search_2d(ComputableMemory& mem, const std::vector<std::uint64_t>& tmpl,
                                   std::size_t mx, std::size_t my);

// Sorting on a 1-D array.
std::size_t count_disorder(ComputableMemory& mem, Order order);
void local_exchange_round(ComputableMemory& mem, std::size_t parity, Order order);

enum class DefectKind { peak, valley, fault };
// A peak is an item larger than its sorted surroundings, a valley a smaller
// one, in either order; a fault is an exchanged adjacent pair.
struct Defect {
    std::size_t address;  // peak or valley item; the left item of a fault
    DefectKind kind;
};
struct DefectScan {
    std::vector<Defect> defects;
    bool reliable = true;
};
std::string to_string(DefectKind k);
DefectScan classify_defects(ComputableMemory& mem, Order order = Order::ascending);

AlgorithmReport global_moving_sort(ComputableMemory& mem, Order order = Order::ascending);
AlgorithmReport hybrid_sort(ComputableMemory& mem, std::size_t local_rounds);

AlgorithmReport threshold(ComputableMemory& mem, std::uint64_t value, MacroOp::Cmp cmp);

// Line detection on a 2-D image. The (mx, my) area of a pixel extends to its
// far corner at (x - mx, y - my); a messenger walks from there back to the
// pixel. my == 0 or mx == 0 uses the edge-difference neighbor count.
struct LineSegmentPath {
    std::vector<std::pair<int, int>> cells;  // offsets from the pixel, far corner first
    std::vector<int> signs;                  // +1 add, -1 subtract, 0 unsigned
};
LineSegmentPath line_segment_path(int mx, int my);
AlgorithmReport detect_line_segment(ComputableMemory& mem, int mx, int my);
std::vector<std::pair<int, int>> build_slope_set(std::size_t d);
AlgorithmReport detect_all_lines(ComputableMemory& mem, std::size_t d);

}  // namespace cpm
