#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cpm/core.hpp"

namespace cpm {

// B = M + C(VD + !V!D) + !C V
inline bool alu_eval(bool m, bool c, bool v, bool d) { return m || (c ? v == d : v); }

enum class CondSource { op_bit, reg_bit, s_bit, c_bit };

// A register a micro or macro instruction can name. Only `neighbor` reads
// across PEs, and only the neighbor's neighboring register.
struct RegRef {
    enum class Kind { op, nb, data, neighbor };
    Kind kind = Kind::op;
    std::size_t index = 0;  // data register number
    Dir dir = Dir::left;    // neighbor direction

    static RegRef op() { return {Kind::op, 0, Dir::left}; }
    static RegRef nb() { return {Kind::nb, 0, Dir::left}; }
    static RegRef data(std::size_t i) { return {Kind::data, i, Dir::left}; }
    static RegRef neighbor(Dir d) { return {Kind::neighbor, 0, d}; }

    friend bool operator==(const RegRef&, const RegRef&) = default;
};

std::string to_string(const RegRef& r);

namespace wb {
inline constexpr unsigned b_to_m = 1;
inline constexpr unsigned m_to_s = 2;
inline constexpr unsigned m_to_c = 4;
inline constexpr unsigned m_to_opbit = 8;
inline constexpr unsigned opbit_to_regbit = 16;
}  // namespace wb

struct MicroInstruction {
    CondSource cond = CondSource::op_bit;
    bool negate = false;   // condition multiplexer picks the inverted line
    bool compare = false;  // C
    bool datum = false;    // D
    // When false the M term is held low for this step. Without it B >= M
    // always, and nothing could ever clear M.
    bool chain_m = true;
    std::size_t op_bit = 0;
    RegRef reg = RegRef::data(0);
    std::size_t reg_bit = 0;
    unsigned writeback = 0;
};

// Text form used by the micro trace, one step per line:
//   cond=<op|reg|s|c>[~] C=<0|1> D=<0|1> M=<on|off> op[<i>] reg=<name>[<j>] wb=<list>
std::string to_string(const MicroInstruction& mi);

struct MacroOp {
    enum class Code {
        copy,            // dst := src; one side must be op
        exchange,        // op <-> src
        add,             // op := op + src
        sub,             // op := op - src
        abs_diff,        // op := |op - src|
        abs,             // op := |op| as a signed word
        compare_lt,      // M := op < src
        compare_eq,      // M := op == src
        threshold,       // M := pred(op, immediate)
        select_if,       // op := M ? src : op   (inverted: !M); keep_status reuses S
        load_immediate,  // op := immediate
        read_neighbor,   // op := neighbor(dir).nb
        store_match,     // op[bit] := M
        mul,             // op := op * src (mod 2^W), uses data registers scratch, scratch + 1
    };
    enum class Cmp { lt, le, gt, ge, eq, ne };

    Code code = Code::copy;
    RegRef src = RegRef::op();
    RegRef dst = RegRef::op();
    std::uint64_t immediate = 0;
    Cmp cmp = Cmp::lt;
    bool invert = false;
    bool keep_status = false;
    std::size_t bit = 0;
    std::size_t scratch = 0;

    static MacroOp copy(RegRef dst, RegRef src) { MacroOp m; m.code = Code::copy; m.dst = dst; m.src = src; return m; }
    static MacroOp exchange(RegRef with) { MacroOp m; m.code = Code::exchange; m.src = with; return m; }
    static MacroOp add(RegRef src) { MacroOp m; m.code = Code::add; m.src = src; return m; }
    static MacroOp sub(RegRef src) { MacroOp m; m.code = Code::sub; m.src = src; return m; }
    static MacroOp abs_diff(RegRef src) { MacroOp m; m.code = Code::abs_diff; m.src = src; return m; }
    static MacroOp abs() { MacroOp m; m.code = Code::abs; return m; }
    static MacroOp compare_lt(RegRef src) { MacroOp m; m.code = Code::compare_lt; m.src = src; return m; }
    static MacroOp compare_eq(RegRef src) { MacroOp m; m.code = Code::compare_eq; m.src = src; return m; }
    static MacroOp threshold(Cmp c, std::uint64_t imm) { MacroOp m; m.code = Code::threshold; m.cmp = c; m.immediate = imm; return m; }
    static MacroOp select_if(RegRef src, bool invert = false, bool keep_status = false) { MacroOp m; m.code = Code::select_if; m.src = src; m.invert = invert; m.keep_status = keep_status; return m; }
    static MacroOp load_immediate(std::uint64_t imm) { MacroOp m; m.code = Code::load_immediate; m.immediate = imm; return m; }
    static MacroOp read_neighbor(Dir d) { MacroOp m; m.code = Code::read_neighbor; m.src = RegRef::neighbor(d); return m; }
    static MacroOp store_match(std::size_t bit) { MacroOp m; m.code = Code::store_match; m.bit = bit; return m; }
    static MacroOp mul(RegRef src, std::size_t scratch) { MacroOp m; m.code = Code::mul; m.src = src; m.scratch = scratch; return m; }
};

std::string to_string(MacroOp::Code c);

struct ComputableConfig {
    std::size_t word_width = 32;
    std::size_t data_regs = 4;
    std::uint64_t edge_fill = 0;  // neighbor register value seen past the edge
};

// Content computable memory with bit-serial PEs. Registers are stored as bit
// planes: plane j of a register holds bit j of that register at every PE, so a
// micro step is a handful of word-wide logic operations.
class ComputableMemory {
public:
    ComputableMemory(Topology topo, ComputableConfig cfg = {});

    ControlUnit& control() { return control_; }
    const ControlUnit& control() const { return control_; }
    const Topology& topology() const { return control_.topology(); }
    std::size_t size() const { return control_.size(); }
    std::size_t width() const { return cfg_.word_width; }
    const ComputableConfig& config() const { return cfg_; }

    // Exclusive bus access to the addressable registers (data regs and nb).
    std::uint64_t exclusive_read(std::size_t addr, RegRef reg);
    void exclusive_write(std::size_t addr, RegRef reg, std::uint64_t value);
    // Bulk load through the exclusive bus: one op per PE.
    void load(RegRef reg, const std::vector<std::uint64_t>& values);

    // Simulator introspection, never charged.
    std::uint64_t peek(std::size_t addr, RegRef reg) const;
    std::vector<std::uint64_t> snapshot(RegRef reg) const;
    void poke(std::size_t addr, RegRef reg, std::uint64_t value);
    bool m_bit(std::size_t addr) const { return m_.test(addr); }
    bool s_bit(std::size_t addr) const { return s_.test(addr); }
    bool c_bit(std::size_t addr) const { return c_.test(addr); }
    void poke_flags(std::size_t addr, bool m, bool s, bool c);

    // Latched match lines: B of the last micro step at each active PE.
    const BitVector& match_lines() const { return match_; }
    const BitVector& m_plane() const { return m_; }

    // One micro cycle.
    void micro_step(const MicroInstruction& mi);
    // One macro cycle plus the expansion length in micro cycles.
    void run_macro(const MacroOp& op);
    std::vector<MicroInstruction> expand(const MacroOp& op) const;

    // Echo every executed micro step to `out` (nullptr disables).
    void set_trace(std::ostream* out) { trace_ = out; }

private:
    std::vector<MicroInstruction> expand_mul(const MacroOp& op) const;
    std::vector<BitVector>& planes(RegRef r);
    const std::vector<BitVector>& planes(RegRef r) const;
    BitVector read_plane(const RegRef& r, std::size_t bit) const;
    void check_reg(const RegRef& r, bool writable) const;
    std::uint64_t word_mask() const;

    ControlUnit control_;
    ComputableConfig cfg_;
    std::vector<std::vector<BitVector>> data_;
    std::vector<BitVector> nb_;
    std::vector<BitVector> op_;
    BitVector m_, s_, c_, match_;
    std::vector<BitVector> edge_;  // per Dir: PEs without that neighbor
    std::ostream* trace_ = nullptr;
};

}  // namespace cpm
