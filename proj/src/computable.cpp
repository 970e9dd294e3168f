#include "cpm/computable.hpp"

#include <sstream>

namespace cpm {

namespace {

// Per-bit micro programs found by exhaustive search over single-bit PE
// states (tools/micro_search.cpp regenerates them). Each code packs one
// MicroInstruction with C = 0:
//   bits 0-3  writeback: 1 B->M, 2 M->S, 4 M->C, 8 M->opbit
//   bits 4-5  condition: 0 op bit, 1 reg bit, 2 s, 3 c
//   bit 7     negate the condition
//   bit 8     M participates in B
//   bit 9     writeback op bit -> reg bit
// a = op bit, b = reg bit, c = carry/borrow, s = status.
constexpr unsigned kAdd[] = {129, 184, 17, 133, 152};  // a += b + c, c = carry
constexpr unsigned kSub[] = {129, 56, 17, 133, 24};    // a -= b + c, c = borrow
constexpr unsigned kLt[] = {129, 152, 133, 152};        // c = borrow of a - b - c; a kept
constexpr unsigned kEq[] = {1, 147, 385, 18, 36};      // c |= a != b; a kept
constexpr unsigned kNeg[] = {129, 40, 184, 129, 188};  // if s & c: a = !a; c |= a (old a); s kept

constexpr unsigned kClearC[] = {177, 52};
constexpr unsigned kMToS[] = {34, 162};
constexpr unsigned kMFromC = 49;
constexpr unsigned kMFromNotC = 177;

MicroInstruction decode(unsigned code, RegRef reg, std::size_t op_bit, std::size_t reg_bit) {
    static constexpr CondSource kSrc[] = {CondSource::op_bit, CondSource::reg_bit, CondSource::s_bit,
                                          CondSource::c_bit};
    MicroInstruction mi;
    mi.cond = kSrc[(code >> 4) & 3];
    mi.negate = (code >> 7) & 1;
    mi.chain_m = (code >> 8) & 1;
    mi.writeback = (code & 15) | (((code >> 9) & 1) ? wb::opbit_to_regbit : 0);
    mi.op_bit = op_bit;
    mi.reg = reg;
    mi.reg_bit = reg_bit;
    return mi;
}

class Builder {
public:
    explicit Builder(RegRef reg) : reg_(reg) {}

    void emit(unsigned code, std::size_t op_bit = 0, std::size_t reg_bit = 0) {
        out_.push_back(decode(code, reg_, op_bit, reg_bit));
    }
    void emit(const MicroInstruction& mi) { out_.push_back(mi); }
    template <std::size_t N>
    void each(const unsigned (&codes)[N], std::size_t op_bit, std::size_t reg_bit) {
        for (auto c : codes) emit(c, op_bit, reg_bit);
    }
    template <std::size_t N>
    void once(const unsigned (&codes)[N]) {
        for (auto c : codes) emit(c);
    }
    std::vector<MicroInstruction> take() { return std::move(out_); }

private:
    RegRef reg_;
    std::vector<MicroInstruction> out_;
};

const char* cond_name(CondSource c) {
    switch (c) {
        case CondSource::op_bit: return "op";
        case CondSource::reg_bit: return "reg";
        case CondSource::s_bit: return "s";
        case CondSource::c_bit: return "c";
    }
    return "?";
}

}  // namespace

std::string to_string(const RegRef& r) {
    switch (r.kind) {
        case RegRef::Kind::op: return "op";
        case RegRef::Kind::nb: return "nb";
        case RegRef::Kind::data: return "d" + std::to_string(r.index);
        case RegRef::Kind::neighbor:
            switch (r.dir) {
                case Dir::left: return "left.nb";
                case Dir::right: return "right.nb";
                case Dir::top: return "top.nb";
                case Dir::bottom: return "bottom.nb";
            }
    }
    return "?";
}

std::string to_string(const MicroInstruction& mi) {
    std::ostringstream os;
    os << "cond=" << cond_name(mi.cond) << (mi.negate ? "~" : "") << " C=" << mi.compare
       << " D=" << mi.datum << " M=" << (mi.chain_m ? "on" : "off") << " op[" << mi.op_bit
       << "] reg=" << to_string(mi.reg) << "[" << mi.reg_bit << "] wb=";
    const char* sep = "";
    auto put = [&](unsigned flag, const char* name) {
        if (mi.writeback & flag) {
            os << sep << name;
            sep = ",";
        }
    };
    put(wb::b_to_m, "B>M");
    put(wb::m_to_s, "M>S");
    put(wb::m_to_c, "M>C");
    put(wb::m_to_opbit, "M>op");
    put(wb::opbit_to_regbit, "op>reg");
    if (!mi.writeback) os << "-";
    return os.str();
}

std::string to_string(MacroOp::Code c) {
    switch (c) {
        case MacroOp::Code::copy: return "copy";
        case MacroOp::Code::exchange: return "exchange";
        case MacroOp::Code::add: return "add";
        case MacroOp::Code::sub: return "sub";
        case MacroOp::Code::abs_diff: return "abs_diff";
        case MacroOp::Code::abs: return "abs";
        case MacroOp::Code::compare_lt: return "compare_lt";
        case MacroOp::Code::compare_eq: return "compare_eq";
        case MacroOp::Code::threshold: return "threshold";
        case MacroOp::Code::select_if: return "select_if";
        case MacroOp::Code::load_immediate: return "load_immediate";
        case MacroOp::Code::read_neighbor: return "read_neighbor";
        case MacroOp::Code::store_match: return "store_match";
        case MacroOp::Code::mul: return "mul";
    }
    return "?";
}

ComputableMemory::ComputableMemory(Topology topo, ComputableConfig cfg)
    : control_(topo), cfg_(cfg) {
    if (cfg_.word_width == 0 || cfg_.word_width > 64)
        throw ConfigError("word width must be 1..64 bits");
    if (cfg_.data_regs < 2) throw ConfigError("computable PEs need at least 2 data registers");
    const std::size_t n = topo.size();
    const BitVector zero(n);
    data_.assign(cfg_.data_regs, std::vector<BitVector>(cfg_.word_width, zero));
    nb_.assign(cfg_.word_width, zero);
    op_.assign(cfg_.word_width, zero);
    m_ = s_ = c_ = match_ = zero;
    edge_.assign(4, zero);
    for (std::size_t i = 0; i < n; ++i)
        for (int d = 0; d < 4; ++d)
            if (!topo.neighbor(i, static_cast<Dir>(d))) edge_[d].set(i);
}

std::uint64_t ComputableMemory::word_mask() const {
    return cfg_.word_width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cfg_.word_width) - 1;
}

void ComputableMemory::check_reg(const RegRef& r, bool writable) const {
    if (r.kind == RegRef::Kind::data && r.index >= cfg_.data_regs)
        throw InstructionError("no data register d" + std::to_string(r.index));
    if (writable && r.kind == RegRef::Kind::neighbor)
        throw InstructionError("a PE cannot write its neighbor's register");
    if (r.kind == RegRef::Kind::neighbor && !topology().is_2d() &&
        (r.dir == Dir::top || r.dir == Dir::bottom))
        throw InstructionError("1-D PEs have no top or bottom neighbor");
}

std::vector<BitVector>& ComputableMemory::planes(RegRef r) {
    switch (r.kind) {
        case RegRef::Kind::op: return op_;
        case RegRef::Kind::nb: return nb_;
        case RegRef::Kind::data: return data_.at(r.index);
        case RegRef::Kind::neighbor: break;
    }
    throw InstructionError("neighbor registers are read-only");
}

const std::vector<BitVector>& ComputableMemory::planes(RegRef r) const {
    return const_cast<ComputableMemory*>(this)->planes(r);
}

BitVector ComputableMemory::read_plane(const RegRef& r, std::size_t bit) const {
    if (r.kind != RegRef::Kind::neighbor) return planes(r)[bit];
    const BitVector& src = nb_[bit];
    const std::size_t nx = topology().nx;
    BitVector v;
    switch (r.dir) {
        case Dir::left: v = src.shifted_up(1); break;
        case Dir::right: v = src.shifted_down(1); break;
        case Dir::top: v = src.shifted_up(nx); break;
        case Dir::bottom: v = src.shifted_down(nx); break;
    }
    const bool fill = (cfg_.edge_fill >> bit) & 1u;
    v.assign_where(edge_[static_cast<int>(r.dir)], BitVector(size(), fill));
    return v;
}

std::uint64_t ComputableMemory::peek(std::size_t addr, RegRef reg) const {
    check_reg(reg, true);
    control_.check_address(addr);
    const auto& p = planes(reg);
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < cfg_.word_width; ++j)
        if (p[j].test(addr)) v |= std::uint64_t{1} << j;
    return v;
}

std::vector<std::uint64_t> ComputableMemory::snapshot(RegRef reg) const {
    check_reg(reg, true);
    const auto& p = planes(reg);
    std::vector<std::uint64_t> out(size(), 0);
    for (std::size_t j = 0; j < cfg_.word_width; ++j)
        for (auto i : p[j].indices()) out[i] |= std::uint64_t{1} << j;
    return out;
}

void ComputableMemory::poke(std::size_t addr, RegRef reg, std::uint64_t value) {
    check_reg(reg, true);
    control_.check_address(addr);
    auto& p = planes(reg);
    for (std::size_t j = 0; j < cfg_.word_width; ++j) p[j].set(addr, (value >> j) & 1u);
}

void ComputableMemory::poke_flags(std::size_t addr, bool m, bool s, bool c) {
    control_.check_address(addr);
    m_.set(addr, m);
    s_.set(addr, s);
    c_.set(addr, c);
}

std::uint64_t ComputableMemory::exclusive_read(std::size_t addr, RegRef reg) {
    if (reg.kind == RegRef::Kind::op)
        throw InstructionError("the operation register is not on the exclusive bus");
    const std::uint64_t v = peek(addr, reg);
    control_.charge_exclusive();
    return v;
}

void ComputableMemory::exclusive_write(std::size_t addr, RegRef reg, std::uint64_t value) {
    if (reg.kind == RegRef::Kind::op)
        throw InstructionError("the operation register is not on the exclusive bus");
    poke(addr, reg, value & word_mask());
    control_.charge_exclusive();
}

void ComputableMemory::load(RegRef reg, const std::vector<std::uint64_t>& values) {
    if (values.size() > size()) throw AddressError("more values than PEs");
    for (std::size_t i = 0; i < values.size(); ++i) exclusive_write(i, reg, values[i]);
}

void ComputableMemory::micro_step(const MicroInstruction& mi) {
    if (mi.op_bit >= cfg_.word_width || mi.reg_bit >= cfg_.word_width)
        throw InstructionError("bit index outside the word");
    if (mi.reg.kind == RegRef::Kind::op)
        throw InstructionError("the register selector cannot name the operation register");
    check_reg(mi.reg, (mi.writeback & wb::opbit_to_regbit) != 0);
    if (trace_) *trace_ << to_string(mi) << '\n';
    control_.charge_micro();

    // Only a neighbor condition needs a shifted copy; everything else is
    // read in place, word by word, before that word is written.
    BitVector shifted;
    const std::uint64_t* v = nullptr;
    switch (mi.cond) {
        case CondSource::op_bit: v = op_[mi.op_bit].words().data(); break;
        case CondSource::reg_bit:
            if (mi.reg.kind == RegRef::Kind::neighbor) {
                shifted = read_plane(mi.reg, mi.reg_bit);
                v = shifted.words().data();
            } else {
                v = planes(mi.reg)[mi.reg_bit].words().data();
            }
            break;
        case CondSource::s_bit: v = s_.words().data(); break;
        case CondSource::c_bit: v = c_.words().data(); break;
    }
    const std::uint64_t flip = (mi.negate ? ~0ULL : 0) ^ (mi.compare && !mi.datum ? ~0ULL : 0);
    const std::uint64_t chain = mi.chain_m ? ~0ULL : 0;
    const std::uint64_t* active = control_.mask().words().data();
    const std::size_t words = m_.words().size();

    // Old M and op bit are captured with B before any plane is written.
    thread_local std::vector<std::uint64_t> scratch;
    scratch.resize(3 * words);
    std::uint64_t* b = scratch.data();
    std::uint64_t* m_old = b + words;
    std::uint64_t* op_old = m_old + words;
    const std::uint64_t* mw = m_.words().data();
    const std::uint64_t* opw = op_[mi.op_bit].words().data();
    for (std::size_t k = 0; k < words; ++k) {
        b[k] = (v[k] ^ flip) | (mw[k] & chain);
        m_old[k] = mw[k];
        op_old[k] = opw[k];
    }
    auto put = [&](BitVector& dst, const std::uint64_t* val, bool gated) {
        std::uint64_t* d = dst.words().data();
        for (std::size_t k = 0; k < words; ++k) {
            const std::uint64_t sel = gated ? b[k] & active[k] : active[k];
            d[k] = (d[k] & ~sel) | (val[k] & sel);
        }
    };
    const unsigned wbk = mi.writeback;
    if (wbk & wb::b_to_m) put(m_, b, false);
    if (wbk & wb::m_to_s) put(s_, m_old, true);
    if (wbk & wb::m_to_c) put(c_, m_old, true);
    if (wbk & wb::m_to_opbit) put(op_[mi.op_bit], m_old, true);
    if (wbk & wb::opbit_to_regbit) put(planes(mi.reg)[mi.reg_bit], op_old, true);
    put(match_, b, false);
}

std::vector<MicroInstruction> ComputableMemory::expand(const MacroOp& op) const {
    using Code = MacroOp::Code;
    const std::size_t w = cfg_.word_width;
    auto need_src = [&](bool allow_op) {
        if (op.src.kind == RegRef::Kind::op && !allow_op)
            throw InstructionError(to_string(op.code) + " needs a source other than op");
        check_reg(op.src, false);
    };
    auto check_imm = [&] {
        if (w < 64 && (op.immediate >> w) != 0)
            throw InstructionError("immediate does not fit the word width");
    };

    Builder b(op.src.kind == RegRef::Kind::op ? RegRef::data(0) : op.src);
    switch (op.code) {
        case Code::copy: {
            const bool to_op = op.dst.kind == RegRef::Kind::op;
            const bool from_op = op.src.kind == RegRef::Kind::op;
            if (to_op && from_op) break;
            if (!to_op && !from_op)
                throw InstructionError("copy must read or write the operation register");
            if (to_op) {
                check_reg(op.src, false);
                for (std::size_t i = 0; i < w; ++i) {
                    b.emit(17, i, i);
                    b.emit(264, i, i);
                }
            } else {
                check_reg(op.dst, true);
                Builder d(op.dst);
                for (std::size_t i = 0; i < w; ++i) {
                    d.emit(512, i, i);
                    d.emit(528, i, i);
                }
                return d.take();
            }
            break;
        }
        case Code::read_neighbor:
            if (op.src.kind != RegRef::Kind::neighbor)
                throw InstructionError("read_neighbor needs a neighbor direction");
            return expand(MacroOp::copy(RegRef::op(), op.src));
        case Code::exchange:
            need_src(false);
            check_reg(op.src, true);
            for (std::size_t i = 0; i < w; ++i) {
                b.emit(17, i, i);
                b.emit(776, i, i);
            }
            break;
        case Code::add:
        case Code::sub:
            need_src(false);
            b.once(kClearC);
            for (std::size_t i = 0; i < w; ++i) b.each(op.code == Code::add ? kAdd : kSub, i, i);
            break;
        case Code::compare_lt:
            need_src(false);
            b.once(kClearC);
            for (std::size_t i = 0; i < w; ++i) b.each(kLt, i, i);
            b.emit(kMFromC);
            break;
        case Code::compare_eq:
            need_src(false);
            b.once(kClearC);
            for (std::size_t i = 0; i < w; ++i) b.each(kEq, i, i);
            b.emit(kMFromNotC);
            break;
        case Code::abs_diff:
            need_src(false);
            b.once(kClearC);
            for (std::size_t i = 0; i < w; ++i) b.each(kSub, i, i);
            // A final borrow means the difference went negative: negate it.
            b.emit(kMFromC);
            b.once(kMToS);
            b.once(kClearC);
            for (std::size_t i = 0; i < w; ++i) b.each(kNeg, i, i);
            break;
        case Code::abs:
            b.emit(1, w - 1, 0);  // M := sign bit
            b.once(kMToS);
            b.once(kClearC);
            for (std::size_t i = 0; i < w; ++i) b.each(kNeg, i, i);
            break;
        case Code::threshold: {
            check_imm();
            using Cmp = MacroOp::Cmp;
            // Borrow (lt, ge), reverse borrow (gt, le) or difference (eq,
            // ne) accumulates in C, one bit pair per step pair.
            const bool reverse = op.cmp == Cmp::gt || op.cmp == Cmp::le;
            const bool equality = op.cmp == Cmp::eq || op.cmp == Cmp::ne;
            b.once(kClearC);
            for (std::size_t i = 0; i < w; ++i) {
                const bool k = (op.immediate >> i) & 1u;
                const bool load_not_a = equality ? k : (reverse ? false : true);
                b.emit(load_not_a ? 129 : 1, i, 0);
                b.emit(k ? 132 : 4, i, 0);
            }
            const bool take_c = op.cmp == Cmp::lt || op.cmp == Cmp::gt || op.cmp == Cmp::ne;
            b.emit(take_c ? kMFromC : kMFromNotC);
            break;
        }
        case Code::select_if:
            need_src(false);
            // S holds the condition; a second select can reuse it.
            if (!op.keep_status) b.once(kMToS);
            for (std::size_t i = 0; i < w; ++i) {
                b.emit(17, i, i);
                b.emit(op.invert ? 168 : 40, i, i);
            }
            break;
        case Code::load_immediate:
            check_imm();
            for (std::size_t i = 0; i < w; ++i) {
                b.emit(129, i, 0);  // M := !a
                // B = a XNOR !k = a XOR k: flip exactly the bits that differ.
                MicroInstruction mi = decode(8, RegRef::data(0), i, 0);
                mi.compare = true;
                mi.datum = !((op.immediate >> i) & 1u);
                mi.chain_m = false;
                b.emit(mi);
            }
            break;
        case Code::store_match:
            if (op.bit >= w) throw InstructionError("match bit outside the word");
            b.emit(264, op.bit, 0);
            break;
        case Code::mul:
            return expand_mul(op);
    }
    return b.take();
}

std::vector<MicroInstruction> ComputableMemory::expand_mul(const MacroOp& op) const {
    const std::size_t w = cfg_.word_width;
    const RegRef t = RegRef::data(op.scratch), u = RegRef::data(op.scratch + 1);
    check_reg(op.src, false);
    check_reg(u, true);
    if (op.src.kind == RegRef::Kind::op || op.src == t || op.src == u)
        throw InstructionError("mul source must differ from op and the scratch registers");
    std::vector<MicroInstruction> out;
    auto append = [&](std::vector<MicroInstruction> part) {
        out.insert(out.end(), part.begin(), part.end());
    };
    // t := multiplicand, op := 0, then per multiplier bit j: save the
    // accumulator in u, add src << j through offset bit indices, and take the
    // saved value back where t[j] is clear.
    append(expand(MacroOp::copy(t, RegRef::op())));
    append(expand(MacroOp::load_immediate(0)));
    for (std::size_t j = 0; j < w; ++j) {
        Builder b(t);
        b.emit(17, 0, j);  // M := t[j]
        b.once(kMToS);
        append(b.take());
        append(expand(MacroOp::copy(u, RegRef::op())));
        Builder a(op.src);
        a.once(kClearC);
        for (std::size_t i = j; i < w; ++i) a.each(kAdd, i, i - j);
        append(a.take());
        Builder s(u);
        for (std::size_t i = 0; i < w; ++i) {
            s.emit(17, i, i);
            s.emit(168, i, i);  // where !S: op[i] := u[i]
        }
        append(s.take());
    }
    return out;
}

void ComputableMemory::run_macro(const MacroOp& op) {
    const auto seq = expand(op);
    control_.charge_macro();
    for (const auto& mi : seq) micro_step(mi);
}

}  // namespace cpm
