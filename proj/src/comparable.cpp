#include "cpm/comparable.hpp"

#include <string>

namespace cpm {

Predicate complement(Predicate p) {
    switch (p) {
        case Predicate::eq: return Predicate::ne;
        case Predicate::ne: return Predicate::eq;
        case Predicate::lt: return Predicate::ge;
        case Predicate::ge: return Predicate::lt;
        case Predicate::gt: return Predicate::le;
        case Predicate::le: return Predicate::gt;
    }
    return p;
}

bool apply(Predicate p, std::uint64_t a, std::uint64_t b) {
    switch (p) {
        case Predicate::eq: return a == b;
        case Predicate::ne: return a != b;
        case Predicate::lt: return a < b;
        case Predicate::gt: return a > b;
        case Predicate::le: return a <= b;
        case Predicate::ge: return a >= b;
    }
    return false;
}

ComparableMemory::ComparableMemory(std::size_t pe_count, UpdateGate gate)
    : array_(Topology::line(pe_count)), gate_(gate) {}

std::uint8_t ComparableMemory::exclusive_read(std::size_t addr) {
    return array_.exclusive(addr).addr_reg;
}

void ComparableMemory::exclusive_write(std::size_t addr, std::uint8_t value) {
    array_.exclusive(addr).addr_reg = value;
}

void ComparableMemory::validate(const FieldLayout& l) const {
    if (l.record_size == 0 || l.field_width == 0 || l.field_width > 8)
        throw ConfigError("field width must be 1..8 bytes in a non-empty record");
    if (l.field_offset + l.field_width > l.record_size)
        throw ConfigError("field does not fit in its record");
    if (size() % l.record_size != 0)
        throw ConfigError("record size " + std::to_string(l.record_size) +
                          " does not divide the array of " + std::to_string(size()));
}

std::size_t ComparableMemory::record_count(const FieldLayout& l) const {
    validate(l);
    return size() / l.record_size;
}

void ComparableMemory::load_field(const FieldLayout& l, const std::vector<std::uint64_t>& values) {
    if (values.size() > record_count(l)) throw AddressError("more values than records");
    for (std::size_t r = 0; r < values.size(); ++r)
        for (std::size_t b = 0; b < l.field_width; ++b) {
            const std::size_t shift = 8 * (l.field_width - 1 - b);
            exclusive_write(r * l.record_size + l.field_offset + b,
                            static_cast<std::uint8_t>(values[r] >> shift));
        }
}

bool ComparableMemory::gate_open(bool update, bool cmp) const {
    return gate_ == UpdateGate::update_only ? update : update && cmp;
}

void ComparableMemory::compare_step(const CompareStep& step) {
    if (step.select != Dir::left && step.select != Dir::right)
        throw InstructionError("comparable PEs select only the left or right neighbor");
    array_.broadcast([&](const auto& v, ComparablePe& next) {
        const bool cmp = apply(step.cmp, v.self().addr_reg & step.mask, step.datum);
        const bool own = v.self().storage_bit;
        const bool candidate = step.use_selected ? v.neighbor(step.select).storage_bit : !(cmp && own);
        if (gate_open(step.update, cmp)) next.storage_bit = candidate;
    });
}

void ComparableMemory::set_all_ones() {
    compare_step({0x00, 0x01, Predicate::eq, Dir::left, false, true});
}

void ComparableMemory::invert() {
    compare_step({0x00, 0x00, Predicate::eq, Dir::left, false, true});
}

void ComparableMemory::load_predicate(Predicate p, std::uint8_t datum, std::uint8_t mask) {
    set_all_ones();
    compare_step({mask, static_cast<std::uint8_t>(datum & mask), complement(p), Dir::left, false,
                  true});
}

void ComparableMemory::activate_byte(const FieldLayout& l, std::size_t byte) {
    const std::size_t first = l.field_offset + byte;
    const std::size_t last = size() - l.record_size + first;
    control().activate(first, last, l.record_size);
}

std::vector<bool> ComparableMemory::field_predicate(const FieldLayout& l, Predicate p,
                                                    std::uint64_t value) {
    const std::size_t records = record_count(l);
    if (l.field_width < 8 && (value >> (8 * l.field_width)) != 0)
        throw ArgumentError("comparison value wider than the field");

    // Bytes ripple from least to most significant. Each byte's PE reads the
    // partial result of the less significant bytes from its right neighbor:
    //   lt: s = lt_k | (eq_k & s_right)  as  NAND(ge_k, NAND(eq_k, s_right))
    //   gt: the same with le_k in place of ge_k
    //   eq: s = eq_k & s_right           as  invert(NAND(eq_k, s_right))
    // The least significant byte has no lower part, so s starts at one.
    // ne, ge and le are the complements of eq, lt and gt.
    const Predicate base = (p == Predicate::ne) ? Predicate::eq
                           : (p == Predicate::ge) ? Predicate::lt
                           : (p == Predicate::le) ? Predicate::gt
                                                  : p;
    const bool complemented = base != p;
    for (std::size_t k = l.field_width; k-- > 0;) {
        const bool lsb = k + 1 == l.field_width;
        const std::uint8_t d = static_cast<std::uint8_t>(value >> (8 * (l.field_width - 1 - k)));
        activate_byte(l, k);
        if (lsb)
            set_all_ones();
        else
            compare_step({0xFF, 0, Predicate::eq, Dir::right, true, true});
        if (base == Predicate::eq) {
            compare_step({0xFF, d, Predicate::eq, Dir::left, false, true});
            // The NAND already leaves ne on the last byte.
            if (k > 0 || !complemented) invert();
        } else {
            if (!lsb) compare_step({0xFF, d, Predicate::eq, Dir::left, false, true});
            compare_step({0xFF, d, base == Predicate::lt ? Predicate::ge : Predicate::le,
                          Dir::left, false, true});
            if (k == 0 && complemented) invert();
        }
    }

    std::vector<bool> flags(records);
    for (std::size_t r = 0; r < records; ++r)
        flags[r] = array_.peek(r * l.record_size + l.field_offset).storage_bit;
    return flags;
}

MatchReport ComparableMemory::select_records(const FieldLayout& l, Predicate p,
                                             std::uint64_t value) {
    field_predicate(l, p, value);
    return control().enumerate(storage_bits());
}

std::vector<std::size_t> ComparableMemory::histogram(const FieldLayout& l,
                                                     const std::vector<std::uint64_t>& limits) {
    for (std::size_t i = 1; i < limits.size(); ++i)
        if (limits[i] <= limits[i - 1]) throw ArgumentError("histogram limits must be strictly increasing");
    const std::size_t records = record_count(l);
    std::vector<std::size_t> below;
    for (auto lim : limits) {
        field_predicate(l, Predicate::lt, lim);
        below.push_back(control().count(storage_bits()));
    }
    std::vector<std::size_t> bins;
    std::size_t prev = 0;
    for (auto b : below) {
        bins.push_back(b - prev);
        prev = b;
    }
    bins.push_back(records - prev);
    return bins;
}

BitVector ComparableMemory::storage_bits() const {
    BitVector b(size());
    for (std::size_t i = 0; i < size(); ++i)
        if (array_.peek(i).storage_bit) b.set(i);
    return b;
}

}  // namespace cpm
