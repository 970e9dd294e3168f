#include "cpm/searchable.hpp"

#include <string>

namespace cpm {

SearchableMemory::SearchableMemory(std::size_t pe_count, ChainFrom chain)
    : array_(Topology::line(pe_count)), chain_(chain) {}

void SearchableMemory::load(const std::vector<std::uint8_t>& text, std::size_t offset) {
    if (offset + text.size() > size())
        throw AddressError("text of " + std::to_string(text.size()) + " bytes at offset " +
                           std::to_string(offset) + " exceeds " + std::to_string(size()) + " PEs");
    for (std::size_t i = 0; i < text.size(); ++i) exclusive_write(offset + i, text[i]);
}

std::uint8_t SearchableMemory::exclusive_read(std::size_t addr) {
    return array_.exclusive(addr).addr_reg;
}

void SearchableMemory::exclusive_write(std::size_t addr, std::uint8_t value) {
    array_.exclusive(addr).addr_reg = value;
}

void SearchableMemory::match_step(const SearchStep& step) {
    if (step.activation) {
        const auto& a = *step.activation;
        control().activate(a.start, a.end, a.carry);
    }
    const Dir from = chain_ == ChainFrom::lower_address ? Dir::left : Dir::right;
    array_.broadcast([&](const auto& v, SearchablePe& next) {
        const bool same = (v.self().addr_reg & step.mask) == step.datum;
        const bool cmp = same == step.equal;
        next.storage_bit = step.self_code ? cmp : cmp && v.neighbor(from).storage_bit;
    });
}

SubstringResult SearchableMemory::find_substring(const std::vector<std::uint8_t>& pattern,
                                                 const std::vector<std::uint8_t>& masks) {
    if (pattern.empty()) throw ArgumentError("search pattern must not be empty");
    if (!masks.empty() && masks.size() != pattern.size())
        throw ArgumentError("mask list must match the pattern length");
    const CycleLedger before = control().ledger();
    control().activate_all();
    const CycleLedger phase_start = control().ledger();
    // Chaining from the higher neighbor feeds the pattern back to front, so
    // matches land on the first byte of each occurrence instead.
    const bool forward = chain_ == ChainFrom::lower_address;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const std::size_t k = forward ? i : pattern.size() - 1 - i;
        SearchStep s;
        s.mask = masks.empty() ? 0xFF : masks[k];
        s.datum = static_cast<std::uint8_t>(pattern[k] & s.mask);
        s.self_code = i == 0;
        match_step(s);
    }
    SubstringResult r;
    r.match_phase = control().ledger() - phase_start;
    r.report = control().enumerate(storage_bits());
    r.total = control().ledger() - before;
    return r;
}

BitVector SearchableMemory::storage_bits() const {
    BitVector b(size());
    for (std::size_t i = 0; i < size(); ++i)
        if (array_.peek(i).storage_bit) b.set(i);
    return b;
}

}  // namespace cpm
