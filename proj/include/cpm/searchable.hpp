#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cpm/core.hpp"

namespace cpm {

struct SearchablePe {
    std::uint8_t addr_reg = 0;
    bool storage_bit = false;
};

struct SearchStep {
    std::uint8_t mask = 0xFF;
    std::uint8_t datum = 0;
    bool equal = true;       // false selects the "not equal" comparison code
    bool self_code = false;  // true: store the comparison alone, no chaining
    // Optional per-step activation, e.g. a carry > 1 for structured records.
    std::optional<AxisRange> activation;
};

// Which neighbor's storage bit a chained step ANDs in.
enum class ChainFrom { lower_address, higher_address };

struct SubstringResult {
    MatchReport report;          // addresses of the last byte of every occurrence
    CycleLedger match_phase;     // the match steps alone
    CycleLedger total;           // activation + match steps + enumeration
};

class SearchableMemory {
public:
    explicit SearchableMemory(std::size_t pe_count, ChainFrom chain = ChainFrom::lower_address);

    ControlUnit& control() { return array_.control(); }
    const ControlUnit& control() const { return array_.control(); }
    PeArray<SearchablePe>& array() { return array_; }
    std::size_t size() const { return array_.size(); }

    // Exclusive-bus bulk load starting at `offset`; one exclusive op per byte.
    void load(const std::vector<std::uint8_t>& text, std::size_t offset = 0);
    std::uint8_t exclusive_read(std::size_t addr);
    void exclusive_write(std::size_t addr, std::uint8_t value);

    // One macro cycle (plus one for the step's own activation, if given).
    void match_step(const SearchStep& step);

    // Unanchored search; `masks` defaults to 0xFF per pattern byte.
    SubstringResult find_substring(const std::vector<std::uint8_t>& pattern,
                                   const std::vector<std::uint8_t>& masks = {});

    BitVector storage_bits() const;

private:
    PeArray<SearchablePe> array_;
    ChainFrom chain_;
};

}  // namespace cpm
