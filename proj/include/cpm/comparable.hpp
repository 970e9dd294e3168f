#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cpm/core.hpp"

namespace cpm {

struct ComparablePe {
    std::uint8_t addr_reg = 0;
    bool storage_bit = false;
};

enum class Predicate { eq, ne, lt, gt, le, ge };

Predicate complement(Predicate p);
bool apply(Predicate p, std::uint64_t a, std::uint64_t b);

struct CompareStep {
    std::uint8_t mask = 0xFF;
    std::uint8_t datum = 0;
    Predicate cmp = Predicate::eq;
    Dir select = Dir::left;  // left or right only
    bool use_selected = true;  // false: NAND(comparison, own storage bit)
    bool update = true;
};

// When a step's candidate reaches the storage bit. The literal reading gates
// on update AND comparison, which cannot clear a bit whose comparison fails;
// the multi-byte algorithms need update alone.
enum class UpdateGate { update_only, update_and_compare };

// Records are `record_size` consecutive PEs; a field is `field_width` bytes
// starting at `field_offset`, most significant byte at the lowest address.
struct FieldLayout {
    std::size_t record_size = 1;
    std::size_t field_offset = 0;
    std::size_t field_width = 1;
};

class ComparableMemory {
public:
    explicit ComparableMemory(std::size_t pe_count, UpdateGate gate = UpdateGate::update_only);

    ControlUnit& control() { return array_.control(); }
    const ControlUnit& control() const { return array_.control(); }
    PeArray<ComparablePe>& array() { return array_; }
    std::size_t size() const { return array_.size(); }
    UpdateGate gate() const { return gate_; }

    std::uint8_t exclusive_read(std::size_t addr);
    void exclusive_write(std::size_t addr, std::uint8_t value);
    // Writes each value big-endian into its record's field.
    void load_field(const FieldLayout& layout, const std::vector<std::uint64_t>& values);

    // One macro cycle on the current activation.
    void compare_step(const CompareStep& step);
    // Storage bit := predicate(byte & mask, datum) on the current activation,
    // in two steps (set to one, then NAND with the complementary predicate).
    void load_predicate(Predicate p, std::uint8_t datum, std::uint8_t mask = 0xFF);

    // Per-record predicate flags; the result bit sits at the field's leading
    // PE, which stays activated so it can be enumerated or counted.
    std::vector<bool> field_predicate(const FieldLayout& layout, Predicate p, std::uint64_t value);
    MatchReport select_records(const FieldLayout& layout, Predicate p, std::uint64_t value);
    // M limits give M + 1 lower-closed bins.
    std::vector<std::size_t> histogram(const FieldLayout& layout,
                                       const std::vector<std::uint64_t>& limits);

    std::size_t record_count(const FieldLayout& layout) const;
    BitVector storage_bits() const;

private:
    void validate(const FieldLayout& layout) const;
    bool gate_open(bool update, bool cmp) const;
    void activate_byte(const FieldLayout& layout, std::size_t byte);
    void set_all_ones();   // NAND with an always-false comparison
    void invert();         // NAND with an always-true comparison

    PeArray<ComparablePe> array_;
    UpdateGate gate_;
};

}  // namespace cpm
