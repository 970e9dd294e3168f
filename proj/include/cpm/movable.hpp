#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cpm/core.hpp"

namespace cpm {

struct MovablePe {
    std::uint64_t addr_reg = 0;
    std::uint64_t temp_reg = 0;  // holds a value only within one shift
};

enum class ShiftDir { left, right };

// Content movable memory: each PE copies its neighbor's addressable register
// through its temporary register. Objects live packed from address 0 in table
// order, so free space is always one contiguous tail.
class MovableMemory {
public:
    using Word = std::uint64_t;

    struct Entry {
        std::size_t id;
        std::size_t length;
    };

    explicit MovableMemory(std::size_t pe_count);

    ControlUnit& control() { return array_.control(); }
    const ControlUnit& control() const { return array_.control(); }
    PeArray<MovablePe>& array() { return array_; }
    std::size_t size() const { return array_.size(); }

    // Every PE in [start, end] takes the old value of its neighbor on the
    // opposite side of `dir` ("right" moves content toward higher addresses).
    // The range rides on the command word, so this costs exactly 2 macro
    // cycles: neighbor-to-temp, temp-to-register.
    void shift_block(std::size_t start, std::size_t end, ShiftDir dir);

    Word exclusive_read(std::size_t addr);
    void exclusive_write(std::size_t addr, Word value);

    // Appends a new object after the last one; returns its id.
    std::size_t create(const std::vector<Word>& data);
    void insert(std::size_t id, std::size_t offset, const std::vector<Word>& data);
    void erase(std::size_t id, std::size_t offset, std::size_t count);
    void resize(std::size_t id, std::size_t new_length);
    // Moves the object to position `new_index` in the table order.
    void move_object(std::size_t id, std::size_t new_index);
    void destroy(std::size_t id);

    // One right and one left shift over the used prefix; 4 macro cycles.
    void refresh();

    std::size_t used() const;
    std::size_t start_of(std::size_t id) const;
    std::size_t length_of(std::size_t id) const;
    const std::vector<Entry>& table() const { return table_; }
    // Uncharged view of an object's cells.
    std::vector<Word> object(std::size_t id) const;

private:
    std::size_t index_of(std::size_t id) const;
    // shift_block without bounds checks; an empty range still costs 2.
    void shift_raw(std::size_t start, std::size_t end, ShiftDir dir);
    void open_gap(std::size_t pos, std::size_t k);
    void close_gap(std::size_t pos, std::size_t k);

    PeArray<MovablePe> array_;
    std::vector<Entry> table_;
    std::size_t next_id_ = 0;
};

}  // namespace cpm
