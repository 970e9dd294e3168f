#include "cpm/movable.hpp"

#include <algorithm>
#include <string>

namespace cpm {

MovableMemory::MovableMemory(std::size_t pe_count) : array_(Topology::line(pe_count)) {}

void MovableMemory::shift_block(std::size_t start, std::size_t end, ShiftDir dir) {
    if (start >= size() || end >= size() || start > end)
        throw AddressError("shift range [" + std::to_string(start) + ", " + std::to_string(end) +
                           "] invalid for " + std::to_string(size()) + " PEs");
    shift_raw(start, end, dir);
}

void MovableMemory::shift_raw(std::size_t start, std::size_t end, ShiftDir dir) {
    BitVector mask(size());
    for (std::size_t i = start; i <= end && i < size(); ++i) mask.set(i);
    control().set_mask_uncharged(std::move(mask));
    const Dir from = dir == ShiftDir::right ? Dir::left : Dir::right;
    array_.broadcast([from](const auto& v, MovablePe& next) {
        next.temp_reg = v.neighbor(from).addr_reg;
    });
    array_.broadcast([](const auto& v, MovablePe& next) { next.addr_reg = v.self().temp_reg; });
}

MovableMemory::Word MovableMemory::exclusive_read(std::size_t addr) {
    return array_.exclusive(addr).addr_reg;
}

void MovableMemory::exclusive_write(std::size_t addr, Word value) {
    array_.exclusive(addr).addr_reg = value;
}

std::size_t MovableMemory::used() const {
    std::size_t n = 0;
    for (const auto& e : table_) n += e.length;
    return n;
}

std::size_t MovableMemory::index_of(std::size_t id) const {
    for (std::size_t i = 0; i < table_.size(); ++i)
        if (table_[i].id == id) return i;
    throw LookupError("unknown object id " + std::to_string(id));
}

std::size_t MovableMemory::start_of(std::size_t id) const {
    const std::size_t idx = index_of(id);
    std::size_t s = 0;
    for (std::size_t i = 0; i < idx; ++i) s += table_[i].length;
    return s;
}

std::size_t MovableMemory::length_of(std::size_t id) const { return table_[index_of(id)].length; }

std::vector<MovableMemory::Word> MovableMemory::object(std::size_t id) const {
    const std::size_t s = start_of(id), n = length_of(id);
    std::vector<Word> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = array_.peek(s + i).addr_reg;
    return out;
}

void MovableMemory::open_gap(std::size_t pos, std::size_t k) {
    std::size_t end = used();
    if (end + k > size())
        throw AllocationError("need " + std::to_string(end + k) + " cells, capacity " +
                              std::to_string(size()));
    for (std::size_t step = 0; step < k; ++step, ++end) shift_raw(pos + 1, end, ShiftDir::right);
}

void MovableMemory::close_gap(std::size_t pos, std::size_t k) {
    std::size_t end = used();
    for (std::size_t step = 0; step < k; ++step, --end)
        end >= 2 ? shift_raw(pos, end - 2, ShiftDir::left) : shift_raw(1, 0, ShiftDir::left);
}

std::size_t MovableMemory::create(const std::vector<Word>& data) {
    const std::size_t at = used();
    if (at + data.size() > size())
        throw AllocationError("object of " + std::to_string(data.size()) +
                              " cells does not fit in the free tail");
    for (std::size_t i = 0; i < data.size(); ++i) exclusive_write(at + i, data[i]);
    table_.push_back({next_id_, data.size()});
    return next_id_++;
}

void MovableMemory::insert(std::size_t id, std::size_t offset, const std::vector<Word>& data) {
    const std::size_t idx = index_of(id);
    if (offset > table_[idx].length)
        throw ArgumentError("insert offset past the end of object " + std::to_string(id));
    if (data.empty()) return;
    const std::size_t pos = start_of(id) + offset;
    open_gap(pos, data.size());
    table_[idx].length += data.size();
    for (std::size_t i = 0; i < data.size(); ++i) exclusive_write(pos + i, data[i]);
}

void MovableMemory::erase(std::size_t id, std::size_t offset, std::size_t count) {
    const std::size_t idx = index_of(id);
    if (offset + count > table_[idx].length)
        throw ArgumentError("erase range past the end of object " + std::to_string(id));
    if (count == 0) return;
    close_gap(start_of(id) + offset, count);
    table_[idx].length -= count;
}

void MovableMemory::resize(std::size_t id, std::size_t new_length) {
    const std::size_t idx = index_of(id);
    const std::size_t len = table_[idx].length;
    if (new_length < len) {
        erase(id, new_length, len - new_length);
    } else if (new_length > len) {
        const std::size_t pos = start_of(id) + len;
        open_gap(pos, new_length - len);
        table_[idx].length = new_length;
        for (std::size_t i = pos; i < pos + (new_length - len); ++i) exclusive_write(i, 0);
    }
}

void MovableMemory::move_object(std::size_t id, std::size_t new_index) {
    const std::size_t idx = index_of(id);
    if (new_index >= table_.size())
        throw ArgumentError("object position " + std::to_string(new_index) + " out of range");
    if (new_index == idx) return;
    // The object and the objects it passes form one region; moving the
    // object is a rotation of that region. Each one-cell rotation is a
    // block shift plus carrying the dropped cell around on the exclusive bus.
    const std::size_t lo = std::min(idx, new_index), hi = std::max(idx, new_index);
    std::size_t region_start = 0;
    for (std::size_t i = 0; i < lo; ++i) region_start += table_[i].length;
    std::size_t region_len = 0;
    for (std::size_t i = lo; i <= hi; ++i) region_len += table_[i].length;
    const std::size_t obj_len = table_[idx].length;
    const std::size_t others = region_len - obj_len;
    // Moving toward higher addresses means the object ends last: rotate the
    // region left by obj_len, or equivalently right by `others`.
    std::size_t right_steps = idx < new_index ? others : obj_len;
    std::size_t left_steps = region_len - right_steps;
    const std::size_t last = region_start + region_len - 1;
    if (region_len > 0) {
        if (right_steps <= left_steps) {
            for (std::size_t s = 0; s < right_steps; ++s) {
                const Word dropped = exclusive_read(last);
                shift_raw(region_start + 1, last, ShiftDir::right);
                exclusive_write(region_start, dropped);
            }
        } else {
            for (std::size_t s = 0; s < left_steps; ++s) {
                const Word dropped = exclusive_read(region_start);
                shift_raw(region_start, last - 1, ShiftDir::left);
                exclusive_write(last, dropped);
            }
        }
    }
    Entry e = table_[idx];
    table_.erase(table_.begin() + static_cast<std::ptrdiff_t>(idx));
    table_.insert(table_.begin() + static_cast<std::ptrdiff_t>(new_index), e);
}

void MovableMemory::destroy(std::size_t id) {
    const std::size_t idx = index_of(id);
    erase(id, 0, table_[idx].length);
    table_.erase(table_.begin() + static_cast<std::ptrdiff_t>(idx));
}

void MovableMemory::refresh() {
    const std::size_t n = used();
    // With a spare cell past the end, the round trip covers every used cell;
    // on a full array the last cell only receives its own stale copy back.
    const std::size_t right_end = n < size() ? n : n - 1;
    shift_raw(1, right_end, ShiftDir::right);
    if (right_end == 0)
        shift_raw(1, 0, ShiftDir::left);
    else
        shift_raw(0, right_end - 1, ShiftDir::left);
}

}  // namespace cpm
