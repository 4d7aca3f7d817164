#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wearsim {

using CellIndex = std::uint64_t;

enum class AccessKind { kRead, kWrite };

struct RingAddress {
  unsigned ring = 0;
  CellIndex cell = 0;
  bool operator==(const RingAddress&) const = default;
};

/// (base + offset) mod ringSize: the cell after the last one is the first.
constexpr CellIndex translate(CellIndex base, std::uint64_t offset,
                              std::uint64_t ringSize) {
  return (base + offset % ringSize) % ringSize;
}

/// Linear memory viewed as two equal rings, each with per-cell read and write
/// counters. Ring r occupies linear addresses [r * ringSize, (r+1) * ringSize).
/// Exactly one ring is the work ring; the other is idle.
class DualRingMemory {
 public:
  /// Throws std::invalid_argument when ringSize < 2.
  explicit DualRingMemory(std::uint64_t ringSizeCells);

  std::uint64_t ring_size() const { return ringSize_; }
  std::uint64_t total_cells() const { return 2 * ringSize_; }

  unsigned work_ring() const { return workRing_; }
  unsigned idle_ring() const { return 1 - workRing_; }
  void swap_roles() { workRing_ = 1 - workRing_; }

  /// Counts one access of `kind` at each of the `lenCells` cells starting at
  /// baseCell on `ring`, wrapping at the ring seam. Throws
  /// std::length_error when lenCells > ringSize.
  void record_range(unsigned ring, CellIndex baseCell, std::uint64_t lenCells,
                    AccessKind kind);

  /// Same as record_range, but over the whole memory treated as one space
  /// (wrapping at total_cells). Used by single-space compaction.
  void record_linear(CellIndex address, std::uint64_t lenCells, AccessKind kind);

  std::uint64_t reads_at(RingAddress at) const { return reads_[linear(at)]; }
  std::uint64_t writes_at(RingAddress at) const { return writes_[linear(at)]; }

  /// Counters for the full memory in linear address order.
  std::span<const std::uint64_t> reads() const { return reads_; }
  std::span<const std::uint64_t> writes() const { return writes_; }

 private:
  std::size_t linear(RingAddress at) const { return at.ring * ringSize_ + at.cell; }
  std::vector<std::uint64_t>& counters(AccessKind kind) {
    return kind == AccessKind::kRead ? reads_ : writes_;
  }

  std::uint64_t ringSize_;
  std::vector<std::uint64_t> reads_;
  std::vector<std::uint64_t> writes_;
  unsigned workRing_ = 0;
};

}  // namespace wearsim
