#include "wearsim/memory.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wearsim {

namespace {

// Adds one to `len` consecutive counters of `span` starting at `start`,
// wrapping around the end. Split into at most two contiguous runs.
void bump(std::uint64_t* span, std::uint64_t spanSize, std::uint64_t start,
          std::uint64_t len) {
  const std::uint64_t first = std::min(len, spanSize - start);
  for (std::uint64_t i = 0; i < first; ++i) ++span[start + i];
  for (std::uint64_t i = 0; i < len - first; ++i) ++span[i];
}

}  // namespace

DualRingMemory::DualRingMemory(std::uint64_t ringSizeCells)
    : ringSize_(ringSizeCells),
      reads_(2 * ringSizeCells, 0),
      writes_(2 * ringSizeCells, 0) {
  if (ringSizeCells < 2) throw std::invalid_argument("ring size must be ≥ 2 cells");
}

void DualRingMemory::record_range(unsigned ring, CellIndex baseCell,
                                  std::uint64_t lenCells, AccessKind kind) {
  if (ring > 1) throw std::out_of_range("ring index must be 0 or 1");
  if (baseCell >= ringSize_) throw std::out_of_range("base cell outside ring");
  if (lenCells > ringSize_) {
    throw std::length_error("range of " + std::to_string(lenCells) +
                            " cells exceeds ring size " + std::to_string(ringSize_));
  }
  bump(counters(kind).data() + ring * ringSize_, ringSize_, baseCell, lenCells);
}

void DualRingMemory::record_linear(CellIndex address, std::uint64_t lenCells,
                                   AccessKind kind) {
  const std::uint64_t total = total_cells();
  if (address >= total) throw std::out_of_range("address outside memory");
  if (lenCells > total) {
    throw std::length_error("range of " + std::to_string(lenCells) +
                            " cells exceeds memory size " + std::to_string(total));
  }
  bump(counters(kind).data(), total, address, lenCells);
}

}  // namespace wearsim
