#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wearsim/memory.hpp"
#include "wearsim/metrics.hpp"
#include "wearsim/policy.hpp"
#include "wearsim/trace.hpp"

namespace wearsim {

struct EngineConfig {
  std::uint64_t memSizeCells = 0;  // even, >= 4; each ring holds half
  PolicyKind policy = GoldenPolicy{};
  bool countGcTraffic = true;        // GC copies record a read and a write per cell
  bool autoGcOnAllocFailure = true;  // collect once before reporting out-of-memory
  CountingMode countingMode = CountingMode::kAccesses;
};

/// Throws std::invalid_argument for an odd or too-small memory size.
void validate_config(const EngineConfig& config);

enum class SimulationErrorKind {
  kObjectTooLarge,
  kOutOfMemory,
  kDuplicateAlloc,
  kInvalidFree,
  kUseAfterFree,
  kOutOfBounds,
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(SimulationErrorKind kind, const std::string& what,
                  std::optional<std::size_t> eventIndex = std::nullopt)
      : std::runtime_error(what), kind_(kind), eventIndex_(eventIndex) {}

  SimulationErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> event_index() const noexcept { return eventIndex_; }

 private:
  SimulationErrorKind kind_;
  std::optional<std::size_t> eventIndex_;
};

/// A trace object placed in memory. In dual-ring mode `baseCell` is a cell on
/// `ring`; in single-space mode ring is 0 and baseCell is a linear address.
struct ObjectRecord {
  ObjectId id = 0;
  std::uint64_t sizeCells = 0;
  unsigned ring = 0;
  CellIndex baseCell = 0;
  bool live = true;
  bool operator==(const ObjectRecord&) const = default;
};

/// Replays object-level events against a dual-ring memory. The mutator bump
/// allocates on the work ring; a collection copies live objects, in ascending
/// base order, to consecutive cells of the idle ring starting at the policy's
/// petal location, then swaps ring roles. Single-space compaction instead
/// slides live objects toward address 0 of the whole memory.
///
/// Allocation region bookkeeping: the cells [liveStart, liveStart + usedCells)
/// (mod space size) hold everything placed since the last collection,
/// including objects freed since; allocCursor sits at its end.
class Engine {
 public:
  using GcObserver = std::function<void(const Engine&)>;

  explicit Engine(const EngineConfig& config);

  void apply(const TraceEvent& event);

  void handle_alloc(ObjectId id, std::uint64_t sizeCells);
  void handle_free(ObjectId id);
  void handle_access(ObjectId id, std::uint64_t offset, std::uint64_t len,
                     AccessKind kind);
  void handle_gc();

  /// Called after every collection, explicit or allocation-triggered.
  void set_gc_observer(GcObserver observer) { observer_ = std::move(observer); }

  const EngineConfig& config() const { return config_; }
  const DualRingMemory& memory() const { return memory_; }
  const PolicyState& policy_state() const { return policy_; }
  bool dual_ring() const { return dualRing_; }

  /// Cells available to the mutator: one ring, or the whole memory.
  std::uint64_t space_size() const { return spaceSize_; }
  CellIndex alloc_cursor() const { return allocCursor_; }
  CellIndex live_start() const { return liveStart_; }
  std::uint64_t live_len() const { return liveLen_; }
  std::uint64_t used_cells() const { return usedCells_; }
  std::uint64_t gc_count() const { return gcCount_; }
  std::uint64_t event_count() const { return eventCount_; }

  /// Total cells copied by collections (both reads and writes count these).
  std::uint64_t gc_copied_cells() const { return gcCopiedCells_; }

  const ObjectRecord* find(ObjectId id) const;

  /// Live objects in ascending base order.
  std::vector<ObjectRecord> live_objects() const;

  WearReport report() const;

 private:
  void record(CellIndex base, std::uint64_t offset, std::uint64_t len,
              AccessKind kind, unsigned ring);
  void collect_dual(std::vector<ObjectRecord*>& live);
  void collect_single(std::vector<ObjectRecord*>& live);

  EngineConfig config_;
  bool dualRing_;
  std::uint64_t spaceSize_;
  DualRingMemory memory_;
  PolicyState policy_;
  std::unordered_map<ObjectId, ObjectRecord> objects_;
  CellIndex allocCursor_ = 0;
  CellIndex liveStart_ = 0;
  std::uint64_t liveLen_ = 0;
  std::uint64_t usedCells_ = 0;
  std::uint64_t gcCount_ = 0;
  std::uint64_t eventCount_ = 0;
  std::uint64_t gcCopiedCells_ = 0;
  GcObserver observer_;
};

/// Runs every event of `trace` through a fresh engine. Handler errors are
/// rethrown as SimulationError carrying the failing event index.
WearReport replay(const Trace& trace, const EngineConfig& config,
                  Engine::GcObserver observer = {});

}  // namespace wearsim
