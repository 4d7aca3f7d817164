#include "wearsim/engine.hpp"

#include <algorithm>

namespace wearsim {

void validate_config(const EngineConfig& config) {
  if (config.memSizeCells < 4 || config.memSizeCells % 2 != 0) {
    throw std::invalid_argument("memory size must be even and ≥ 4 cells (got " +
                                std::to_string(config.memSizeCells) + ")");
  }
}

namespace {

EngineConfig checked(const EngineConfig& config) {
  validate_config(config);
  return config;
}

}  // namespace

Engine::Engine(const EngineConfig& config)
    : config_(checked(config)),
      dualRing_(is_dual_ring(config.policy)),
      spaceSize_(dualRing_ ? config.memSizeCells / 2 : config.memSizeCells),
      memory_(config.memSizeCells / 2),
      policy_(config.policy) {}

void Engine::apply(const TraceEvent& event) {
  ++eventCount_;
  if (const auto* a = std::get_if<AllocEvent>(&event)) {
    handle_alloc(a->id, a->sizeCells);
  } else if (const auto* f = std::get_if<FreeEvent>(&event)) {
    handle_free(f->id);
  } else if (const auto* r = std::get_if<ReadEvent>(&event)) {
    handle_access(r->id, r->offsetCells, r->lenCells, AccessKind::kRead);
  } else if (const auto* w = std::get_if<WriteEvent>(&event)) {
    handle_access(w->id, w->offsetCells, w->lenCells, AccessKind::kWrite);
  } else {
    handle_gc();
  }
}

void Engine::handle_alloc(ObjectId id, std::uint64_t sizeCells) {
  if (const auto it = objects_.find(id); it != objects_.end() && it->second.live) {
    throw SimulationError(SimulationErrorKind::kDuplicateAlloc,
                          "object " + std::to_string(id) + " is already live");
  }
  if (sizeCells == 0 || sizeCells > spaceSize_) {
    throw SimulationError(SimulationErrorKind::kObjectTooLarge,
                          "object " + std::to_string(id) + " of " +
                              std::to_string(sizeCells) +
                              " cells does not fit a space of " +
                              std::to_string(spaceSize_) + " cells");
  }
  if (sizeCells > spaceSize_ - usedCells_ && config_.autoGcOnAllocFailure) {
    handle_gc();
  }
  if (sizeCells > spaceSize_ - usedCells_) {
    throw SimulationError(SimulationErrorKind::kOutOfMemory,
                          "out of memory: " + std::to_string(liveLen_) +
                              " live cells + request of " +
                              std::to_string(sizeCells) + " exceed " +
                              std::to_string(spaceSize_) + " cells");
  }
  const unsigned ring = dualRing_ ? memory_.work_ring() : 0;
  objects_[id] = ObjectRecord{id, sizeCells, ring, allocCursor_, true};
  allocCursor_ = (allocCursor_ + sizeCells) % spaceSize_;
  usedCells_ += sizeCells;
}

void Engine::handle_free(ObjectId id) {
  const auto it = objects_.find(id);
  if (it == objects_.end() || !it->second.live) {
    throw SimulationError(SimulationErrorKind::kInvalidFree,
                          "free of object " + std::to_string(id) + " that is not live");
  }
  it->second.live = false;
}

void Engine::handle_access(ObjectId id, std::uint64_t offset, std::uint64_t len,
                           AccessKind kind) {
  const auto it = objects_.find(id);
  if (it == objects_.end() || !it->second.live) {
    throw SimulationError(SimulationErrorKind::kUseAfterFree,
                          "access to object " + std::to_string(id) + " that is not live");
  }
  const ObjectRecord& obj = it->second;
  if (len == 0 || offset > obj.sizeCells || len > obj.sizeCells - offset) {
    throw SimulationError(SimulationErrorKind::kOutOfBounds,
                          "access [" + std::to_string(offset) + ", +" +
                              std::to_string(len) + ") outside object " +
                              std::to_string(id) + " of " +
                              std::to_string(obj.sizeCells) + " cells");
  }
  record(obj.baseCell, offset, len, kind, obj.ring);
}

void Engine::record(CellIndex base, std::uint64_t offset, std::uint64_t len,
                    AccessKind kind, unsigned ring) {
  const CellIndex start = translate(base, offset, spaceSize_);
  if (dualRing_) {
    memory_.record_range(ring, start, len, kind);
  } else {
    memory_.record_linear(start, len, kind);
  }
}

void Engine::handle_gc() {
  std::vector<ObjectRecord*> live;
  for (auto& [id, obj] : objects_) {
    if (obj.live) live.push_back(&obj);
  }
  std::sort(live.begin(), live.end(), [](const ObjectRecord* a, const ObjectRecord* b) {
    return a->baseCell < b->baseCell;
  });

  if (dualRing_) {
    collect_dual(live);
  } else {
    collect_single(live);
  }

  // Clean is metadata-only: dead records go, no cell is touched.
  std::erase_if(objects_, [](const auto& entry) { return !entry.second.live; });
  usedCells_ = liveLen_;
  allocCursor_ = (liveStart_ + liveLen_) % spaceSize_;
  ++gcCount_;
  if (observer_) observer_(*this);
}

void Engine::collect_dual(std::vector<ObjectRecord*>& live) {
  const unsigned from = memory_.work_ring();
  const unsigned to = memory_.idle_ring();
  const CellIndex start = policy_.next_petal(to, spaceSize_);
  CellIndex cursor = start;
  std::uint64_t moved = 0;
  for (ObjectRecord* obj : live) {
    if (config_.countGcTraffic) {
      memory_.record_range(from, obj->baseCell, obj->sizeCells, AccessKind::kRead);
      memory_.record_range(to, cursor, obj->sizeCells, AccessKind::kWrite);
    }
    obj->ring = to;
    obj->baseCell = cursor;
    cursor = (cursor + obj->sizeCells) % spaceSize_;
    moved += obj->sizeCells;
  }
  liveStart_ = start;
  liveLen_ = moved;
  gcCopiedCells_ += moved;
  memory_.swap_roles();
}

void Engine::collect_single(std::vector<ObjectRecord*>& live) {
  CellIndex cursor = 0;
  for (ObjectRecord* obj : live) {
    if (obj->baseCell != cursor) {
      if (config_.countGcTraffic) {
        memory_.record_linear(obj->baseCell, obj->sizeCells, AccessKind::kRead);
        memory_.record_linear(cursor, obj->sizeCells, AccessKind::kWrite);
      }
      gcCopiedCells_ += obj->sizeCells;
      obj->baseCell = cursor;
    }
    cursor += obj->sizeCells;
  }
  liveStart_ = 0;
  liveLen_ = cursor;
}

const ObjectRecord* Engine::find(ObjectId id) const {
  const auto it = objects_.find(id);
  return it == objects_.end() ? nullptr : &it->second;
}

std::vector<ObjectRecord> Engine::live_objects() const {
  std::vector<ObjectRecord> out;
  for (const auto& [id, obj] : objects_) {
    if (obj.live) out.push_back(obj);
  }
  std::sort(out.begin(), out.end(), [](const ObjectRecord& a, const ObjectRecord& b) {
    return a.baseCell < b.baseCell;
  });
  return out;
}

WearReport Engine::report() const {
  WearReport r;
  r.policy = policy_name(config_.policy);
  r.memSizeCells = config_.memSizeCells;
  r.countingMode = config_.countingMode;
  r.countGcTraffic = config_.countGcTraffic;
  r.gcCount = gcCount_;
  r.eventCount = eventCount_;
  r.reads.assign(memory_.reads().begin(), memory_.reads().end());
  r.writes.assign(memory_.writes().begin(), memory_.writes().end());
  r.summary = summarize(r.reads, r.writes, r.countingMode);
  return r;
}

WearReport replay(const Trace& trace, const EngineConfig& config,
                  Engine::GcObserver observer) {
  Engine engine(config);
  engine.set_gc_observer(std::move(observer));
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    try {
      engine.apply(trace.events[i]);
    } catch (const SimulationError& e) {
      throw SimulationError(e.kind(),
                            "event " + std::to_string(i) + " (" +
                                describe(trace.events[i]) + "): " + e.what(),
                            i);
    }
  }
  return engine.report();
}

}  // namespace wearsim
