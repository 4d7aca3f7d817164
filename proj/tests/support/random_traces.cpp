#include "random_traces.hpp"

#include <algorithm>
#include <vector>

#include "wearsim/rng.hpp"

namespace wearsim::testing {

Trace random_valid_trace(std::uint64_t seed, std::uint64_t eventCount,
                         std::uint64_t memSizeCells) {
  Rng rng(seed);
  const std::uint64_t ring = memSizeCells / 2;
  const std::uint64_t liveBudget = std::max<std::uint64_t>(1, ring / 2);
  const std::uint64_t maxSize = std::max<std::uint64_t>(1, ring / 8);

  struct Obj {
    ObjectId id;
    std::uint64_t size;
  };
  std::vector<Obj> live;
  std::vector<ObjectId> freed;
  std::uint64_t liveCells = 0;
  ObjectId nextId = 1;

  Trace trace;
  trace.header.suggestedMemSizeCells = memSizeCells;
  while (trace.events.size() < eventCount) {
    const std::uint64_t roll = rng.below(100);
    if (roll < 2) {
      trace.events.push_back(GcEvent{});
    } else if (roll < 30 || live.empty()) {
      const std::uint64_t size = rng.between(1, maxSize);
      if (liveCells + size > liveBudget) {
        if (live.empty()) continue;
        const std::size_t idx = rng.below(live.size());
        trace.events.push_back(FreeEvent{live[idx].id});
        liveCells -= live[idx].size;
        freed.push_back(live[idx].id);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(idx));
        continue;
      }
      ObjectId id = nextId;
      if (!freed.empty() && rng.below(4) == 0) {
        const std::size_t idx = rng.below(freed.size());
        id = freed[idx];
        freed.erase(freed.begin() + static_cast<std::ptrdiff_t>(idx));
      } else {
        ++nextId;
      }
      trace.events.push_back(AllocEvent{id, size});
      live.push_back({id, size});
      liveCells += size;
    } else if (roll < 50) {
      const std::size_t idx = rng.below(live.size());
      trace.events.push_back(FreeEvent{live[idx].id});
      liveCells -= live[idx].size;
      freed.push_back(live[idx].id);
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(idx));
    } else {
      const Obj& obj = live[rng.below(live.size())];
      const std::uint64_t off = rng.below(obj.size);
      const std::uint64_t len = rng.between(1, obj.size - off);
      if (rng.below(2) == 0) {
        trace.events.push_back(ReadEvent{obj.id, off, len});
      } else {
        trace.events.push_back(WriteEvent{obj.id, off, len});
      }
    }
  }
  return trace;
}

std::uint64_t app_access_cells(const Trace& trace) {
  std::uint64_t cells = 0;
  for (const auto& ev : trace.events) {
    if (const auto* r = std::get_if<ReadEvent>(&ev)) cells += r->lenCells;
    if (const auto* w = std::get_if<WriteEvent>(&ev)) cells += w->lenCells;
  }
  return cells;
}

std::optional<std::string> find_overlap(const Engine& engine) {
  const auto objs = engine.live_objects();  // ascending base
  const std::uint64_t space = engine.space_size();
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const auto& a = objs[i];
    const auto& b = objs[(i + 1) % objs.size()];
    if (objs.size() == 1) {
      if (a.sizeCells > space) return "object larger than its space";
      break;
    }
    // Distance from a's base to the next base around the ring.
    const std::uint64_t gap = (b.baseCell + space - a.baseCell) % space;
    if (a.sizeCells > gap) {
      return "objects " + std::to_string(a.id) + " and " + std::to_string(b.id) + " overlap";
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_contiguity(const Engine& engine) {
  auto objs = engine.live_objects();
  const std::uint64_t space = engine.space_size();
  const std::uint64_t start = engine.live_start();
  std::sort(objs.begin(), objs.end(), [&](const ObjectRecord& a, const ObjectRecord& b) {
    return (a.baseCell + space - start) % space < (b.baseCell + space - start) % space;
  });
  std::uint64_t expected = 0;
  for (const auto& obj : objs) {
    if ((obj.baseCell + space - start) % space != expected) {
      return "gap before object " + std::to_string(obj.id);
    }
    expected += obj.sizeCells;
  }
  if (expected != engine.live_len()) return "live length does not match live objects";
  if (engine.used_cells() != engine.live_len()) return "used cells differ from live length";
  if (engine.alloc_cursor() != (start + expected) % space) return "cursor not at end of live block";
  return std::nullopt;
}

}  // namespace wearsim::testing
