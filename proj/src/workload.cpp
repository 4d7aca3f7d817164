#include "wearsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wearsim/rng.hpp"

namespace wearsim {

std::optional<Pattern> parse_pattern(std::string_view name) {
  if (name == "churn") return Pattern::kChurn;
  if (name == "hotspot") return Pattern::kHotspot;
  if (name == "loop") return Pattern::kLoop;
  return std::nullopt;
}

std::string_view pattern_name(Pattern pattern) {
  switch (pattern) {
    case Pattern::kChurn: return "churn";
    case Pattern::kHotspot: return "hotspot";
    case Pattern::kLoop: return "loop";
  }
  return "unknown";
}

std::uint64_t hot_object_count(const WorkloadSpec& spec) {
  const double hot =
      std::round(spec.hotFraction * static_cast<double>(spec.objectCount));
  return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(hot), 1,
                                   spec.objectCount);
}

std::uint64_t max_object_size(const WorkloadSpec& spec) {
  return 2 * spec.meanObjectSize - 1;
}

namespace {

constexpr double kChurnAllocShare = 0.15;
constexpr double kChurnFreeShare = 0.15;
constexpr double kHotspotReplaceShare = 0.04;
constexpr std::uint64_t kLoopSetSize = 4;

struct LiveObject {
  ObjectId id;
  std::uint64_t size;
};

class Builder {
 public:
  explicit Builder(const WorkloadSpec& spec) : spec_(spec), rng_(spec.seed) {}

  bool done() const { return ops_ >= spec_.opCount; }
  Rng& rng() { return rng_; }

  LiveObject alloc() {
    const LiveObject obj{nextId_++, rng_.between(1, max_object_size(spec_))};
    emit(AllocEvent{obj.id, obj.size});
    return obj;
  }

  void free(const LiveObject& obj) { emit(FreeEvent{obj.id}); }

  void random_access(const LiveObject& obj) {
    const std::uint64_t off = rng_.below(obj.size);
    const std::uint64_t len = rng_.between(1, obj.size - off);
    if (rng_.below(2) == 0) {
      emit(ReadEvent{obj.id, off, len});
    } else {
      emit(WriteEvent{obj.id, off, len});
    }
  }

  void write_whole(const LiveObject& obj) { emit(WriteEvent{obj.id, 0, obj.size}); }

  Trace finish() && { return std::move(trace_); }

 private:
  void emit(TraceEvent ev) {
    trace_.events.push_back(ev);
    if (++ops_ % spec_.gcEvery == 0) trace_.events.push_back(GcEvent{});
  }

  const WorkloadSpec& spec_;
  Rng rng_;
  Trace trace_;
  std::uint64_t ops_ = 0;
  ObjectId nextId_ = 1;
};

LiveObject take_random(std::vector<LiveObject>& pool, Rng& rng) {
  const std::size_t idx = rng.below(pool.size());
  const LiveObject obj = pool[idx];
  pool[idx] = pool.back();
  pool.pop_back();
  return obj;
}

void generate_churn(const WorkloadSpec& spec, Builder& b) {
  std::vector<LiveObject> live;
  while (!b.done()) {
    const double u = b.rng().unit();
    enum { kAlloc, kFree, kAccess } action =
        u < kChurnAllocShare                      ? kAlloc
        : u < kChurnAllocShare + kChurnFreeShare ? kFree
                                                  : kAccess;
    if (live.empty()) action = kAlloc;
    if (action == kAlloc && live.size() >= spec.objectCount) action = kFree;

    switch (action) {
      case kAlloc: live.push_back(b.alloc()); break;
      case kFree: b.free(take_random(live, b.rng())); break;
      case kAccess: b.random_access(live[b.rng().below(live.size())]); break;
    }
  }
}

void generate_hotspot(const WorkloadSpec& spec, Builder& b) {
  const std::uint64_t hotCount = hot_object_count(spec);
  const std::uint64_t coldCapacity = spec.objectCount - hotCount;
  std::vector<LiveObject> hot;
  std::vector<LiveObject> cold;
  for (std::uint64_t i = 0; i < spec.objectCount && !b.done(); ++i) {
    (i < hotCount ? hot : cold).push_back(b.alloc());
  }
  while (!b.done()) {
    if (coldCapacity > 0 && b.rng().unit() < kHotspotReplaceShare) {
      if (cold.size() >= coldCapacity) {
        b.free(take_random(cold, b.rng()));
      } else {
        cold.push_back(b.alloc());
      }
      continue;
    }
    const bool toHot = cold.empty() || b.rng().unit() < kHotAccessShare;
    const auto& pool = toHot ? hot : cold;
    b.random_access(pool[b.rng().below(pool.size())]);
  }
}

void generate_loop(const WorkloadSpec& spec, Builder& b) {
  std::vector<LiveObject> objects;
  for (std::uint64_t i = 0; i < spec.objectCount && !b.done(); ++i) {
    objects.push_back(b.alloc());
  }
  const std::size_t loopSize = std::min<std::size_t>(kLoopSetSize, objects.size());
  for (std::size_t i = 0; !b.done(); ++i) {
    b.write_whole(objects[i % loopSize]);
  }
}

}  // namespace

Trace generate(const WorkloadSpec& spec) {
  if (spec.opCount == 0) throw std::invalid_argument("op count must be ≥ 1");
  if (spec.meanObjectSize == 0) throw std::invalid_argument("mean object size must be ≥ 1");
  if (spec.objectCount == 0) throw std::invalid_argument("object count must be ≥ 1");
  if (spec.gcEvery == 0) throw std::invalid_argument("gc interval must be ≥ 1");
  if (spec.pattern == Pattern::kHotspot &&
      !(spec.hotFraction > 0.0 && spec.hotFraction <= 1.0)) {
    throw std::invalid_argument("hot fraction must be in (0, 1]");
  }
  if (spec.meanObjectSize > std::numeric_limits<std::uint32_t>::max() ||
      spec.objectCount > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("object count and mean size must fit in 32 bits");
  }

  Builder builder(spec);
  switch (spec.pattern) {
    case Pattern::kChurn: generate_churn(spec, builder); break;
    case Pattern::kHotspot: generate_hotspot(spec, builder); break;
    case Pattern::kLoop: generate_loop(spec, builder); break;
  }
  Trace trace = std::move(builder).finish();
  const std::uint64_t ringCells = 2 * spec.objectCount * max_object_size(spec);
  trace.header.suggestedMemSizeCells = std::max<std::uint64_t>(4, 2 * ringCells);
  return trace;
}

}  // namespace wearsim
