#include "doctest.h"

#include <set>

#include "wearsim/engine.hpp"
#include "wearsim/workload.hpp"

using namespace wearsim;

namespace {

std::uint64_t gc_events(const Trace& t) {
  std::uint64_t n = 0;
  for (const auto& ev : t.events) n += std::holds_alternative<GcEvent>(ev);
  return n;
}

}  // namespace

TEST_CASE("generation is deterministic") {
  for (Pattern p : {Pattern::kChurn, Pattern::kHotspot, Pattern::kLoop}) {
    const WorkloadSpec spec{.pattern = p, .opCount = 5000, .seed = 42};
    CHECK(write_trace_text(generate(spec)) == write_trace_text(generate(spec)));
  }
  const WorkloadSpec a{.seed = 1};
  const WorkloadSpec b{.seed = 2};
  CHECK(generate(a) != generate(b));
}

TEST_CASE("churn with 100 objects and 10k ops validates") {
  const Trace t = generate({.pattern = Pattern::kChurn, .objectCount = 100,
                            .opCount = 10'000, .seed = 1});
  CHECK(validate_trace(t).empty());
  CHECK(t.events.size() == 10'000 + gc_events(t));
  CHECK(gc_events(t) == 10);
}

TEST_CASE("every pattern validates across seeds and shapes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (Pattern p : {Pattern::kChurn, Pattern::kHotspot, Pattern::kLoop}) {
      const WorkloadSpec spec{.pattern = p,
                              .objectCount = 1 + seed * 7,
                              .opCount = 3000,
                              .meanObjectSize = 1 + seed,
                              .hotFraction = 0.2,
                              .gcEvery = 50 + seed,
                              .seed = seed};
      const Trace t = generate(spec);
      CHECK(validate_trace(t).empty());
      // The suggested memory holds every live set the generator can produce.
      EngineConfig config{.memSizeCells = *t.header.suggestedMemSizeCells};
      CHECK_NOTHROW(replay(t, config));
    }
  }
}

TEST_CASE("hotspot concentrates accesses on the hot set") {
  const WorkloadSpec spec{.pattern = Pattern::kHotspot, .objectCount = 500,
                          .opCount = 50'000, .hotFraction = 0.01, .seed = 5};
  const Trace t = generate(spec);
  REQUIRE(hot_object_count(spec) == 5);
  // The first hot_object_count allocations are the hot set.
  std::set<ObjectId> hot;
  for (const auto& ev : t.events) {
    if (const auto* a = std::get_if<AllocEvent>(&ev); a && hot.size() < 5) hot.insert(a->id);
  }
  std::uint64_t total = 0, toHot = 0;
  for (const auto& ev : t.events) {
    ObjectId id = 0;
    if (const auto* r = std::get_if<ReadEvent>(&ev)) id = r->id;
    else if (const auto* w = std::get_if<WriteEvent>(&ev)) id = w->id;
    else continue;
    ++total;
    toHot += hot.count(id);
  }
  REQUIRE(total > 0);
  CHECK(static_cast<double>(toHot) / static_cast<double>(total) >= 0.85);
}

TEST_CASE("loop writes a small fixed set in a cycle") {
  const Trace t = generate({.pattern = Pattern::kLoop, .objectCount = 20,
                            .opCount = 1000, .gcEvery = 10'000});
  std::set<ObjectId> written;
  for (const auto& ev : t.events) {
    if (const auto* w = std::get_if<WriteEvent>(&ev)) {
      written.insert(w->id);
      CHECK(w->offsetCells == 0);
    }
  }
  CHECK(written.size() == 4);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(generate({.opCount = 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.meanObjectSize = 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.objectCount = 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.gcEvery = 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.pattern = Pattern::kHotspot, .hotFraction = 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate({.pattern = Pattern::kHotspot, .hotFraction = 1.5}),
                  std::invalid_argument);
}

TEST_CASE("pattern names") {
  for (Pattern p : {Pattern::kChurn, Pattern::kHotspot, Pattern::kLoop}) {
    CHECK(parse_pattern(pattern_name(p)) == p);
  }
  CHECK_FALSE(parse_pattern("zipf").has_value());
}
