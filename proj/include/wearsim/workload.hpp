#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "wearsim/trace.hpp"

namespace wearsim {

enum class Pattern {
  kChurn,    // steady alloc/free, uniform reads and writes over live objects
  kHotspot,  // a hot fraction of objects takes 90% of reads and writes
  kLoop,     // a small fixed set of objects rewritten in a cycle
};

std::optional<Pattern> parse_pattern(std::string_view name);
std::string_view pattern_name(Pattern pattern);

struct WorkloadSpec {
  Pattern pattern = Pattern::kChurn;
  std::uint64_t objectCount = 100;
  std::uint64_t opCount = 10'000;
  std::uint64_t meanObjectSize = 8;
  double hotFraction = 0.01;  // hotspot only
  std::uint64_t gcEvery = 1'000;
  std::uint64_t seed = 1;
};

/// Share of hotspot reads/writes aimed at the hot set.
inline constexpr double kHotAccessShare = 0.9;

/// Number of objects in the hotspot hot set (at least one).
std::uint64_t hot_object_count(const WorkloadSpec& spec);

/// Largest object size the generator emits for a given mean.
std::uint64_t max_object_size(const WorkloadSpec& spec);

/// Deterministic synthetic trace. opCount counts alloc/free/read/write
/// events; an explicit G is appended after every gcEvery of them. The header
/// suggests a memory size whose rings hold twice the worst-case live set.
/// Throws std::invalid_argument for out-of-range fields.
Trace generate(const WorkloadSpec& spec);

}  // namespace wearsim
