#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wearsim/memory.hpp"
#include "wearsim/rng.hpp"

namespace wearsim {

/// 1 - 1/phi = (3 - sqrt(5)) / 2, the golden-angle share of a full turn.
inline constexpr double kGoldenShiftFraction = 0.38196601125010515179541316563436;

/// Golden-ratio rotation of the compaction start.
struct GoldenPolicy {
  bool operator==(const GoldenPolicy&) const = default;
};
/// Rotation by a quarter of the ring.
struct QuarterPolicy {
  bool operator==(const QuarterPolicy&) const = default;
};
/// Rotation by a constant fraction f in [0, 1) of the ring.
struct FractionPolicy {
  double fraction = 0.0;
  bool operator==(const FractionPolicy&) const = default;
};
/// Always compact to the head of the idle ring.
struct NoShiftPolicy {
  bool operator==(const NoShiftPolicy&) const = default;
};
/// Seeded uniform start location after each use.
struct RandomPolicy {
  std::uint64_t seed = 0;
  bool operator==(const RandomPolicy&) const = default;
};
/// Single-space mark-compact toward address 0; no ring alternation.
struct SingleCompactPolicy {
  bool operator==(const SingleCompactPolicy&) const = default;
};

using PolicyKind = std::variant<GoldenPolicy, QuarterPolicy, FractionPolicy,
                                NoShiftPolicy, RandomPolicy, SingleCompactPolicy>;

/// Accepts `golden`, `quarter`, `fraction:<f>`, `none`, `random:<seed>`,
/// `single`. Throws std::invalid_argument otherwise.
PolicyKind parse_policy(std::string_view text);

/// Inverse of parse_policy.
std::string policy_name(const PolicyKind& kind);

bool is_dual_ring(const PolicyKind& kind);

/// floor(ringSize * (3 - sqrt(5)) / 2). Exact for ringSize < 2^40.
std::uint64_t golden_shift(std::uint64_t ringSize);

/// floor(ringSize * fraction) for the constant-shift kinds.
std::uint64_t constant_shift(const PolicyKind& kind, std::uint64_t ringSize);

class PolicyContractError : public std::logic_error {
  using std::logic_error::logic_error;
};

/// Per-ring compaction start ("petal") locations. Both rings begin at cell 0,
/// so a ring's first use as a compaction destination starts at its head.
class PolicyState {
 public:
  explicit PolicyState(PolicyKind kind);

  const PolicyKind& kind() const { return kind_; }
  const std::array<CellIndex, 2>& next_start() const { return nextStart_; }

  /// Returns the start location for this compaction into `ring` and advances
  /// the ring's location for its next turn. Throws PolicyContractError for
  /// the single-space kind.
  CellIndex next_petal(unsigned ring, std::uint64_t ringSize);

 private:
  PolicyKind kind_;
  std::array<CellIndex, 2> nextStart_{0, 0};
  Rng rng_;
};

/// The first `count` start locations one ring receives under `kind`.
std::vector<CellIndex> petal_sequence(const PolicyKind& kind,
                                      std::uint64_t ringSize,
                                      std::uint64_t count);

}  // namespace wearsim
