#include "wearsim/policy.hpp"

#include <charconv>
#include <cmath>

namespace wearsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint64_t floor_fraction(std::uint64_t ringSize, double fraction) {
  return static_cast<std::uint64_t>(
      std::floor(static_cast<double>(ringSize) * fraction));
}

}  // namespace

PolicyKind parse_policy(std::string_view text) {
  if (text == "golden") return GoldenPolicy{};
  if (text == "quarter") return QuarterPolicy{};
  if (text == "none") return NoShiftPolicy{};
  if (text == "single") return SingleCompactPolicy{};

  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const char* first = arg.data();
  const char* last = arg.data() + arg.size();

  if (name == "fraction" && !arg.empty()) {
    double f = 0.0;
    const auto [end, ec] = std::from_chars(first, last, f);
    if (ec != std::errc{} || end != last) {
      throw std::invalid_argument("bad fraction in policy '" + std::string(text) + "'");
    }
    if (!(f >= 0.0 && f < 1.0)) {
      throw std::invalid_argument("fraction must be in [0, 1): '" + std::string(text) + "'");
    }
    return FractionPolicy{f};
  }
  if (name == "random" && !arg.empty()) {
    std::uint64_t seed = 0;
    const auto [end, ec] = std::from_chars(first, last, seed);
    if (ec != std::errc{} || end != last) {
      throw std::invalid_argument("bad seed in policy '" + std::string(text) + "'");
    }
    return RandomPolicy{seed};
  }
  throw std::invalid_argument(
      "unknown policy '" + std::string(text) +
      "' (expected golden, quarter, fraction:<f>, none, random:<seed>, single)");
}

std::string policy_name(const PolicyKind& kind) {
  return std::visit(
      Overloaded{
          [](const GoldenPolicy&) -> std::string { return "golden"; },
          [](const QuarterPolicy&) -> std::string { return "quarter"; },
          [](const FractionPolicy& p) -> std::string {
            char buf[64];
            const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p.fraction);
            return "fraction:" + std::string(buf, end);
          },
          [](const NoShiftPolicy&) -> std::string { return "none"; },
          [](const RandomPolicy& p) -> std::string {
            return "random:" + std::to_string(p.seed);
          },
          [](const SingleCompactPolicy&) -> std::string { return "single"; },
      },
      kind);
}

bool is_dual_ring(const PolicyKind& kind) {
  return !std::holds_alternative<SingleCompactPolicy>(kind);
}

std::uint64_t golden_shift(std::uint64_t ringSize) {
  return floor_fraction(ringSize, kGoldenShiftFraction);
}

std::uint64_t constant_shift(const PolicyKind& kind, std::uint64_t ringSize) {
  if (std::holds_alternative<GoldenPolicy>(kind)) return golden_shift(ringSize);
  if (std::holds_alternative<QuarterPolicy>(kind)) return floor_fraction(ringSize, 0.25);
  if (const auto* f = std::get_if<FractionPolicy>(&kind)) {
    return floor_fraction(ringSize, f->fraction);
  }
  if (std::holds_alternative<NoShiftPolicy>(kind)) return 0;
  throw PolicyContractError("policy '" + policy_name(kind) +
                            "' has no constant shift");
}

PolicyState::PolicyState(PolicyKind kind) : kind_(kind) {
  if (const auto* r = std::get_if<RandomPolicy>(&kind_)) rng_ = Rng(r->seed);
}

CellIndex PolicyState::next_petal(unsigned ring, std::uint64_t ringSize) {
  if (!is_dual_ring(kind_)) {
    throw PolicyContractError("single-space compaction has no petal locations");
  }
  if (ring > 1) throw std::out_of_range("ring index must be 0 or 1");
  const CellIndex used = nextStart_[ring];
  if (std::holds_alternative<RandomPolicy>(kind_)) {
    nextStart_[ring] = rng_.below(ringSize);
  } else if (std::holds_alternative<NoShiftPolicy>(kind_)) {
    nextStart_[ring] = 0;
  } else {
    nextStart_[ring] = (used + constant_shift(kind_, ringSize)) % ringSize;
  }
  return used;
}

std::vector<CellIndex> petal_sequence(const PolicyKind& kind,
                                      std::uint64_t ringSize,
                                      std::uint64_t count) {
  PolicyState state(kind);
  std::vector<CellIndex> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(state.next_petal(0, ringSize));
  return out;
}

}  // namespace wearsim
