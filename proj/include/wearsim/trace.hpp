#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wearsim {

using ObjectId = std::uint64_t;

struct AllocEvent {
  ObjectId id = 0;
  std::uint64_t sizeCells = 1;
  bool operator==(const AllocEvent&) const = default;
};

struct FreeEvent {
  ObjectId id = 0;
  bool operator==(const FreeEvent&) const = default;
};

struct ReadEvent {
  ObjectId id = 0;
  std::uint64_t offsetCells = 0;
  std::uint64_t lenCells = 1;
  bool operator==(const ReadEvent&) const = default;
};

struct WriteEvent {
  ObjectId id = 0;
  std::uint64_t offsetCells = 0;
  std::uint64_t lenCells = 1;
  bool operator==(const WriteEvent&) const = default;
};

struct GcEvent {
  bool operator==(const GcEvent&) const = default;
};

/// One object-relative memory operation. Objects are addressed by id and
/// cell offset, never by absolute address, since collection relocates them.
using TraceEvent =
    std::variant<AllocEvent, FreeEvent, ReadEvent, WriteEvent, GcEvent>;

inline constexpr int kTraceFormatVersion = 1;

struct TraceHeader {
  int formatVersion = kTraceFormatVersion;
  std::optional<std::uint64_t> suggestedMemSizeCells;
  bool operator==(const TraceHeader&) const = default;
};

struct Trace {
  TraceHeader header;
  std::vector<TraceEvent> events;
  bool operator==(const Trace&) const = default;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what + " at line " + std::to_string(line)),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses the text trace format:
///
///   #! wearsim-trace v1      (optional, first line only)
///   #mem <cells>             (optional suggested memory size)
///   # anything               (comment)
///   A <id> <size> | F <id> | R <id> <off> <len> | W <id> <off> <len> | G
///
/// Fields are decimal unsigned integers separated by single spaces. Blank
/// lines are ignored. Throws TraceParseError naming the 1-based line.
Trace parse_trace(std::istream& input);
Trace parse_trace_text(std::string_view text);

/// Emits the canonical form; parse_trace(write_trace(t)) == t.
void write_trace(const Trace& trace, std::ostream& output);
std::string write_trace_text(const Trace& trace);

enum class TraceRule {
  kDuplicateAlloc,
  kFreeOfDeadObject,
  kAccessOfDeadObject,
  kOutOfBounds,
  kZeroLength,
};

std::string_view rule_name(TraceRule rule);

struct Violation {
  std::size_t eventIndex = 0;
  TraceRule rule = TraceRule::kDuplicateAlloc;
  std::string message;
};

/// Replays the live-object rules over the events. Violations are data: an
/// empty result means the trace is valid.
std::vector<Violation> validate_trace(const Trace& trace);

std::string describe(const TraceEvent& event);

}  // namespace wearsim
