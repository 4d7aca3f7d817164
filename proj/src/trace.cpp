#include "wearsim/trace.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace wearsim {

namespace {

constexpr std::string_view kMagicPrefix = "#! wearsim-trace v";
constexpr std::string_view kMemPrefix = "#mem ";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t space = line.find(' ', start);
    if (space == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, space - start));
    start = space + 1;
  }
  return fields;
}

std::uint64_t parse_unsigned(std::string_view field, std::size_t line) {
  std::uint64_t value = 0;
  if (field.empty()) {
    throw TraceParseError(line, "empty field (fields are separated by single spaces)");
  }
  const auto [end, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw TraceParseError(line, "integer out of range '" + std::string(field) + "'");
  }
  if (ec != std::errc{} || end != field.data() + field.size()) {
    throw TraceParseError(line, "non-integer field '" + std::string(field) + "'");
  }
  return value;
}

void expect_fields(const std::vector<std::string_view>& fields,
                   std::size_t expected, std::size_t line) {
  if (fields.size() != expected) {
    throw TraceParseError(
        line, "wrong field count for '" + std::string(fields.front()) +
                  "': expected " + std::to_string(expected - 1) +
                  " operand(s), got " + std::to_string(fields.size() - 1));
  }
}

TraceEvent parse_event(std::string_view text, std::size_t line) {
  const auto fields = split_fields(text);
  const std::string_view op = fields.front();
  if (op == "A") {
    expect_fields(fields, 3, line);
    AllocEvent ev{parse_unsigned(fields[1], line),
                  parse_unsigned(fields[2], line)};
    if (ev.sizeCells == 0) throw TraceParseError(line, "size must be ≥ 1");
    return ev;
  }
  if (op == "F") {
    expect_fields(fields, 2, line);
    return FreeEvent{parse_unsigned(fields[1], line)};
  }
  if (op == "R" || op == "W") {
    expect_fields(fields, 4, line);
    const ObjectId id = parse_unsigned(fields[1], line);
    const std::uint64_t off = parse_unsigned(fields[2], line);
    const std::uint64_t len = parse_unsigned(fields[3], line);
    if (len == 0) throw TraceParseError(line, "length must be ≥ 1");
    if (op == "R") return ReadEvent{id, off, len};
    return WriteEvent{id, off, len};
  }
  if (op == "G") {
    expect_fields(fields, 1, line);
    return GcEvent{};
  }
  throw TraceParseError(line, "unknown opcode '" + std::string(op) + "'");
}

}  // namespace

Trace parse_trace(std::istream& input) {
  Trace trace;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(input, raw)) {
    ++line;
    std::string_view text = raw;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.empty()) continue;

    if (text.front() == '#') {
      if (line == 1 && text.starts_with(kMagicPrefix)) {
        const auto version = parse_unsigned(text.substr(kMagicPrefix.size()), line);
        if (version != kTraceFormatVersion) {
          throw TraceParseError(line, "unsupported trace format version " +
                                          std::to_string(version));
        }
        trace.header.formatVersion = static_cast<int>(version);
      } else if (text.starts_with(kMemPrefix)) {
        trace.header.suggestedMemSizeCells =
            parse_unsigned(text.substr(kMemPrefix.size()), line);
      }
      continue;
    }
    trace.events.push_back(parse_event(text, line));
  }
  if (input.bad()) throw std::runtime_error("I/O error while reading trace");
  return trace;
}

Trace parse_trace_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

namespace {

struct EventWriter {
  std::ostream& out;
  void operator()(const AllocEvent& e) const { out << "A " << e.id << ' ' << e.sizeCells << '\n'; }
  void operator()(const FreeEvent& e) const { out << "F " << e.id << '\n'; }
  void operator()(const ReadEvent& e) const {
    out << "R " << e.id << ' ' << e.offsetCells << ' ' << e.lenCells << '\n';
  }
  void operator()(const WriteEvent& e) const {
    out << "W " << e.id << ' ' << e.offsetCells << ' ' << e.lenCells << '\n';
  }
  void operator()(const GcEvent&) const { out << "G\n"; }
};

}  // namespace

void write_trace(const Trace& trace, std::ostream& output) {
  output << kMagicPrefix << trace.header.formatVersion << '\n';
  if (trace.header.suggestedMemSizeCells) {
    output << kMemPrefix << *trace.header.suggestedMemSizeCells << '\n';
  }
  const EventWriter writer{output};
  for (const auto& ev : trace.events) std::visit(writer, ev);
  if (!output) throw std::runtime_error("I/O error while writing trace");
}

std::string write_trace_text(const Trace& trace) {
  std::ostringstream out;
  write_trace(trace, out);
  return out.str();
}

std::string describe(const TraceEvent& event) {
  std::ostringstream out;
  std::visit(EventWriter{out}, event);
  std::string text = out.str();
  text.pop_back();
  return text;
}

std::string_view rule_name(TraceRule rule) {
  switch (rule) {
    case TraceRule::kDuplicateAlloc: return "alloc of live object";
    case TraceRule::kFreeOfDeadObject: return "free of dead object";
    case TraceRule::kAccessOfDeadObject: return "access of dead object";
    case TraceRule::kOutOfBounds: return "out-of-bounds access";
    case TraceRule::kZeroLength: return "zero length";
  }
  return "unknown";
}

std::vector<Violation> validate_trace(const Trace& trace) {
  std::vector<Violation> violations;
  std::unordered_map<ObjectId, std::uint64_t> live;  // id -> size

  auto flag = [&](std::size_t index, TraceRule rule, const TraceEvent& ev) {
    violations.push_back(
        {index, rule, std::string(rule_name(rule)) + ": " + describe(ev)});
  };
  auto check_access = [&](std::size_t index, ObjectId id, std::uint64_t off,
                          std::uint64_t len, const TraceEvent& ev) {
    const auto it = live.find(id);
    if (it == live.end()) {
      flag(index, TraceRule::kAccessOfDeadObject, ev);
    } else if (len == 0) {
      flag(index, TraceRule::kZeroLength, ev);
    } else if (off > it->second || len > it->second - off) {
      flag(index, TraceRule::kOutOfBounds, ev);
    }
  };

  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const TraceEvent& ev = trace.events[i];
    if (const auto* a = std::get_if<AllocEvent>(&ev)) {
      if (a->sizeCells == 0) {
        flag(i, TraceRule::kZeroLength, ev);
      } else if (!live.emplace(a->id, a->sizeCells).second) {
        flag(i, TraceRule::kDuplicateAlloc, ev);
      }
    } else if (const auto* f = std::get_if<FreeEvent>(&ev)) {
      if (live.erase(f->id) == 0) flag(i, TraceRule::kFreeOfDeadObject, ev);
    } else if (const auto* r = std::get_if<ReadEvent>(&ev)) {
      check_access(i, r->id, r->offsetCells, r->lenCells, ev);
    } else if (const auto* w = std::get_if<WriteEvent>(&ev)) {
      check_access(i, w->id, w->offsetCells, w->lenCells, ev);
    }
  }
  return violations;
}

}  // namespace wearsim
