#include "wearsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>

#include "json.hpp"

namespace wearsim {

std::optional<CountingMode> parse_counting_mode(std::string_view name) {
  if (name == "accesses") return CountingMode::kAccesses;
  if (name == "writes") return CountingMode::kWritesOnly;
  return std::nullopt;
}

std::string_view counting_mode_name(CountingMode mode) {
  return mode == CountingMode::kAccesses ? "accesses" : "writes";
}

std::vector<std::uint64_t> cell_counts(std::span<const std::uint64_t> reads,
                                       std::span<const std::uint64_t> writes,
                                       CountingMode mode) {
  if (reads.size() != writes.size()) {
    throw std::invalid_argument("read and write counter arrays differ in length");
  }
  if (mode == CountingMode::kWritesOnly) return {writes.begin(), writes.end()};
  std::vector<std::uint64_t> counts(reads.size());
  std::transform(reads.begin(), reads.end(), writes.begin(), counts.begin(),
                 std::plus<>{});
  return counts;
}

SummaryStats summarize_counts(std::span<const std::uint64_t> counts) {
  if (counts.empty()) throw std::invalid_argument("cannot summarize zero cells");
  SummaryStats s;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint64_t c = counts[i];
    total += c;
    if (c > 0) ++s.touchedCellCount;
    if (c > s.maxCell) {
      s.maxCell = c;
      s.maxCellAddress = i;
    }
  }
  s.avgAllCells = static_cast<double>(total) / static_cast<double>(counts.size());
  if (s.touchedCellCount > 0) {
    s.avgTouchedCells =
        static_cast<double>(total) / static_cast<double>(s.touchedCellCount);
  }
  return s;
}

SummaryStats summarize(std::span<const std::uint64_t> reads,
                       std::span<const std::uint64_t> writes, CountingMode mode) {
  return summarize_counts(cell_counts(reads, writes, mode));
}

std::vector<std::uint64_t> top_n_counts(std::span<const std::uint64_t> counts,
                                        std::uint64_t n) {
  std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
  const std::size_t keep = std::min<std::size_t>(n, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + keep, sorted.end(),
                    std::greater<>{});
  sorted.resize(n, 0);
  return sorted;
}

std::vector<std::uint64_t> top_n_distribution(std::span<const std::uint64_t> reads,
                                              std::span<const std::uint64_t> writes,
                                              CountingMode mode, std::uint64_t n) {
  return top_n_counts(cell_counts(reads, writes, mode), n);
}

LifespanExtension lifespan_extension(const SummaryStats& baseline,
                                     const SummaryStats& candidate) {
  if (candidate.avgAllCells <= 0.0 || candidate.maxCell == 0) {
    throw UndefinedExtensionError(
        "lifespan extension undefined: candidate has zero accesses");
  }
  return {baseline.avgAllCells / candidate.avgAllCells,
          static_cast<double>(baseline.maxCell) /
              static_cast<double>(candidate.maxCell)};
}

std::string format_real(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

ReportSummary summary_of(const WearReport& report) {
  return {report.policy,  report.memSizeCells, report.countingMode,
          report.countGcTraffic, report.gcCount, report.eventCount,
          report.summary};
}

void write_summary_json(const ReportSummary& s, std::ostream& sink) {
  const nlohmann::ordered_json doc = {
      {"policy", s.policy},
      {"mem_size_cells", s.memSizeCells},
      {"counting_mode", counting_mode_name(s.countingMode)},
      {"count_gc_traffic", s.countGcTraffic},
      {"gc_count", s.gcCount},
      {"event_count", s.eventCount},
      {"summary",
       {
           {"avg_all_cells", s.summary.avgAllCells},
           {"avg_touched_cells", s.summary.avgTouchedCells},
           {"max_cell", s.summary.maxCell},
           {"max_cell_address", s.summary.maxCellAddress},
           {"touched_cell_count", s.summary.touchedCellCount},
       }},
  };
  sink << doc.dump(2) << '\n';
  if (!sink) throw std::runtime_error("I/O error while writing summary");
}

ReportSummary read_summary_json(std::istream& source) {
  try {
    const auto doc = nlohmann::json::parse(source);
    ReportSummary s;
    s.policy = doc.at("policy").get<std::string>();
    s.memSizeCells = doc.at("mem_size_cells").get<std::uint64_t>();
    const auto mode = parse_counting_mode(doc.at("counting_mode").get<std::string>());
    if (!mode) throw ReportFormatError("unknown counting_mode");
    s.countingMode = *mode;
    s.countGcTraffic = doc.at("count_gc_traffic").get<bool>();
    s.gcCount = doc.at("gc_count").get<std::uint64_t>();
    s.eventCount = doc.at("event_count").get<std::uint64_t>();
    const auto& sum = doc.at("summary");
    s.summary.avgAllCells = sum.at("avg_all_cells").get<double>();
    s.summary.avgTouchedCells = sum.at("avg_touched_cells").get<double>();
    s.summary.maxCell = sum.at("max_cell").get<std::uint64_t>();
    s.summary.maxCellAddress = sum.at("max_cell_address").get<std::uint64_t>();
    s.summary.touchedCellCount = sum.at("touched_cell_count").get<std::uint64_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ReportFormatError(std::string("malformed summary json: ") + e.what());
  }
}

void write_percell_csv(std::span<const std::uint64_t> reads,
                       std::span<const std::uint64_t> writes, std::ostream& sink) {
  if (reads.size() != writes.size()) {
    throw std::invalid_argument("read and write counter arrays differ in length");
  }
  sink << "address,reads,writes\n";
  for (std::size_t i = 0; i < reads.size(); ++i) {
    sink << i << ',' << reads[i] << ',' << writes[i] << '\n';
  }
  if (!sink) throw std::runtime_error("I/O error while writing per-cell counts");
}

PerCellCounts read_percell_csv(std::istream& source) {
  std::string line;
  if (!std::getline(source, line) || line != "address,reads,writes") {
    throw ReportFormatError("per-cell csv must start with 'address,reads,writes'");
  }
  PerCellCounts out;
  std::size_t row = 1;
  while (std::getline(source, line)) {
    ++row;
    if (line.empty()) continue;
    std::uint64_t values[3];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int field = 0; field < 3; ++field) {
      const auto [next, ec] = std::from_chars(p, end, values[field]);
      const char expected = field < 2 ? ',' : '\0';
      const bool terminated = field < 2 ? (next != end && *next == expected) : next == end;
      if (ec != std::errc{} || !terminated) {
        throw ReportFormatError("malformed per-cell csv row " + std::to_string(row));
      }
      p = next + 1;
    }
    if (values[0] != out.reads.size()) {
      throw ReportFormatError("per-cell csv addresses must be consecutive from 0 (row " +
                              std::to_string(row) + ")");
    }
    out.reads.push_back(values[1]);
    out.writes.push_back(values[2]);
  }
  if (out.reads.empty()) throw ReportFormatError("per-cell csv has no rows");
  return out;
}

void write_topn_csv(std::span<const std::uint64_t> top, std::ostream& sink) {
  sink << "rank,count\n";
  for (std::size_t i = 0; i < top.size(); ++i) sink << (i + 1) << ',' << top[i] << '\n';
  if (!sink) throw std::runtime_error("I/O error while writing top-n distribution");
}

void write_compare_csv(std::span<const CompareRow> rows, std::ostream& sink) {
  sink << "trace,policy,avg_all,avg_touched,max,touched,gc_count\n";
  for (const auto& r : rows) {
    sink << r.trace << ',' << r.policy << ',' << format_real(r.summary.avgAllCells)
         << ',' << format_real(r.summary.avgTouchedCells) << ',' << r.summary.maxCell
         << ',' << r.summary.touchedCellCount << ',' << r.gcCount << '\n';
  }
  if (!sink) throw std::runtime_error("I/O error while writing comparison");
}

void export_report(const WearReport& report, ReportFormat format,
                   std::ostream& sink, const ExportOptions& options) {
  switch (format) {
    case ReportFormat::kSummaryJson:
      write_summary_json(summary_of(report), sink);
      return;
    case ReportFormat::kPercellCsv:
      write_percell_csv(report.reads, report.writes, sink);
      return;
    case ReportFormat::kTopnCsv:
      write_topn_csv(top_n_distribution(report.reads, report.writes,
                                        report.countingMode, options.topN),
                     sink);
      return;
    case ReportFormat::kCompareCsv: {
      const CompareRow row{options.traceName, report.policy, report.summary,
                           report.gcCount};
      write_compare_csv(std::span(&row, 1), sink);
      return;
    }
  }
}

}  // namespace wearsim
