#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wearsim {

enum class CountingMode {
  kAccesses,    // reads + writes
  kWritesOnly,  // writes only
};

std::optional<CountingMode> parse_counting_mode(std::string_view name);
std::string_view counting_mode_name(CountingMode mode);

struct SummaryStats {
  double avgAllCells = 0.0;      // total count / all cells
  double avgTouchedCells = 0.0;  // total count / cells with count > 0
  std::uint64_t maxCell = 0;
  std::uint64_t maxCellAddress = 0;  // lowest address among ties
  std::uint64_t touchedCellCount = 0;
  bool operator==(const SummaryStats&) const = default;
};

/// Everything one simulation run produces. Counters cover the full memory in
/// linear address order (ring 0 then ring 1).
struct WearReport {
  std::string policy;
  std::uint64_t memSizeCells = 0;
  CountingMode countingMode = CountingMode::kAccesses;
  bool countGcTraffic = true;
  std::uint64_t gcCount = 0;
  std::uint64_t eventCount = 0;
  std::vector<std::uint64_t> reads;
  std::vector<std::uint64_t> writes;
  SummaryStats summary;
  bool operator==(const WearReport&) const = default;
};

/// Per-cell counts under `mode`.
std::vector<std::uint64_t> cell_counts(std::span<const std::uint64_t> reads,
                                       std::span<const std::uint64_t> writes,
                                       CountingMode mode);

/// Throws std::invalid_argument for zero cells or mismatched spans.
SummaryStats summarize(std::span<const std::uint64_t> reads,
                       std::span<const std::uint64_t> writes, CountingMode mode);
SummaryStats summarize_counts(std::span<const std::uint64_t> counts);

/// The n largest per-cell counts, descending, zero-padded to length n.
std::vector<std::uint64_t> top_n_distribution(std::span<const std::uint64_t> reads,
                                              std::span<const std::uint64_t> writes,
                                              CountingMode mode, std::uint64_t n);
std::vector<std::uint64_t> top_n_counts(std::span<const std::uint64_t> counts,
                                        std::uint64_t n);

struct LifespanExtension {
  double avgExtension = 0.0;
  double maxExtension = 0.0;
};

class UndefinedExtensionError : public std::domain_error {
  using std::domain_error::domain_error;
};

/// baseline / candidate for both the all-cell average and the maximum.
/// Throws UndefinedExtensionError when a candidate statistic is zero.
LifespanExtension lifespan_extension(const SummaryStats& baseline,
                                     const SummaryStats& candidate);

// ---------------------------------------------------------------------------
// Report formats

enum class ReportFormat { kSummaryJson, kPercellCsv, kTopnCsv, kCompareCsv };

class ReportFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The summary-json view of a report: config echo plus statistics, no
/// per-cell data.
struct ReportSummary {
  std::string policy;
  std::uint64_t memSizeCells = 0;
  CountingMode countingMode = CountingMode::kAccesses;
  bool countGcTraffic = true;
  std::uint64_t gcCount = 0;
  std::uint64_t eventCount = 0;
  SummaryStats summary;
  bool operator==(const ReportSummary&) const = default;
};

ReportSummary summary_of(const WearReport& report);

struct CompareRow {
  std::string trace;
  std::string policy;
  SummaryStats summary;
  std::uint64_t gcCount = 0;
};

struct ExportOptions {
  std::uint64_t topN = 1000;  // topn-csv
  std::string traceName;      // compare-csv
};

void export_report(const WearReport& report, ReportFormat format,
                   std::ostream& sink, const ExportOptions& options = {});

void write_summary_json(const ReportSummary& summary, std::ostream& sink);
ReportSummary read_summary_json(std::istream& source);

void write_percell_csv(std::span<const std::uint64_t> reads,
                       std::span<const std::uint64_t> writes, std::ostream& sink);

struct PerCellCounts {
  std::vector<std::uint64_t> reads;
  std::vector<std::uint64_t> writes;
};
PerCellCounts read_percell_csv(std::istream& source);

void write_topn_csv(std::span<const std::uint64_t> top, std::ostream& sink);

void write_compare_csv(std::span<const CompareRow> rows, std::ostream& sink);

/// Shortest decimal form that parses back to the same double.
std::string format_real(double value);

}  // namespace wearsim
