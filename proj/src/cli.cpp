#include "wearsim/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wearsim/engine.hpp"
#include "wearsim/metrics.hpp"
#include "wearsim/policy.hpp"
#include "wearsim/trace.hpp"
#include "wearsim/workload.hpp"

namespace wearsim::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kFooter =
    "Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 invalid trace or "
    "report input, 4 simulation error (out of memory, object too large).";

struct Failure {
  int code;
  std::string message;
};

template <class Fn>
void with_sink(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Failure{kIoFailure, "cannot open '" + path + "' for writing"};
  fn(file);
  file.flush();
  if (!file) throw Failure{kIoFailure, "failed writing '" + path + "'"};
}

std::ifstream open_input(const std::string& path, int failureCode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{failureCode, "cannot read '" + path + "'"};
  return in;
}

Trace load_trace(const std::string& path) {
  auto in = open_input(path, kTraceInvalid);
  Trace trace;
  try {
    trace = parse_trace(in);
  } catch (const TraceParseError& e) {
    throw Failure{kTraceInvalid, path + ": " + e.what()};
  }
  const auto violations = validate_trace(trace);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << path << ": " << violations.size() << " violation(s)";
    for (std::size_t i = 0; i < std::min<std::size_t>(violations.size(), 5); ++i) {
      msg << "\n  event " << violations[i].eventIndex << ": " << violations[i].message;
    }
    throw Failure{kTraceInvalid, msg.str()};
  }
  return trace;
}

struct SimulationFlags {
  std::string tracePath;
  std::uint64_t memSize = 0;
  std::string count = "accesses";
  bool noGcTraffic = false;
  bool noAutoGc = false;
};

void add_simulation_flags(CLI::App& cmd, SimulationFlags& f) {
  cmd.add_option("--trace", f.tracePath, "Trace file")->required();
  cmd.add_option("--mem-size", f.memSize,
                 "Total memory in cells (even, >= 4); defaults to the trace's #mem header");
  cmd.add_option("--count", f.count, "Counting mode for statistics")
      ->check(CLI::IsMember({"accesses", "writes"}));
  cmd.add_flag("--no-gc-traffic", f.noGcTraffic, "Do not count GC copies as accesses");
  cmd.add_flag("--no-auto-gc", f.noAutoGc,
               "Report out-of-memory instead of collecting on allocation failure");
}

EngineConfig engine_config(const SimulationFlags& f, const Trace& trace,
                           const PolicyKind& policy) {
  EngineConfig config;
  config.memSizeCells = f.memSize;
  if (config.memSizeCells == 0) {
    if (!trace.header.suggestedMemSizeCells) {
      throw Failure{kUsage, "no --mem-size given and the trace has no #mem header"};
    }
    config.memSizeCells = *trace.header.suggestedMemSizeCells;
  }
  config.policy = policy;
  config.countGcTraffic = !f.noGcTraffic;
  config.autoGcOnAllocFailure = !f.noAutoGc;
  config.countingMode = *parse_counting_mode(f.count);
  try {
    validate_config(config);
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, e.what()};
  }
  return config;
}

PolicyKind policy_or_usage(const std::string& text) {
  try {
    return parse_policy(text);
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, e.what()};
  }
}

WearReport simulate(const Trace& trace, const EngineConfig& config) {
  try {
    return replay(trace, config);
  } catch (const SimulationError& e) {
    throw Failure{kSimulationError, e.what()};
  }
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// ---------------------------------------------------------------------------

struct RunFlags {
  SimulationFlags sim;
  std::string policy = "golden";
  std::string out;
  std::string percell;
  std::uint64_t topN = 0;
  std::string topnOut;
};

int cmd_run(const RunFlags& f, std::ostream& out) {
  const PolicyKind policy = policy_or_usage(f.policy);
  const Trace trace = load_trace(f.sim.tracePath);
  const EngineConfig config = engine_config(f.sim, trace, policy);
  const WearReport report = simulate(trace, config);

  with_sink(f.out, out, [&](std::ostream& s) {
    export_report(report, ReportFormat::kSummaryJson, s);
  });
  if (!f.percell.empty()) {
    with_sink(f.percell, out, [&](std::ostream& s) {
      export_report(report, ReportFormat::kPercellCsv, s);
    });
  }
  if (f.topN > 0) {
    with_sink(f.topnOut, out, [&](std::ostream& s) {
      export_report(report, ReportFormat::kTopnCsv, s, {.topN = f.topN, .traceName = {}});
    });
  }
  return kOk;
}

struct CompareFlags {
  SimulationFlags sim;
  std::vector<std::string> policies;
  std::string out;
  std::string extOut;
};

void write_extensions(const std::vector<WearReport>& reports, std::ostream& s) {
  s << "baseline,policy,avg_extension,max_extension\n";
  for (const auto& r : reports) {
    s << reports.front().policy << ',' << r.policy << ',';
    try {
      const auto ext = lifespan_extension(reports.front().summary, r.summary);
      s << format_real(ext.avgExtension) << ',' << format_real(ext.maxExtension) << '\n';
    } catch (const UndefinedExtensionError&) {
      s << "undefined,undefined\n";
    }
  }
}

int cmd_compare(const CompareFlags& f, std::ostream& out) {
  if (f.policies.size() < 2) throw Failure{kUsage, "--policies needs at least two policies"};
  std::vector<PolicyKind> policies;
  for (const auto& p : f.policies) policies.push_back(policy_or_usage(p));
  const Trace trace = load_trace(f.sim.tracePath);

  std::vector<EngineConfig> configs;
  for (const auto& p : policies) configs.push_back(engine_config(f.sim, trace, p));

  // One isolated engine per policy; results are gathered in flag order.
  std::vector<std::future<WearReport>> pending;
  for (const auto& config : configs) {
    pending.push_back(std::async(std::launch::async, [&trace, config] {
      return simulate(trace, config);
    }));
  }
  std::vector<WearReport> reports;
  std::optional<Failure> failure;
  for (auto& fut : pending) {
    try {
      reports.push_back(fut.get());
    } catch (const Failure& e) {
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;

  std::vector<CompareRow> rows;
  const std::string traceName = stem_of(f.sim.tracePath);
  for (const auto& r : reports) rows.push_back({traceName, r.policy, r.summary, r.gcCount});

  if (f.extOut.empty()) {
    with_sink(f.out, out, [&](std::ostream& s) {
      write_compare_csv(rows, s);
      s << '\n';
      write_extensions(reports, s);
    });
  } else {
    with_sink(f.out, out, [&](std::ostream& s) { write_compare_csv(rows, s); });
    with_sink(f.extOut, out, [&](std::ostream& s) { write_extensions(reports, s); });
  }
  return kOk;
}

struct GenFlags {
  std::string pattern = "churn";
  WorkloadSpec spec;
  std::string out;
};

int cmd_gen(const GenFlags& f, std::ostream& out, std::ostream& err) {
  WorkloadSpec spec = f.spec;
  spec.pattern = *parse_pattern(f.pattern);
  Trace trace;
  try {
    trace = generate(spec);
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, e.what()};
  }
  with_sink(f.out, out, [&](std::ostream& s) { write_trace(trace, s); });
  (f.out.empty() ? err : out) << "events: " << trace.events.size() << '\n';
  return kOk;
}

struct ReportFlags {
  std::vector<std::string> summaries;
  std::vector<std::string> percells;
  std::uint64_t topN = 0;
  std::string topnDir;
  std::string out;
};

int cmd_report(const ReportFlags& f, std::ostream& out) {
  if (f.summaries.empty()) throw Failure{kUsage, "report needs at least one --summary"};
  if (!f.percells.empty() && f.percells.size() != f.summaries.size()) {
    throw Failure{kUsage, "give one --percell per --summary, in the same order"};
  }
  if (f.topN > 0 && f.percells.empty()) {
    throw Failure{kUsage, "--topn needs the per-cell csv of every input (--percell)"};
  }

  std::vector<ReportSummary> inputs;
  for (const auto& path : f.summaries) {
    auto in = open_input(path, kTraceInvalid);
    try {
      inputs.push_back(read_summary_json(in));
    } catch (const ReportFormatError& e) {
      throw Failure{kTraceInvalid, path + ": " + e.what()};
    }
  }

  std::vector<std::string> stems;
  for (std::size_t i = 0; i < f.percells.size(); ++i) {
    auto in = open_input(f.percells[i], kTraceInvalid);
    PerCellCounts counts;
    try {
      counts = read_percell_csv(in);
    } catch (const ReportFormatError& e) {
      throw Failure{kTraceInvalid, f.percells[i] + ": " + e.what()};
    }
    if (summarize(counts.reads, counts.writes, inputs[i].countingMode) != inputs[i].summary) {
      throw Failure{kTraceInvalid,
                    f.percells[i] + ": per-cell counts do not match " + f.summaries[i]};
    }
    if (f.topN == 0) continue;
    const std::string stem = stem_of(f.summaries[i]);
    if (std::find(stems.begin(), stems.end(), stem) != stems.end()) {
      throw Failure{kUsage, "two inputs share the file name '" + stem + "'"};
    }
    stems.push_back(stem);
    const auto top = top_n_distribution(counts.reads, counts.writes,
                                        inputs[i].countingMode, f.topN);
    if (f.topnDir.empty()) {
      out << "# " << f.summaries[i] << '\n';
      write_topn_csv(top, out);
      continue;
    }
    std::error_code ec;
    fs::create_directories(f.topnDir, ec);
    if (ec) throw Failure{kIoFailure, "cannot create '" + f.topnDir + "'"};
    with_sink((fs::path(f.topnDir) / (stem + ".topn.csv")).string(), out,
              [&](std::ostream& s) { write_topn_csv(top, s); });
  }

  with_sink(f.out, out, [&](std::ostream& s) {
    s << "baseline,baseline_policy,candidate,candidate_policy,avg_extension,max_extension\n";
    for (std::size_t b = 0; b < inputs.size(); ++b) {
      for (std::size_t c = 0; c < inputs.size(); ++c) {
        if (b == c) continue;
        s << stem_of(f.summaries[b]) << ',' << inputs[b].policy << ','
          << stem_of(f.summaries[c]) << ',' << inputs[c].policy << ',';
        try {
          const auto ext = lifespan_extension(inputs[b].summary, inputs[c].summary);
          s << format_real(ext.avgExtension) << ',' << format_real(ext.maxExtension) << '\n';
        } catch (const UndefinedExtensionError&) {
          s << "undefined,undefined\n";
        }
      }
    }
  });
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-driven simulator of dual-ring golden-ratio wear leveling", "wearsim"};
  app.footer(kFooter);
  app.require_subcommand(1);

  RunFlags runFlags;
  auto* run = app.add_subcommand("run", "Replay a trace under one policy");
  add_simulation_flags(*run, runFlags.sim);
  run->add_option("--policy", runFlags.policy,
                  "golden | quarter | fraction:<f> | none | random:<seed> | single");
  run->add_option("--out", runFlags.out, "summary-json destination (default stdout)");
  run->add_option("--percell", runFlags.percell, "percell-csv destination");
  auto* topn = run->add_option("--topn", runFlags.topN, "Number of hottest cells to export")
                   ->check(CLI::PositiveNumber);
  run->add_option("--topn-out", runFlags.topnOut, "topn-csv destination")->needs(topn);

  CompareFlags compareFlags;
  auto* compare = app.add_subcommand("compare", "Replay a trace under several policies");
  add_simulation_flags(*compare, compareFlags.sim);
  compare->add_option("--policies", compareFlags.policies,
                      "Comma-separated policies; the first is the baseline")
      ->required()
      ->delimiter(',');
  compare->add_option("--out", compareFlags.out, "compare-csv destination (default stdout)");
  compare->add_option("--ext-out", compareFlags.extOut,
                      "Lifespan-extension table destination (default: appended to --out)");

  GenFlags genFlags;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic trace");
  gen->add_option("--pattern", genFlags.pattern, "churn | hotspot | loop")
      ->check(CLI::IsMember({"churn", "hotspot", "loop"}));
  gen->add_option("--objects", genFlags.spec.objectCount, "Object count");
  gen->add_option("--ops", genFlags.spec.opCount, "Alloc/free/read/write events");
  gen->add_option("--mean-size", genFlags.spec.meanObjectSize, "Mean object size in cells");
  gen->add_option("--hot-fraction", genFlags.spec.hotFraction, "Hot object share (hotspot)");
  gen->add_option("--gc-every", genFlags.spec.gcEvery, "Insert G after this many events");
  gen->add_option("--seed", genFlags.spec.seed, "Generator seed");
  gen->add_option("--out", genFlags.out, "Trace destination (default stdout)");

  ReportFlags reportFlags;
  auto* report = app.add_subcommand("report", "Top-N distributions and pairwise extensions");
  report->add_option("--summary", reportFlags.summaries, "summary-json from `run` (repeatable)");
  report->add_option("--percell", reportFlags.percells,
                     "percell-csv from `run`, paired with --summary by position");
  report->add_option("--topn", reportFlags.topN, "Number of hottest cells per input")
      ->check(CLI::PositiveNumber);
  report->add_option("--topn-out", reportFlags.topnDir,
                     "Directory for <input>.topn.csv files (default stdout)");
  report->add_option("--out", reportFlags.out, "Extension table destination (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(runFlags, out);
    if (compare->parsed()) return cmd_compare(compareFlags, out);
    if (gen->parsed()) return cmd_gen(genFlags, out, err);
    return cmd_report(reportFlags, out);
  } catch (const Failure& f) {
    err << "wearsim: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    err << "wearsim: " << e.what() << '\n';
    return kIoFailure;
  }
}

}  // namespace wearsim::cli
