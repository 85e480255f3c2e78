#pragma once

// Synchrony measurement on electrode traces, inference verdicts, and the
// experiment matrix runner.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lisa/dynamics.hpp"
#include "lisa/tasks.hpp"

namespace lisa {

/// 1-based inclusive iteration range.
struct IterRange {
  int first = 1;
  int last = 0;

  bool operator==(const IterRange&) const = default;
};

/// Overlap ratio sum(min)/sum(max) of two traces over `window`; 0 when both
/// are silent there. Throws std::invalid_argument on mismatched lengths or an
/// out-of-bounds window.
double synchrony_index(std::span<const double> a, std::span<const double> b, IterRange window);
double synchrony_index(std::span<const double> a, std::span<const double> b);

struct Thresholds {
  double success = 0.4;
  double margin = 0.1;
  /// Width of the sliding window used for time-to-criterion.
  int sliding_window = 30;

  bool operator==(const Thresholds&) const = default;
};

struct Verdict {
  Outcome outcome = Outcome::Failure;
  double si_afford_critical = 0.0;
  double si_noafford_critical = 0.0;
  double si_afford_noncritical = 0.0;
  IterRange window;

  bool operator==(const Verdict&) const = default;
};

/// Judges the final pass's evaluation window.
Verdict judge_inference(const TraceSet& traces, const Thresholds& thresholds = {});
/// Judges an explicit window.
Verdict judge_window(const TraceSet& traces, IterRange window, const Thresholds& thresholds = {});
/// One verdict per pass, each on that pass's evaluation window.
std::vector<Verdict> judge_passes(const TraceSet& traces, const Thresholds& thresholds = {});

/// First iteration closing a sliding window whose SI(affordance, critical)
/// exceeds the success threshold.
std::optional<int> time_to_criterion(const TraceSet& traces, const Thresholds& thresholds = {});

/// Everything needed to reproduce one simulation.
struct CellRun {
  TaskSpec task;
  ArchConfig arch;
  SimParams params;
  std::uint64_t seed = 0;
};

struct CellResult {
  RunResult run;
  Verdict verdict;
  std::vector<Verdict> pass_verdicts;
  std::optional<int> time_to_criterion;
};

/// Build, run and judge one simulation.
CellResult run_cell(const CellRun& cell, const Thresholds& thresholds = {},
                    TraceDetail detail = TraceDetail::Probes);

struct MatrixRow {
  TaskId id;
  ArchKind arch = ArchKind::DBO;
  std::uint64_t seed = 0;
  Outcome verdict = Outcome::Failure;
  Outcome expected = Outcome::Failure;
  double si_ac = 0.0, si_nc = 0.0, si_an = 0.0;
  std::optional<int> time_to_criterion;
  std::vector<Outcome> pass_verdicts;
  /// Fraction of this cell's seeds whose verdict matched.
  double agreement = 0.0;
  std::string error;  // non-empty when the cell could not be run
};

struct MatrixOptions {
  SimParams params;
  Thresholds thresholds;
  std::vector<std::uint64_t> seeds = {7};
  /// Overrides the learning rate of every architecture.
  std::optional<double> mu;
  unsigned threads = 1;
};

struct MatrixReport {
  std::vector<MatrixRow> rows;  // cell-major, seeds in order

  /// True when every row of the first seed matches its expectation.
  bool all_match_first_seed() const;
  /// Per-cell agreement rate, in cell order.
  std::vector<double> cell_agreement() const;
};

/// Runs all 17 cells for every seed. Cells run concurrently up to
/// `threads`; the report order is deterministic.
MatrixReport run_matrix(const MatrixOptions& options);

std::string cell_name(const TaskId& id, ArchKind arch);

}  // namespace lisa
