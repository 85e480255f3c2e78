#pragma once

// File formats: trace, window, weight and matrix CSVs, verdict and config
// JSON, and fixture export.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lisa/analysis.hpp"

namespace lisa {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// iteration,unit,analog,kind,activation; one row per series per iteration.
void write_traces_csv(std::ostream& out, const TraceSet& traces);
/// propositionLabel,startIter,endIter,passIndex
void write_windows_csv(std::ostream& out, const TraceSet& traces);
/// kind,driverUnit,recipientUnit,weight over every same-kind pair.
void write_weights_csv(std::ostream& out, const Network& net, const MappingTable& table);
/// As write_weights_csv with a leading iteration column, one block per
/// phase-set boundary.
void write_weight_snapshots_csv(std::ostream& out, const Network& net,
                                const std::vector<WeightSnapshot>& snapshots);

nlohmann::json params_to_json(const SimParams& params);
/// Overlays the keys present in `j` on `base`. Throws IoError on unknown
/// keys, wrong types, or parameters that fail SimParams::check.
SimParams params_from_json(const nlohmann::json& j, SimParams base = {});

nlohmann::json thresholds_to_json(const Thresholds& th);
Thresholds thresholds_from_json(const nlohmann::json& j, Thresholds base = {});

/// Everything a single run depends on.
struct RunConfig {
  /// Builtin id or path the task came from (informational).
  std::string task_selector;
  std::optional<Variant> variant;
  /// The task before architecture resolution.
  TaskSpec task;
  ArchConfig arch;
  std::uint64_t seed = 7;
  SimParams params;
  Thresholds thresholds;
  TraceDetail trace = TraceDetail::Probes;

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json run_config_to_json(const RunConfig& config);
/// Inverse of run_config_to_json; absent fields keep their defaults except
/// task and arch, which are required. Throws IoError or TaskSpecError.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Verdict, per-pass verdicts, SI values, time-to-criterion, seed and the
/// resolved config.
nlohmann::json verdict_to_json(const CellResult& result, const RunConfig& config);

/// task,arch,variant,seed,verdict,expected,siAC,siNC,siAN,timeToCriterion,agreement
void write_matrix_csv(std::ostream& out, const MatrixReport& report);
/// One line per cell with the first seed's SIs and the agreement rate.
void write_matrix_summary(std::ostream& out, const MatrixReport& report);

/// Writes `content` to a sibling temporary file and renames it over `path`.
/// Throws IoError when the file cannot be written.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Creates `dir` if needed and throws IoError when it is not writable.
void ensure_writable_dir(const std::filesystem::path& dir);

/// Writes every built-in fixture as `<stem>.json` under `dir`; returns the
/// written paths.
std::vector<std::filesystem::path> export_fixtures(const std::filesystem::path& dir);

}  // namespace lisa
