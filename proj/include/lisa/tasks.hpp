#pragma once

// Built-in affordance-inference fixtures and the 17-cell experiment.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lisa/architecture.hpp"
#include "lisa/core_model.hpp"

namespace lisa {

enum class TaskKind { DBO, RO, MO, RM };
/// Nonrelational fixtures of the relations task: no relations anywhere (cat)
/// or relations in memory only (balints).
enum class Variant { Cat, Balints };

struct TaskId {
  TaskKind task = TaskKind::DBO;
  std::optional<Variant> variant;

  bool operator==(const TaskId&) const = default;
};

std::string_view to_string(TaskKind kind);
std::string_view to_string(Variant v);
std::optional<TaskKind> parse_task_kind(std::string_view text);
std::optional<Variant> parse_variant(std::string_view text);

/// Named fixture documents, independent of architecture.
enum class Fixture { DBO, ROCat, ROBalints, RORelational, MO, RMFlat, RMRelational };

inline constexpr Fixture kAllFixtures[] = {Fixture::DBO,          Fixture::ROCat,
                                           Fixture::ROBalints,    Fixture::RORelational,
                                           Fixture::MO,           Fixture::RMFlat,
                                           Fixture::RMRelational};

/// File stem used when exporting (dbo, ro_cat, ...).
std::string_view fixture_stem(Fixture f);
TaskSpec fixture(Fixture f);

/// The fixture a given architecture runs for a task, with the schedule mode
/// and expected verdict of that matrix cell. Throws std::invalid_argument
/// for the balints variant on a relational architecture.
TaskSpec builtin_task(const TaskId& id, const ArchConfig& arch);

/// Whether a matrix cell is expected to succeed.
Outcome expected_outcome(const TaskId& id, ArchKind arch);

struct MatrixCell {
  TaskId id;
  ArchKind arch = ArchKind::DBO;
  TaskSpec fixture;
  Outcome expected = Outcome::Failure;
};

/// All 17 cells in reporting order.
std::vector<MatrixCell> matrix_cells();

}  // namespace lisa
