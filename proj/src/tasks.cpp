#include "lisa/tasks.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace lisa {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::DBO:
      return "dbo";
    case TaskKind::RO:
      return "ro";
    case TaskKind::MO:
      return "mo";
    case TaskKind::RM:
      return "rm";
  }
  return "?";
}

std::string_view to_string(Variant v) { return v == Variant::Cat ? "cat" : "balints"; }

namespace {
std::string lower(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}
}  // namespace

std::optional<TaskKind> parse_task_kind(std::string_view text) {
  const auto s = lower(text);
  if (s == "dbo" || s == "dbo-task") return TaskKind::DBO;
  if (s == "ro" || s == "ro-task") return TaskKind::RO;
  if (s == "mo" || s == "mo-task") return TaskKind::MO;
  if (s == "rm" || s == "r&m" || s == "rm-task") return TaskKind::RM;
  return std::nullopt;
}

std::optional<Variant> parse_variant(std::string_view text) {
  const auto s = lower(text);
  if (s == "cat") return Variant::Cat;
  if (s == "balints" || s == "balint's") return Variant::Balints;
  return std::nullopt;
}

std::string_view fixture_stem(Fixture f) {
  switch (f) {
    case Fixture::DBO:
      return "dbo";
    case Fixture::ROCat:
      return "ro_cat";
    case Fixture::ROBalints:
      return "ro_balints";
    case Fixture::RORelational:
      return "ro_relational";
    case Fixture::MO:
      return "mo";
    case Fixture::RMFlat:
      return "rm_flat";
    case Fixture::RMRelational:
      return "rm_relational";
  }
  return "?";
}

namespace {

using Sems = std::vector<std::string>;

PropositionSpec prop(std::string predicate, std::vector<Sems> roles, std::vector<std::string> args) {
  std::string label = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) label += (i ? "," : "") + args[i];
  label += ")";
  return {std::move(label), std::move(predicate), std::move(roles), std::move(args)};
}

AnalogSpec perception(std::vector<PropositionSpec> props) {
  return {"Perception",
          Analog::Driver,
          false,
          {{"Critical", {"token", "critical*"}}, {"Other", {"token", "other*"}}},
          std::move(props)};
}

AnalogSpec memory(std::vector<ObjectSpec> objects, std::vector<PropositionSpec> props,
                  bool preserve = false) {
  return {"Memory", Analog::Recipient, preserve, std::move(objects), std::move(props)};
}

std::vector<ObjectSpec> distractor_objects(int n) {
  std::vector<ObjectSpec> out = {{"Target", {"token", "target"}}};
  for (int i = 1; i <= n; ++i) {
    const auto k = std::to_string(i);
    out.push_back({"Distractor" + k, {"token", "distractor" + k}});
  }
  return out;
}

const Probes kProbes{"affordance*", "critical*", "no-affordance*", "other*"};

// Perceptual predicates of the relations task.
const Sems kRoVision1 = {"v1.1", "v2.1", "v3.1", "v4.1", "v5.1", "v6.1"};
const Sems kRoVision2 = {"v1.2", "v2.2", "v3.2", "v4.2", "v5.2", "v6.2"};

// Memory of the relations task with the relation intact.
AnalogSpec ro_relational_memory(bool preserve) {
  return memory(
      distractor_objects(3),
      {prop("affordance",
            {{"v1.1", "v2.1", "v3.1", "affordance*"}, {"v1.2", "v2.2", "v3.2", "v7.2", "v8.2"}},
            {"Target", "Distractor1"}),
       prop("no-afford1", {{"v1.1", "v2.1", "v3.1", "v4.1", "no-affordance*"}}, {"Distractor2"}),
       prop("no-afford2", {{"v1.2", "v2.2", "v3.2", "v4.2", "v7.2", "v8.2"}}, {"Distractor3"})},
      preserve);
}

// Objects and single-place predicates shared by both versions of the
// coffee-maker task.
const Sems kRmVision11 = {"v1.1", "v2.1", "v3.1", "v4.1", "v5.1", "v6.1"};
const Sems kRmVision12 = {"v1.2", "v2.2", "v3.2", "v4.2", "v5.2", "v6.2"};
const Sems kRmVision2 = {"v7", "v8", "v9", "v10", "v11", "v12"};
const Sems kRmVision3 = {"v13", "v14", "v15", "v16", "v17", "v18"};
const Sems kRmMemory11 = {"v1.1", "v2.1", "v3.1", "v19", "v20", "v21"};
// Transcribed as printed; v1.2 may have been intended in place of v2.1.
const Sems kRmMemory12 = {"v2.1", "v2.2", "v3.2", "v22", "v23", "v24"};
const Sems kRmMemory2 = {"v1.1", "v2.1", "v3.1", "v4.1", "v25", "v26"};
const Sems kRmMemory3 = {"v1.2", "v2.2", "v3.2", "v4.2", "v27", "v28"};
const Sems kRmMemory4 = {"v7", "v8", "v9", "v17", "v18", "no-affordance*"};
const Sems kRmMemory5 = {"v11", "v12", "v13", "v14", "v15", "affordance*"};

TaskSpec make_task(std::string name, AnalogSpec driver, AnalogSpec recipient,
                   std::string evaluate, ScheduleMode mode = ScheduleMode::SinglePass,
                   std::optional<Outcome> expected = std::nullopt) {
  TaskSpec t;
  t.name = std::move(name);
  t.analogs = {std::move(driver), std::move(recipient)};
  t.probes = kProbes;
  t.schedule_mode = mode;
  t.expected_verdict = expected;
  t.evaluate = std::move(evaluate);
  return t;
}

}  // namespace

TaskSpec fixture(Fixture f) {
  switch (f) {
    case Fixture::DBO:
      return make_task(
          "dbo",
          perception({prop("vision1", {{"v1", "v2", "v3", "v4", "v5", "v6"}}, {"Critical"}),
                      prop("vision2", {{"v7", "v8", "v9", "v10", "v11", "v12"}}, {"Other"})}),
          memory({{"Target", {"token", "target"}}, {"Distractor", {"token", "distractor"}}},
                 {prop("affordance", {{"v1", "v2", "v3", "v4", "v7", "affordance*"}}, {"Target"}),
                  prop("no-afford", {{"v1", "v7", "v8", "v9", "no-affordance*"}},
                       {"Distractor"})}),
          "vision1(Critical)", ScheduleMode::SinglePass, Outcome::Success);

    case Fixture::ROCat:
      return make_task(
          "ro_cat",
          perception({prop("vision1", {kRoVision1}, {"Critical"}),
                      prop("vision2", {kRoVision2}, {"Other"})}),
          memory(distractor_objects(3),
                 {prop("affordance", {{"v1.1", "v2.1", "v3.1", "v8.1", "affordance*"}}, {"Target"}),
                  prop("no-afford1", {{"v1.2", "v2.2", "v3.2", "v7.2", "v8.2"}}, {"Distractor1"}),
                  prop("no-afford2", {{"v1.1", "v2.1", "v3.1", "v4.1", "v8.1", "no-affordance*"}},
                       {"Distractor2"}),
                  prop("no-afford3", {{"v1.2", "v2.2", "v3.2", "v4.2", "v7.2", "v8.2"}},
                       {"Distractor3"})}),
          "vision1(Critical)", ScheduleMode::SinglePass, Outcome::Failure);

    case Fixture::ROBalints:
      return make_task("ro_balints",
                       perception({prop("vision1", {kRoVision1}, {"Critical"}),
                                   prop("vision2", {kRoVision2}, {"Other"})}),
                       ro_relational_memory(true), "vision1(Critical)", ScheduleMode::SinglePass,
                       Outcome::Failure);

    case Fixture::RORelational:
      return make_task(
          "ro_relational",
          perception({prop("visual-input", {kRoVision1, kRoVision2}, {"Critical", "Other"})}),
          ro_relational_memory(false), "visual-input(Critical,Other)", ScheduleMode::SinglePass,
          Outcome::Success);

    case Fixture::MO:
      return make_task(
          "mo",
          perception({prop("vision1", {{"v1", "v2", "v3", "v4", "v5", "v6"}}, {"Critical"}),
                      prop("vision2", {{"v7", "v8", "v9", "v10", "v11", "v12"}}, {"Critical"}),
                      prop("vision3", {{"v13", "v14", "v15", "v16", "v17", "v18"}}, {"Other"})}),
          memory({{"Target", {"token", "target"}}, {"Distractor", {"token", "distractor"}}},
                 {prop("memory1", {{"v1", "v2", "v3", "v4", "v19", "v20"}}, {"Target"}),
                  prop("memory2", {{"v7", "v8", "v9", "v10", "v21", "no-affordance*"}},
                       {"Distractor"}),
                  prop("memory3", {{"v13", "v14", "v15", "v16", "v22", "affordance*"}},
                       {"Target"})}),
          "vision2(Critical)", ScheduleMode::DoublePass);

    case Fixture::RMFlat:
      return make_task("rm_flat",
                       perception({prop("vision1.1", {kRmVision11}, {"Critical"}),
                                   prop("vision1.2", {kRmVision12}, {"Other"}),
                                   prop("vision2", {kRmVision2}, {"Critical"}),
                                   prop("vision3", {kRmVision3}, {"Other"})}),
                       memory(distractor_objects(4),
                              {prop("memory1.1", {kRmMemory11}, {"Target"}),
                               prop("memory1.2", {kRmMemory12}, {"Distractor1"}),
                               prop("memory2", {kRmMemory2}, {"Distractor2"}),
                               prop("memory3", {kRmMemory3}, {"Distractor3"}),
                               prop("memory4", {kRmMemory4}, {"Distractor4"}),
                               prop("memory5", {kRmMemory5}, {"Target"})}),
                       "vision2(Critical)", ScheduleMode::SinglePass, Outcome::Failure);

    case Fixture::RMRelational:
      return make_task("rm_relational",
                       perception({prop("vision1", {kRmVision11, kRmVision12}, {"Critical", "Other"}),
                                   prop("vision2", {kRmVision2}, {"Critical"}),
                                   prop("vision3", {kRmVision3}, {"Other"})}),
                       memory(distractor_objects(4),
                              {prop("memory1", {kRmMemory11, kRmMemory12}, {"Target", "Distractor1"}),
                               prop("memory2", {kRmMemory2}, {"Distractor2"}),
                               prop("memory3", {kRmMemory3}, {"Distractor3"}),
                               prop("mem4", {kRmMemory4}, {"Distractor4"}),
                               prop("mem5", {kRmMemory5}, {"Target"})}),
                       "vision2(Critical)");
  }
  throw std::invalid_argument("unknown fixture");
}

Outcome expected_outcome(const TaskId& id, ArchKind arch) {
  const bool relations = arch == ArchKind::RO || arch == ArchKind::RM;
  const bool mapping = arch == ArchKind::MO || arch == ArchKind::RM;
  bool ok = false;
  switch (id.task) {
    case TaskKind::DBO:
      ok = true;
      break;
    case TaskKind::RO:
      ok = relations;
      break;
    case TaskKind::MO:
      ok = mapping;
      break;
    case TaskKind::RM:
      ok = relations && mapping;
      break;
  }
  return ok ? Outcome::Success : Outcome::Failure;
}

TaskSpec builtin_task(const TaskId& id, const ArchConfig& arch) {
  if (id.variant == Variant::Balints && arch.relations_allowed)
    throw std::invalid_argument("the balints variant exists only for nonrelational architectures");

  TaskSpec t;
  switch (id.task) {
    case TaskKind::DBO:
      t = fixture(Fixture::DBO);
      break;
    case TaskKind::RO:
      if (arch.relations_allowed)
        t = fixture(Fixture::RORelational);
      else
        t = fixture(id.variant == Variant::Balints ? Fixture::ROBalints : Fixture::ROCat);
      // Mapping-capable architectures without relations see every
      // proposition twice.
      if (!arch.relations_allowed && arch.kind == ArchKind::MO)
        t.schedule_mode = ScheduleMode::DoublePass;
      break;
    case TaskKind::MO:
      t = fixture(Fixture::MO);
      t.schedule_mode = ScheduleMode::DoublePass;
      break;
    case TaskKind::RM:
      t = fixture(arch.relations_allowed ? Fixture::RMRelational : Fixture::RMFlat);
      break;
  }
  t.expected_verdict = expected_outcome(id, arch.kind);
  return t;
}

std::vector<MatrixCell> matrix_cells() {
  std::vector<MatrixCell> cells;
  auto add = [&](TaskId id, ArchKind arch) {
    cells.push_back({id, arch, builtin_task(id, ArchConfig::of(arch)), expected_outcome(id, arch)});
  };
  for (auto arch : {ArchKind::DBO, ArchKind::RO, ArchKind::MO, ArchKind::RM})
    add({TaskKind::DBO, std::nullopt}, arch);
  add({TaskKind::RO, Variant::Cat}, ArchKind::DBO);
  add({TaskKind::RO, Variant::Balints}, ArchKind::DBO);
  add({TaskKind::RO, std::nullopt}, ArchKind::RO);
  add({TaskKind::RO, Variant::Cat}, ArchKind::MO);
  add({TaskKind::RO, std::nullopt}, ArchKind::RM);
  for (auto task : {TaskKind::MO, TaskKind::RM})
    for (auto arch : {ArchKind::DBO, ArchKind::RO, ArchKind::MO, ArchKind::RM})
      add({task, std::nullopt}, arch);
  return cells;
}

}  // namespace lisa
