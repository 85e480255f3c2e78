#pragma once

// LISAese knowledge representation: task documents, the relation-flattening
// ablation and the unit graph built from them.

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lisa {

/// Which side of the driver/recipient split an analog (or token unit) sits on.
/// The Perception analog always drives; the Memory analog always receives.
enum class Analog { Driver, Recipient };

enum class UnitKind { Proposition, SP, Predicate, Object };

inline constexpr std::size_t kNoUnit = std::numeric_limits<std::size_t>::max();

using UnitIndex = std::size_t;
using SemanticIndex = std::size_t;

enum class ScheduleMode { SinglePass, DoublePass };
enum class Outcome { Success, Failure };

std::string_view to_string(Analog a);
std::string_view to_string(UnitKind k);
std::string_view to_string(ScheduleMode m);
std::string_view to_string(Outcome o);

class TaskSpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Task documents

struct ObjectSpec {
  std::string name;
  std::vector<std::string> semantics;

  bool operator==(const ObjectSpec&) const = default;
};

struct PropositionSpec {
  std::string label;
  std::string predicate;
  /// One semantic list per role.
  std::vector<std::vector<std::string>> role_semantics;
  /// Filler per role: an object name or the label of another proposition.
  std::vector<std::string> args;

  std::size_t arity() const { return args.size(); }
  bool operator==(const PropositionSpec&) const = default;
};

struct AnalogSpec {
  std::string name;
  Analog role = Analog::Driver;
  /// Keep multi-place relations in this analog even when the architecture
  /// cannot represent them (relations remembered but no longer perceived).
  bool preserve_relations = false;
  std::vector<ObjectSpec> objects;
  std::vector<PropositionSpec> propositions;

  bool operator==(const AnalogSpec&) const = default;
};

/// Names of the four semantic units carrying virtual electrodes.
struct Probes {
  std::string affordance;
  std::string critical;
  std::string no_affordance;
  std::string noncritical;

  bool operator==(const Probes&) const = default;
};

struct TaskSpec {
  std::string name;
  std::vector<AnalogSpec> analogs;  // exactly one driver and one recipient
  Probes probes;
  ScheduleMode schedule_mode = ScheduleMode::SinglePass;
  std::optional<Outcome> expected_verdict;
  /// Label of the driver proposition whose final-pass window is judged.
  /// Absent: the last window of the last pass.
  std::optional<std::string> evaluate;

  const AnalogSpec& driver() const;
  const AnalogSpec& recipient() const;
  AnalogSpec& driver();
  AnalogSpec& recipient();

  /// Every distinct semantic name, in first-mention order.
  std::vector<std::string> semantic_pool() const;

  bool operator==(const TaskSpec&) const = default;
};

/// Parses and validates a task document (JSON). Throws TaskSpecError.
TaskSpec parse_task_spec(std::string_view text);

/// Checks the structural invariants of a task; throws TaskSpecError.
void validate_task_spec(const TaskSpec& task);

/// Serializes a task back into the document format.
std::string task_to_json(const TaskSpec& task, int indent = 2);

/// Replaces every n-place proposition (n >= 2) by n single-place ones whose
/// predicate carries the semantics of the corresponding role. The pieces of
/// relation `L` are labelled `L.1 ... L.n`. Throws TaskSpecError when a role
/// of a relation is filled by a proposition.
AnalogSpec flatten_relations(const AnalogSpec& analog);

/// Label rewriting performed by flatten_relations for one proposition:
/// returns the labels that replace `label` (the label itself when unchanged).
std::vector<std::string> flattened_labels(const AnalogSpec& original,
                                          const std::string& label);

// ---------------------------------------------------------------------------
// Network

struct TokenUnit {
  std::string name;
  UnitKind kind = UnitKind::Object;
  Analog analog = Analog::Driver;
  /// Semantic links; only objects and predicate roles carry them.
  std::vector<SemanticIndex> semantics;
  // SP only.
  UnitIndex role = kNoUnit;
  UnitIndex filler = kNoUnit;
  UnitIndex parent = kNoUnit;
  /// Proposition: its SPs. Predicate/object/proposition: SPs it fills or
  /// whose role it is.
  std::vector<UnitIndex> children;
  std::vector<UnitIndex> bound_in;
};

struct Network {
  std::string task_name;
  std::vector<std::string> semantics;
  std::vector<TokenUnit> tokens;
  Probes probes;
  /// Driver proposition units in document order.
  std::vector<UnitIndex> driver_propositions;
  /// Semantic fan-in (number of semantic links) per token.
  std::vector<std::size_t> fan_in;

  std::optional<SemanticIndex> find_semantic(std::string_view name) const;
  std::optional<UnitIndex> find_token(std::string_view name, Analog analog) const;
  std::vector<UnitIndex> units_of(UnitKind kind, Analog analog) const;
};

struct ArchConfig;  // dynamics/architecture.hpp

/// Instantiates the unit graph. Flattens every analog that is not marked
/// preserve_relations when the architecture lacks multi-place relations.
Network build_network(const TaskSpec& task, const ArchConfig& arch);

/// Flattens every analog, preserved or not, and redirects `evaluate` to the
/// piece of a flattened relation bound to the critical object.
TaskSpec flatten_task(const TaskSpec& task);

/// The task as actually instantiated for `arch` (after any flattening).
TaskSpec resolve_for_architecture(const TaskSpec& task, const ArchConfig& arch);

/// One diagnostic per violated invariant; empty when the network is sound.
std::vector<std::string> validate(const Network& net);

}  // namespace lisa
