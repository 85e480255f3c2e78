#pragma once

// Discrete-time oscillatory binding dynamics over a built network.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lisa/architecture.hpp"
#include "lisa/core_model.hpp"
#include "lisa/mapping.hpp"

namespace lisa {

struct SimParams {
  int iters_per_prop = 90;
  double growth_rate = 0.267;      // gamma
  double decay_rate = 0.1;         // delta, driver units
  /// Recipient units decay faster so they follow the driver's rhythm
  /// instead of latching.
  double recipient_decay_rate = 0.503;
  double fire_threshold = 0.5;     // theta_fire
  int inhibitor_window = 10;       // iterations above threshold before the inhibitor fires
  int refractory = 10;             // iterations the inhibitor holds its SP down
  double noise_amplitude = 0.05;   // eta; driver SP input noise is U[0, eta]
  double lateral_gain = 0.337;     // beta; competition among recipient roles and objects
  double structure_lateral_gain = 0.453;  // competition among recipient SPs and propositions
  double top_down_gain = 3.0;      // recipient SP -> its role and filler
  double parent_gain = 1.719;      // recipient P -> its SPs
  double map_gain = 0.477;         // kappa
  /// Inhibition between sibling SPs of the firing driver proposition.
  double sibling_gain = 2.0;
  /// Net input applied to an SP while its inhibitor is firing.
  double suppression = 10.0;
  /// Proposition units integrate this much slower than the other tokens.
  double proposition_rate = 0.436;

  /// Empty when all invariants hold, otherwise the first violation.
  std::optional<std::string> check() const;

  bool operator==(const SimParams&) const = default;
};

/// Shunting leaky integrator, result clamped to [0,1].
double leaky_integrate(double activation, double net, double growth, double decay);

/// Yoked inhibitor of one driver SP.
struct Inhibitor {
  int charge = 0;
  int refractory_remaining = 0;

  bool operator==(const Inhibitor&) const = default;
};

struct InhibitorStep {
  Inhibitor next;
  bool suppress = false;
};

InhibitorStep inhibitor_step(Inhibitor inh, bool sp_active, const SimParams& params);

struct ScheduleEntry {
  UnitIndex proposition = kNoUnit;
  std::string label;
  int duration = 0;
};

/// Order in which driver propositions fire. `entries` holds one pass; the
/// whole sequence repeats `pass_count` times.
struct Schedule {
  std::vector<ScheduleEntry> entries;
  int pass_count = 1;

  int iterations_per_pass() const;
  int total_iterations() const { return iterations_per_pass() * pass_count; }
  /// The flattened firing sequence across all passes.
  std::vector<ScheduleEntry> sequence() const;
};

/// One entry per driver proposition in document order, repeated when the
/// task asks for two passes. Throws NetworkError when the driver has no
/// propositions.
Schedule make_schedule(const TaskSpec& task, const Network& net, const SimParams& params);

/// Firing window of one scheduled proposition, 1-based inclusive iterations.
struct Window {
  std::string label;
  int start = 0;
  int end = 0;
  int pass = 0;  // 1-based

  bool operator==(const Window&) const = default;
};

struct TraceSeries {
  std::string unit;
  Analog analog = Analog::Driver;
  std::string kind;  // "semantic" or a token kind
  std::vector<double> values;

  bool operator==(const TraceSeries&) const = default;
};

/// Electrode recordings of one run.
struct TraceSet {
  int iterations = 0;
  std::vector<TraceSeries> series;
  std::vector<Window> windows;
  /// Window judged in each pass (the evaluated proposition's window).
  std::vector<Window> evaluation_windows;
  std::string affordance, critical, no_affordance, noncritical;

  /// Series recorded for a semantic unit; throws std::out_of_range.
  const std::vector<double>& semantic(const std::string& name) const;

  bool operator==(const TraceSet&) const = default;
};

enum class TraceDetail { Probes, AllUnits };

/// Weights of every mapping block after a phase-set boundary.
struct WeightSnapshot {
  int iteration = 0;
  MappingTable table;
};

struct RunResult {
  TraceSet traces;
  MappingTable mapping;
  std::vector<WeightSnapshot> snapshots;
};

/// Mutable state of one simulation.
class Simulator {
 public:
  Simulator(const Network& net, Schedule schedule, SimParams params, double mu,
            std::uint64_t seed);

  /// Advances one iteration; commits mapping weights when the iteration
  /// closes a firing window.
  void step();

  bool done() const { return iteration_ >= total_; }
  int iteration() const { return iteration_; }
  std::span<const double> token_activations() const { return token_act_; }
  std::span<const double> semantic_activations() const { return sem_act_; }
  const std::vector<Inhibitor>& inhibitors() const { return inhibitors_; }
  const MappingTable& mapping() const { return mapping_; }
  const Schedule& schedule() const { return schedule_; }
  /// True if the last step ended a firing window.
  bool at_boundary() const { return at_boundary_; }

  /// Overrides an activation (tests use this to set up symmetric states).
  void set_token_activation(UnitIndex unit, double value) { token_act_[unit] = value; }

 private:
  double noise();

  const Network& net_;
  Schedule schedule_;
  std::vector<ScheduleEntry> sequence_;
  std::vector<int> boundaries_;  // last iteration (1-based) of each window
  SimParams params_;
  MappingTable mapping_;
  std::mt19937_64 rng_;
  int iteration_ = 0;
  int total_ = 0;
  bool at_boundary_ = false;

  std::vector<double> token_act_;
  std::vector<double> sem_act_;
  std::vector<double> sem_driver_;
  std::vector<Inhibitor> inhibitors_;

  // Adjacency cached per analog/kind.
  std::vector<UnitIndex> driver_sps_, driver_roles_objects_, driver_props_;
  std::vector<UnitIndex> rec_preds_, rec_objects_, rec_sps_, rec_props_;
  std::vector<std::vector<UnitIndex>> sem_driver_links_, sem_rec_links_;
  std::size_t window_ = 0;
};

/// Builds the window bookkeeping for a schedule.
std::vector<Window> schedule_windows(const Schedule& schedule);

/// Runs the whole schedule and records the probes (or every unit).
RunResult run(const Network& net, const Schedule& schedule, const SimParams& params, double mu,
              std::uint64_t seed, TraceDetail detail = TraceDetail::Probes,
              const std::optional<std::string>& evaluate = std::nullopt);

}  // namespace lisa
