#include "lisa/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace lisa {

std::optional<std::string> SimParams::check() const {
  if (iters_per_prop <= 0) return "itersPerProp must be positive";
  if (growth_rate < 0 || decay_rate < 0 || recipient_decay_rate < 0 || noise_amplitude < 0 ||
      lateral_gain < 0 || structure_lateral_gain < 0 || top_down_gain < 0 || parent_gain < 0 ||
      map_gain < 0 || sibling_gain < 0 || suppression < 0 || proposition_rate < 0)
    return "rates and gains must be non-negative";
  if (!(fire_threshold > 0.0 && fire_threshold < 1.0)) return "fire threshold must lie in (0,1)";
  if (inhibitor_window <= 0 || refractory < 0) return "inhibitor timings out of range";
  if (iters_per_prop < inhibitor_window + refractory)
    return "itersPerProp must cover one inhibitor window plus the refractory period";
  return std::nullopt;
}

double leaky_integrate(double a, double net, double growth, double decay) {
  const double next = net >= 0.0 ? a + growth * net * (1.0 - a) - decay * a
                                 : a + growth * net * a - decay * a;
  return std::clamp(next, 0.0, 1.0);
}

InhibitorStep inhibitor_step(Inhibitor inh, bool sp_active, const SimParams& params) {
  if (inh.refractory_remaining > 0) {
    --inh.refractory_remaining;
    inh.charge = 0;
    return {inh, true};
  }
  if (!sp_active) {
    inh.charge = 0;
    return {inh, false};
  }
  ++inh.charge;
  if (inh.charge >= params.inhibitor_window) {
    inh.charge = 0;
    inh.refractory_remaining = params.refractory;
    return {inh, true};
  }
  return {inh, false};
}

// ---------------------------------------------------------------------------
// Schedule

int Schedule::iterations_per_pass() const {
  int total = 0;
  for (const auto& e : entries) total += e.duration;
  return total;
}

std::vector<ScheduleEntry> Schedule::sequence() const {
  std::vector<ScheduleEntry> out;
  for (int pass = 0; pass < pass_count; ++pass) out.insert(out.end(), entries.begin(), entries.end());
  return out;
}

Schedule make_schedule(const TaskSpec& task, const Network& net, const SimParams& params) {
  if (net.driver_propositions.empty())
    throw NetworkError("task '" + task.name + "' has no driver propositions");
  Schedule s;
  for (auto p : net.driver_propositions)
    s.entries.push_back({p, net.tokens[p].name, params.iters_per_prop});
  s.pass_count = task.schedule_mode == ScheduleMode::DoublePass ? 2 : 1;
  return s;
}

std::vector<Window> schedule_windows(const Schedule& schedule) {
  std::vector<Window> out;
  int start = 1;
  for (int pass = 1; pass <= schedule.pass_count; ++pass) {
    for (const auto& e : schedule.entries) {
      out.push_back({e.label, start, start + e.duration - 1, pass});
      start += e.duration;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(const Network& net, Schedule schedule, SimParams params, double mu,
                     std::uint64_t seed)
    : net_(net),
      schedule_(std::move(schedule)),
      sequence_(schedule_.sequence()),
      params_(params),
      mapping_(net, mu),
      rng_(seed),
      total_(schedule_.total_iterations()),
      token_act_(net.tokens.size(), 0.0),
      sem_act_(net.semantics.size(), 0.0),
      sem_driver_(net.semantics.size(), 0.0),
      inhibitors_(net.tokens.size()) {
  if (auto err = params_.check()) throw std::invalid_argument(*err);
  for (const auto& w : schedule_windows(schedule_)) boundaries_.push_back(w.end);

  sem_driver_links_.resize(net.semantics.size());
  sem_rec_links_.resize(net.semantics.size());
  for (UnitIndex i = 0; i < net.tokens.size(); ++i) {
    const auto& t = net.tokens[i];
    const bool driver = t.analog == Analog::Driver;
    switch (t.kind) {
      case UnitKind::SP:
        (driver ? driver_sps_ : rec_sps_).push_back(i);
        break;
      case UnitKind::Proposition:
        (driver ? driver_props_ : rec_props_).push_back(i);
        break;
      case UnitKind::Predicate:
        (driver ? driver_roles_objects_ : rec_preds_).push_back(i);
        break;
      case UnitKind::Object:
        (driver ? driver_roles_objects_ : rec_objects_).push_back(i);
        break;
    }
    for (auto s : t.semantics) (driver ? sem_driver_links_ : sem_rec_links_)[s].push_back(i);
  }
}

double Simulator::noise() {
  // 53 random bits -> [0,1); independent of the standard library's
  // distribution implementation.
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return u * params_.noise_amplitude;
}

void Simulator::step() {
  if (done()) throw std::logic_error("simulation already complete");
  if (at_boundary_) {
    // Each phase set starts from rest; only the mapping carries over.
    std::fill(token_act_.begin(), token_act_.end(), 0.0);
    std::fill(sem_act_.begin(), sem_act_.end(), 0.0);
    std::fill(sem_driver_.begin(), sem_driver_.end(), 0.0);
    std::fill(inhibitors_.begin(), inhibitors_.end(), Inhibitor{});
  }
  at_boundary_ = false;

  const UnitIndex current = sequence_[window_].proposition;
  const auto& prev = token_act_;
  std::vector<double> next = token_act_;
  const double g = params_.growth_rate;
  const double d = params_.decay_rate;
  const double gp = g * params_.proposition_rate;
  const double dr = params_.recipient_decay_rate;
  const double dp = d * params_.proposition_rate;
  const double drp = dr * params_.proposition_rate;
  const double beta = params_.lateral_gain;
  const double theta = params_.fire_threshold;

  // (1) The scheduled proposition is clamped on.
  next[current] = 1.0;

  // (2) Driver SPs: excitation from the firing proposition, sibling
  // competition, noise, and the yoked inhibitor.
  for (auto s : driver_sps_) {
    const auto& sp = net_.tokens[s];
    const auto [inh, suppress] = inhibitor_step(inhibitors_[s], prev[s] > theta, params_);
    inhibitors_[s] = inh;
    double net = suppress ? -params_.suppression : 0.0;
    if (sp.parent == current) {
      net += next[current] + noise();
      double siblings = 0.0;
      for (auto c : net_.tokens[current].children)
        if (c != s) siblings += prev[c];
      net -= params_.sibling_gain * siblings;
    }
    next[s] = leaky_integrate(prev[s], net, g, d);
  }

  // (3) Roles, objects, and propositions acting as fillers follow their SPs.
  // A filler proposition never excites its own SPs.
  for (auto u : driver_roles_objects_) {
    double net = 0.0;
    for (auto s : net_.tokens[u].bound_in) net += next[s];
    next[u] = leaky_integrate(prev[u], net, g, d);
  }
  for (auto p : driver_props_) {
    if (p == current) continue;
    double net = 0.0;
    for (auto s : net_.tokens[p].bound_in) net += next[s];
    next[p] = net > 0.0 ? leaky_integrate(prev[p], net, g, d) : leaky_integrate(prev[p], 0.0, gp, dp);
  }

  // (4) Semantic units driven by the driver.
  for (SemanticIndex i = 0; i < sem_driver_.size(); ++i) {
    double sum = 0.0;
    for (auto u : sem_driver_links_[i]) sum += next[u];
    sem_driver_[i] = std::clamp(sum, 0.0, 1.0);
  }

  // (5) Recipient roles and objects.
  auto lateral = [&](const std::vector<UnitIndex>& pool, UnitIndex self, double gain) {
    double sum = 0.0;
    for (auto v : pool)
      if (v != self) sum += prev[v];
    return gain * sum;
  };
  const std::span<const double> drive(next);
  auto mapping = [&](UnitIndex u) {
    return params_.map_gain *
           (mapping_.mapping_input(u, drive) - mapping_.claimed_inhibition(u, drive));
  };
  for (const auto* pool : {&rec_preds_, &rec_objects_}) {
    for (auto u : *pool) {
      const auto& t = net_.tokens[u];
      double bottom_up = 0.0;
      for (auto s : t.semantics) bottom_up += sem_driver_[s];
      if (net_.fan_in[u] > 0) bottom_up /= static_cast<double>(net_.fan_in[u]);
      double top_down = 0.0;
      for (auto s : t.bound_in) top_down += prev[s];
      const double net = bottom_up + mapping(u) +
                         params_.top_down_gain * top_down - lateral(*pool, u, beta);
      next[u] = leaky_integrate(prev[u], net, g, dr);
    }
  }

  // (6) Recipient SPs, then propositions.
  for (auto s : rec_sps_) {
    const auto& sp = net_.tokens[s];
    const double filler = net_.tokens[sp.filler].kind == UnitKind::Proposition ? prev[sp.filler]
                                                                             : next[sp.filler];
    const double net = 0.5 * (next[sp.role] + filler) +
                       params_.parent_gain * prev[sp.parent] +
                       mapping(s) - lateral(rec_sps_, s, params_.structure_lateral_gain);
    next[s] = leaky_integrate(prev[s], net, g, dr);
  }
  for (auto p : rec_props_) {
    double net = 0.0;
    for (auto c : net_.tokens[p].children) net += next[c];
    net += mapping(p) - lateral(rec_props_, p, params_.structure_lateral_gain);
    next[p] = leaky_integrate(prev[p], net, gp, drp);
  }

  token_act_ = std::move(next);

  // Electrode-visible semantic activation: driver plus recipient input.
  for (SemanticIndex i = 0; i < sem_act_.size(); ++i) {
    double rec = 0.0;
    for (auto u : sem_rec_links_[i]) rec += token_act_[u];
    sem_act_[i] = std::clamp(sem_driver_[i] + rec, 0.0, 1.0);
  }

  // (7) Mapping evidence.
  mapping_.accumulate_hypotheses(token_act_);

  // (8) Advance; a closed window is a phase-set boundary.
  ++iteration_;
  if (iteration_ == boundaries_[window_]) {
    mapping_.commit();
    at_boundary_ = true;
    ++window_;
  }
}

// ---------------------------------------------------------------------------
// run

const std::vector<double>& TraceSet::semantic(const std::string& name) const {
  for (const auto& s : series)
    if (s.kind == "semantic" && s.unit == name) return s.values;
  throw std::out_of_range("no trace recorded for semantic '" + name + "'");
}

RunResult run(const Network& net, const Schedule& schedule, const SimParams& params, double mu,
              std::uint64_t seed, TraceDetail detail, const std::optional<std::string>& evaluate) {
  Simulator sim(net, schedule, params, mu, seed);

  RunResult result;
  auto& tr = result.traces;
  tr.iterations = schedule.total_iterations();
  tr.windows = schedule_windows(schedule);
  tr.affordance = net.probes.affordance;
  tr.critical = net.probes.critical;
  tr.no_affordance = net.probes.no_affordance;
  tr.noncritical = net.probes.noncritical;

  for (int pass = 1; pass <= schedule.pass_count; ++pass) {
    std::optional<Window> chosen;
    for (const auto& w : tr.windows) {
      if (w.pass != pass) continue;
      if (!evaluate || w.label == *evaluate) chosen = w;
      if (evaluate && w.label == *evaluate) break;
    }
    if (!chosen) throw NetworkError("evaluated proposition '" + evaluate.value_or("") + "' is not scheduled");
    tr.evaluation_windows.push_back(*chosen);
  }

  // Recorded units: the probe semantics, or everything.
  std::vector<SemanticIndex> sems;
  std::vector<UnitIndex> toks;
  if (detail == TraceDetail::AllUnits) {
    for (SemanticIndex i = 0; i < net.semantics.size(); ++i) sems.push_back(i);
    for (UnitIndex i = 0; i < net.tokens.size(); ++i) toks.push_back(i);
  } else {
    for (const auto* name : {&tr.affordance, &tr.critical, &tr.no_affordance, &tr.noncritical}) {
      auto idx = net.find_semantic(*name);
      if (!idx) throw NetworkError("probe semantic missing: '" + *name + "'");
      if (std::find(sems.begin(), sems.end(), *idx) == sems.end()) sems.push_back(*idx);
    }
  }
  for (auto s : sems) tr.series.push_back({net.semantics[s], Analog::Recipient, "semantic", {}});
  for (auto u : toks)
    tr.series.push_back(
        {net.tokens[u].name, net.tokens[u].analog, std::string(to_string(net.tokens[u].kind)), {}});
  for (auto& s : tr.series) s.values.reserve(static_cast<std::size_t>(tr.iterations));

  while (!sim.done()) {
    sim.step();
    std::size_t k = 0;
    for (auto s : sems) tr.series[k++].values.push_back(sim.semantic_activations()[s]);
    for (auto u : toks) tr.series[k++].values.push_back(sim.token_activations()[u]);
    if (sim.at_boundary()) result.snapshots.push_back({sim.iteration(), sim.mapping()});
  }
  result.mapping = sim.mapping();
  return result;
}

}  // namespace lisa
