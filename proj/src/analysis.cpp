#include "lisa/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace lisa {

double synchrony_index(std::span<const double> a, std::span<const double> b, IterRange w) {
  if (a.size() != b.size()) throw std::invalid_argument("synchrony_index: series lengths differ");
  if (w.first < 1 || w.last < w.first - 1 || static_cast<std::size_t>(w.last) > a.size())
    throw std::invalid_argument("synchrony_index: window out of bounds");
  double lo = 0.0, hi = 0.0;
  for (int t = w.first; t <= w.last; ++t) {
    const auto i = static_cast<std::size_t>(t - 1);
    lo += std::min(a[i], b[i]);
    hi += std::max(a[i], b[i]);
  }
  return hi > 0.0 ? lo / hi : 0.0;
}

double synchrony_index(std::span<const double> a, std::span<const double> b) {
  return synchrony_index(a, b, {1, static_cast<int>(a.size())});
}

Verdict judge_window(const TraceSet& tr, IterRange window, const Thresholds& th) {
  const auto& aff = tr.semantic(tr.affordance);
  const auto& crit = tr.semantic(tr.critical);
  const auto& noaff = tr.semantic(tr.no_affordance);
  const auto& noncrit = tr.semantic(tr.noncritical);

  Verdict v;
  v.window = window;
  v.si_afford_critical = synchrony_index(aff, crit, window);
  v.si_noafford_critical = synchrony_index(noaff, crit, window);
  v.si_afford_noncritical = synchrony_index(aff, noncrit, window);
  const bool ok = v.si_afford_critical >= th.success &&
                  v.si_afford_critical - v.si_noafford_critical >= th.margin &&
                  v.si_afford_critical > v.si_afford_noncritical;
  v.outcome = ok ? Outcome::Success : Outcome::Failure;
  return v;
}

std::vector<Verdict> judge_passes(const TraceSet& tr, const Thresholds& th) {
  std::vector<Verdict> out;
  for (const auto& w : tr.evaluation_windows) out.push_back(judge_window(tr, {w.start, w.end}, th));
  return out;
}

Verdict judge_inference(const TraceSet& tr, const Thresholds& th) {
  if (tr.evaluation_windows.empty())
    return judge_window(tr, {1, tr.iterations}, th);
  const auto& w = tr.evaluation_windows.back();
  return judge_window(tr, {w.start, w.end}, th);
}

std::optional<int> time_to_criterion(const TraceSet& tr, const Thresholds& th) {
  const auto& aff = tr.semantic(tr.affordance);
  const auto& crit = tr.semantic(tr.critical);
  const int width = th.sliding_window;
  for (int end = width; end <= tr.iterations; ++end)
    if (synchrony_index(aff, crit, {end - width + 1, end}) > th.success) return end;
  return std::nullopt;
}

CellResult run_cell(const CellRun& cell, const Thresholds& th, TraceDetail detail) {
  const Network net = build_network(cell.task, cell.arch);
  const TaskSpec resolved = resolve_for_architecture(cell.task, cell.arch);
  const Schedule sched = make_schedule(resolved, net, cell.params);

  CellResult out;
  out.run = run(net, sched, cell.params, cell.arch.mu, cell.seed, detail, resolved.evaluate);
  out.verdict = judge_inference(out.run.traces, th);
  out.pass_verdicts = judge_passes(out.run.traces, th);
  out.time_to_criterion = time_to_criterion(out.run.traces, th);
  return out;
}

std::string cell_name(const TaskId& id, ArchKind arch) {
  std::string s = std::string(to_string(id.task)) + "-task/" + std::string(to_string(arch));
  if (id.variant) s += "-" + std::string(to_string(*id.variant));
  return s;
}

bool MatrixReport::all_match_first_seed() const {
  if (rows.empty()) return false;
  const auto first = rows.front().seed;
  for (const auto& r : rows)
    if (r.seed == first && (!r.error.empty() || r.verdict != r.expected)) return false;
  return true;
}

std::vector<double> MatrixReport::cell_agreement() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (i == 0 || !(rows[i].id == rows[i - 1].id && rows[i].arch == rows[i - 1].arch))
      out.push_back(rows[i].agreement);
  return out;
}

MatrixReport run_matrix(const MatrixOptions& opt) {
  const auto cells = matrix_cells();
  const std::size_t per_cell = opt.seeds.size();
  MatrixReport report;
  report.rows.resize(cells.size() * per_cell);

  auto work = [&](std::size_t job) {
    const auto& cell = cells[job / per_cell];
    auto& row = report.rows[job];
    row.id = cell.id;
    row.arch = cell.arch;
    row.seed = opt.seeds[job % per_cell];
    row.expected = cell.expected;
    try {
      ArchConfig arch = ArchConfig::of(cell.arch);
      if (opt.mu) arch.mu = *opt.mu;
      const auto res = run_cell({cell.fixture, arch, opt.params, row.seed}, opt.thresholds);
      row.verdict = res.verdict.outcome;
      row.si_ac = res.verdict.si_afford_critical;
      row.si_nc = res.verdict.si_noafford_critical;
      row.si_an = res.verdict.si_afford_noncritical;
      row.time_to_criterion = res.time_to_criterion;
      for (const auto& v : res.pass_verdicts) row.pass_verdicts.push_back(v.outcome);
    } catch (const std::exception& e) {
      row.error = e.what();
      row.verdict = Outcome::Failure;
    }
  };

  const unsigned threads = std::max(1u, opt.threads);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job; (job = next++) < report.rows.size();) work(job);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::size_t hits = 0;
    for (std::size_t k = 0; k < per_cell; ++k) {
      const auto& r = report.rows[c * per_cell + k];
      hits += r.error.empty() && r.verdict == r.expected;
    }
    const double rate = per_cell ? static_cast<double>(hits) / static_cast<double>(per_cell) : 0.0;
    for (std::size_t k = 0; k < per_cell; ++k) report.rows[c * per_cell + k].agreement = rate;
  }
  return report;
}

}  // namespace lisa
