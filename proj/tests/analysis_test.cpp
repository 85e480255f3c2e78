#include <gtest/gtest.h>

#include <random>

#include "lisa/analysis.hpp"

namespace lisa {
namespace {

using Series = std::vector<double>;

TEST(SynchronyIndex, Examples) {
  EXPECT_DOUBLE_EQ(synchrony_index(Series{0.2, 0.7, 1.0}, Series{0.2, 0.7, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(synchrony_index(Series{1, 0, 1, 0}, Series{0, 1, 0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(synchrony_index(Series{1, 0, 1, 0}, Series{1, 1, 0, 0}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(synchrony_index(Series{0.5, 0.5}, Series{1.0, 1.0}), 0.5);
}

TEST(SynchronyIndex, SilentPairIsZero) {
  EXPECT_EQ(synchrony_index(Series(10, 0.0), Series(10, 0.0)), 0.0);
}

TEST(SynchronyIndex, Window) {
  const Series a{1, 1, 0, 0, 1};
  const Series b{1, 0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(synchrony_index(a, b, {1, 2}), 0.5);
  EXPECT_DOUBLE_EQ(synchrony_index(a, b, {5, 5}), 1.0);
  EXPECT_DOUBLE_EQ(synchrony_index(a, b, {3, 4}), 0.0);
}

TEST(SynchronyIndex, Errors) {
  EXPECT_THROW(synchrony_index(Series{1, 2}, Series{1}), std::invalid_argument);
  EXPECT_THROW(synchrony_index(Series{1, 2}, Series{1, 2}, {0, 2}), std::invalid_argument);
  EXPECT_THROW(synchrony_index(Series{1, 2}, Series{1, 2}, {1, 3}), std::invalid_argument);
}

TEST(SynchronyIndex, SymmetricAndBounded) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Series a(50), b(50);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    const double ab = synchrony_index(a, b);
    EXPECT_EQ(ab, synchrony_index(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_DOUBLE_EQ(synchrony_index(a, a), 1.0);
  }
}

// Square wave of the given amplitude: on for `duty` iterations of every
// `period`, starting at `phase`.
bool on(int t, int period, int duty, int phase) { return ((t - phase) % period + period) % period < duty; }

TEST(SynchronyIndex, SquareWavesMatchCountingOracle) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> period_d(4, 40), len_d(20, 400);
  std::uniform_real_distribution<double> amp(0.05, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int len = len_d(rng);
    const int pa = period_d(rng), pb = period_d(rng);
    const int da = std::uniform_int_distribution<int>(1, pa)(rng);
    const int db = std::uniform_int_distribution<int>(1, pb)(rng);
    const int fa = std::uniform_int_distribution<int>(0, pa - 1)(rng);
    const int fb = std::uniform_int_distribution<int>(0, pb - 1)(rng);
    const double ha = amp(rng), hb = amp(rng);
    Series a(len), b(len);
    long both = 0, only_a = 0, only_b = 0;
    for (int t = 0; t < len; ++t) {
      const bool x = on(t, pa, da, fa), y = on(t, pb, db, fb);
      a[t] = x ? ha : 0.0;
      b[t] = y ? hb : 0.0;
      both += x && y;
      only_a += x && !y;
      only_b += y && !x;
    }
    const double num = std::min(ha, hb) * both;
    const double den = std::max(ha, hb) * both + ha * only_a + hb * only_b;
    const double expected = den > 0.0 ? num / den : 0.0;
    EXPECT_NEAR(synchrony_index(a, b), expected, 1e-12);
  }
}

TraceSet synthetic(const Series& aff, const Series& crit, const Series& noaff, const Series& noncrit) {
  TraceSet t;
  t.iterations = static_cast<int>(aff.size());
  t.affordance = "aff";
  t.critical = "crit";
  t.no_affordance = "noaff";
  t.noncritical = "noncrit";
  for (const auto& [name, v] : {std::pair{"aff", aff}, {"crit", crit}, {"noaff", noaff}, {"noncrit", noncrit}})
    t.series.push_back({name, Analog::Recipient, "semantic", v});
  return t;
}

const Series kPulse{1, 1, 0, 0, 1, 1, 0, 0};
const Series kAnti{0, 0, 1, 1, 0, 0, 1, 1};
const Series kSilent(8, 0.0);

TEST(JudgeWindow, SuccessNeedsAllThreeConditions) {
  auto v = judge_window(synthetic(kPulse, kPulse, kSilent, kAnti), {1, 8});
  EXPECT_EQ(v.outcome, Outcome::Success);
  EXPECT_DOUBLE_EQ(v.si_afford_critical, 1.0);
  EXPECT_DOUBLE_EQ(v.si_noafford_critical, 0.0);
  EXPECT_DOUBLE_EQ(v.si_afford_noncritical, 0.0);

  // No-affordance as synchronous with Critical as the affordance: no margin.
  EXPECT_EQ(judge_window(synthetic(kPulse, kPulse, kPulse, kAnti), {1, 8}).outcome, Outcome::Failure);
  // Affordance as synchronous with the noncritical object.
  EXPECT_EQ(judge_window(synthetic(kPulse, kPulse, kSilent, kPulse), {1, 8}).outcome, Outcome::Failure);
  // Affordance out of phase with Critical.
  EXPECT_EQ(judge_window(synthetic(kPulse, kAnti, kSilent, kSilent), {1, 8}).outcome, Outcome::Failure);
}

TEST(JudgeWindow, ThresholdsAreInclusive) {
  // Success and margin both sit exactly at SI(AC).
  const Series aff{1, 1, 0, 0, 0};
  const Series crit{1, 0.6, 0.6, 0, 0};
  EXPECT_NEAR(synchrony_index(aff, crit), 1.6 / 2.6, 1e-12);
  Thresholds th;
  th.success = synchrony_index(aff, crit);
  th.margin = th.success;
  EXPECT_EQ(judge_window(synthetic(aff, crit, Series(5, 0.0), Series(5, 0.0)), {1, 5}, th).outcome,
            Outcome::Success);
  th.success += 1e-9;
  EXPECT_EQ(judge_window(synthetic(aff, crit, Series(5, 0.0), Series(5, 0.0)), {1, 5}, th).outcome,
            Outcome::Failure);
}

TEST(JudgeInference, UsesLastEvaluationWindow) {
  const Series aff{1, 1, 1, 1, 1, 1, 1, 1};
  const Series crit{0, 0, 0, 0, 1, 1, 1, 1};
  auto t = synthetic(aff, crit, Series(8, 0.0), Series(8, 0.0));
  t.evaluation_windows = {{"p", 1, 4, 1}, {"p", 5, 8, 2}};
  const auto passes = judge_passes(t);
  ASSERT_EQ(passes.size(), 2u);
  EXPECT_EQ(passes[0].outcome, Outcome::Failure);
  EXPECT_EQ(passes[1].outcome, Outcome::Success);
  EXPECT_EQ(judge_inference(t), passes[1]);
  EXPECT_EQ(judge_inference(t).window, (IterRange{5, 8}));
}

TEST(JudgeInference, WholeRunWithoutWindows) {
  const auto v = judge_inference(synthetic(kPulse, kPulse, kSilent, kSilent));
  EXPECT_EQ(v.window, (IterRange{1, 8}));
}

TEST(JudgeInference, MissingProbeThrows) {
  auto t = synthetic(kPulse, kPulse, kSilent, kSilent);
  t.critical = "nosuch";
  EXPECT_THROW(judge_inference(t), std::out_of_range);
}

TEST(TimeToCriterion, FirstWindowThatCrossesThreshold) {
  Series aff(200, 0.0), crit(200, 0.0);
  for (int t = 100; t < 200; ++t) aff[t] = crit[t] = 1.0;
  const auto tr = synthetic(aff, crit, Series(200, 0.0), Series(200, 0.0));
  EXPECT_EQ(time_to_criterion(tr), 101);
}

TEST(TimeToCriterion, NeverWhenOutOfPhase) {
  Series aff(120), crit(120);
  for (int t = 0; t < 120; ++t) {
    aff[t] = t % 10 < 5;
    crit[t] = t % 10 >= 5;
  }
  EXPECT_FALSE(time_to_criterion(synthetic(aff, crit, Series(120, 0.0), Series(120, 0.0))));
}

TEST(TimeToCriterion, PartialOverlapMustExceedThreshold) {
  // Two shared iterations out of four active gives SI = 0.5 > 0.4; one
  // shared out of five gives 0.2.
  Series aff(60), crit(60), weak(60);
  for (int t = 0; t < 60; ++t) {
    aff[t] = t % 5 < 3;
    crit[t] = t % 5 >= 1 && t % 5 < 4;
    weak[t] = t % 5 >= 2 && t % 5 < 5;
  }
  EXPECT_EQ(time_to_criterion(synthetic(aff, crit, Series(60, 0.0), Series(60, 0.0))), 30);
  EXPECT_FALSE(time_to_criterion(synthetic(aff, weak, Series(60, 0.0), Series(60, 0.0))));
}

TEST(CellName, Format) {
  EXPECT_EQ(cell_name({TaskKind::RO, Variant::Balints}, ArchKind::DBO), "ro-task/DBO-balints");
  EXPECT_EQ(cell_name({TaskKind::MO, std::nullopt}, ArchKind::RM), "mo-task/R&M");
}

TEST(RunCell, MatchesExpectationOnDefaultSeed) {
  for (const auto& c : matrix_cells()) {
    const auto res = run_cell({c.fixture, ArchConfig::of(c.arch), SimParams{}, 7});
    EXPECT_EQ(res.verdict.outcome, c.expected) << cell_name(c.id, c.arch);
    EXPECT_EQ(res.pass_verdicts.back(), res.verdict) << cell_name(c.id, c.arch);
  }
}

void expect_same(const MatrixReport& a, const MatrixReport& b) {
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto &x = a.rows[i], &y = b.rows[i];
    EXPECT_EQ(x.id, y.id);
    EXPECT_EQ(x.arch, y.arch);
    EXPECT_EQ(x.seed, y.seed);
    EXPECT_EQ(x.verdict, y.verdict);
    EXPECT_EQ(x.si_ac, y.si_ac);
    EXPECT_EQ(x.si_nc, y.si_nc);
    EXPECT_EQ(x.si_an, y.si_an);
    EXPECT_EQ(x.time_to_criterion, y.time_to_criterion);
    EXPECT_EQ(x.pass_verdicts, y.pass_verdicts);
    EXPECT_EQ(x.agreement, y.agreement);
  }
}

TEST(RunMatrix, IndependentOfThreadCount) {
  MatrixOptions opt;
  opt.seeds = {7, 8, 9};
  opt.threads = 1;
  const auto serial = run_matrix(opt);
  opt.threads = 4;
  const auto parallel = run_matrix(opt);
  expect_same(serial, parallel);
  EXPECT_EQ(serial.rows.size(), 51u);
}

TEST(RunMatrix, RowOrderIsCellMajor) {
  MatrixOptions opt;
  opt.seeds = {7, 8};
  const auto report = run_matrix(opt);
  const auto cells = matrix_cells();
  ASSERT_EQ(report.rows.size(), 34u);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    EXPECT_EQ(report.rows[i].id, cells[i / 2].id);
    EXPECT_EQ(report.rows[i].arch, cells[i / 2].arch);
    EXPECT_EQ(report.rows[i].seed, opt.seeds[i % 2]);
  }
  EXPECT_EQ(report.cell_agreement().size(), 17u);
}

TEST(RunMatrix, DefaultSeedMatchesAndMuOverrideBreaksIt) {
  EXPECT_TRUE(run_matrix({}).all_match_first_seed());
  MatrixOptions opt;
  opt.mu = 0.0;
  const auto report = run_matrix(opt);
  EXPECT_FALSE(report.all_match_first_seed());
  for (const auto& row : report.rows)
    if (row.arch == ArchKind::DBO || row.arch == ArchKind::RO) EXPECT_EQ(row.verdict, row.expected);
}

TEST(MatrixReport, FirstSeedMismatchIsReported) {
  MatrixReport r;
  for (int i = 0; i < 4; ++i) {
    MatrixRow row;
    row.seed = i;
    row.verdict = i == 0 ? Outcome::Failure : Outcome::Success;
    row.expected = Outcome::Success;
    r.rows.push_back(row);
  }
  EXPECT_FALSE(r.all_match_first_seed());
  EXPECT_FALSE(MatrixReport{}.all_match_first_seed());
}

}  // namespace
}  // namespace lisa
