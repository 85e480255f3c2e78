// lisa-sim: run one simulation, the 17-cell matrix, or export fixtures.
//
// Exit codes: 0 ok, 1 matrix mismatch, 2 bad task/arch/config, 3 output
// not writable.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "lisa/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitUnwritable = 3;

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<int> iters_per_prop;
  std::optional<double> mu;
  std::optional<double> noise;
  std::string config_path;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--iters-per-prop", iters_per_prop, "Iterations each proposition fires");
    cmd.add_option("--mu", mu, "Mapping learning rate override");
    cmd.add_option("--noise", noise, "Driver SP noise amplitude");
    cmd.add_option("--config", config_path, "JSON config (a run config, a verdict.json, or {params, thresholds})");
  }

  lisa::SimParams apply(lisa::SimParams p) const {
    if (iters_per_prop) p.iters_per_prop = *iters_per_prop;
    if (noise) p.noise_amplitude = *noise;
    if (auto err = p.check()) throw BadInput("invalid parameters: " + *err);
    return p;
  }
};

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw BadInput("cannot read " + path);
  try {
    json j = json::parse(f);
    // A verdict.json carries its run config under "config".
    if (j.is_object() && j.contains("config") && j.at("config").is_object()) return j.at("config");
    return j;
  } catch (const json::exception& e) {
    throw BadInput(path + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw BadInput("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

lisa::ArchConfig parse_arch(const std::string& text) {
  const auto kind = lisa::parse_arch_kind(text);
  if (!kind) throw BadInput("unknown architecture '" + text + "' (expected dbo, ro, mo or rm)");
  return lisa::ArchConfig::of(*kind);
}

std::optional<lisa::Variant> parse_variant_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = lisa::parse_variant(text);
  if (!v) throw BadInput("unknown variant '" + text + "' (expected cat or balints)");
  return v;
}

lisa::TaskSpec load_task(const std::string& selector, const std::optional<lisa::Variant>& variant,
                         const lisa::ArchConfig& arch) {
  if (auto kind = lisa::parse_task_kind(selector)) {
    try {
      return lisa::builtin_task({*kind, variant}, arch);
    } catch (const std::invalid_argument& e) {
      throw BadInput(e.what());
    }
  }
  if (fs::is_regular_file(selector)) {
    try {
      return lisa::parse_task_spec(read_file(selector));
    } catch (const lisa::TaskSpecError& e) {
      throw BadInput(selector + ": " + e.what());
    }
  }
  throw BadInput("unknown task '" + selector + "' (expected dbo, ro, mo, rm or a task document)");
}

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PHYLO_SIM_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

struct RunArgs {
  std::string task, arch, variant, trace;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  bool weights_at_boundaries = false;
  Overrides ov;
};

int cmd_run(const RunArgs& a, CLI::App& cmd) {
  lisa::RunConfig cfg;
  bool from_config = false;
  if (!a.ov.config_path.empty()) {
    const json j = load_json(a.ov.config_path);
    if (j.contains("task")) {
      try {
        cfg = lisa::run_config_from_json(j);
      } catch (const std::exception& e) {
        throw BadInput(a.ov.config_path + ": " + e.what());
      }
      from_config = true;
    } else {
      try {
        if (j.contains("params")) cfg.params = lisa::params_from_json(j.at("params"));
        if (j.contains("thresholds")) cfg.thresholds = lisa::thresholds_from_json(j.at("thresholds"));
      } catch (const lisa::IoError& e) {
        throw BadInput(a.ov.config_path + ": " + e.what());
      }
    }
  }

  const bool task_given = cmd.count("--task") > 0;
  const bool arch_given = cmd.count("--arch") > 0;
  if (!from_config && !task_given) throw BadInput("--task is required");
  if (arch_given || !from_config) cfg.arch = parse_arch(a.arch);
  if (cmd.count("--variant")) cfg.variant = parse_variant_flag(a.variant);
  if (task_given || arch_given || cmd.count("--variant")) {
    cfg.task_selector = task_given ? a.task : cfg.task_selector;
    if (cfg.task_selector.empty()) throw BadInput("--task is required");
    cfg.task = load_task(cfg.task_selector, cfg.variant, cfg.arch);
  }
  if (a.ov.mu) cfg.arch.mu = *a.ov.mu;
  if (a.seed) cfg.seed = *a.seed;
  if (cmd.count("--trace")) cfg.trace = a.trace == "all" ? lisa::TraceDetail::AllUnits : lisa::TraceDetail::Probes;
  cfg.params = a.ov.apply(cfg.params);

  lisa::CellResult res;
  lisa::Network net;
  try {
    net = lisa::build_network(cfg.task, cfg.arch);
    res = lisa::run_cell({cfg.task, cfg.arch, cfg.params, cfg.seed}, cfg.thresholds, cfg.trace);
  } catch (const lisa::TaskSpecError& e) {
    throw BadInput(e.what());
  } catch (const lisa::NetworkError& e) {
    throw BadInput(e.what());
  }

  const fs::path out = a.out;
  lisa::ensure_writable_dir(out);
  std::ostringstream traces, windows, weights;
  lisa::write_traces_csv(traces, res.run.traces);
  lisa::write_windows_csv(windows, res.run.traces);
  lisa::write_weights_csv(weights, net, res.run.mapping);
  lisa::write_file_atomic(out / "traces.csv", traces.str());
  lisa::write_file_atomic(out / "windows.csv", windows.str());
  lisa::write_file_atomic(out / "weights.csv", weights.str());
  if (a.weights_at_boundaries) {
    std::ostringstream snaps;
    lisa::write_weight_snapshots_csv(snaps, net, res.run.snapshots);
    lisa::write_file_atomic(out / "weights_boundaries.csv", snaps.str());
  }
  lisa::write_file_atomic(out / "verdict.json", lisa::verdict_to_json(res, cfg).dump(2) + "\n");

  const auto& v = res.verdict;
  std::cout << cfg.task.name << " / " << lisa::to_string(cfg.arch.kind) << " seed " << cfg.seed << ": "
            << lisa::to_string(v.outcome) << "  siAC=" << v.si_afford_critical
            << " siNC=" << v.si_noafford_critical << " siAN=" << v.si_afford_noncritical;
  if (res.time_to_criterion) std::cout << "  ttc=" << *res.time_to_criterion;
  std::cout << "\n";
  return 0;
}

struct MatrixArgs {
  std::uint64_t seed = 7;
  int seeds = 1;
  std::string out;
  Overrides ov;
};

int cmd_matrix(const MatrixArgs& a) {
  lisa::MatrixOptions opt;
  if (!a.ov.config_path.empty()) {
    const json j = load_json(a.ov.config_path);
    try {
      if (j.contains("params")) opt.params = lisa::params_from_json(j.at("params"));
      if (j.contains("thresholds")) opt.thresholds = lisa::thresholds_from_json(j.at("thresholds"));
    } catch (const lisa::IoError& e) {
      throw BadInput(a.ov.config_path + ": " + e.what());
    }
  }
  if (a.seeds < 1) throw BadInput("--seeds must be at least 1");
  opt.params = a.ov.apply(opt.params);
  opt.mu = a.ov.mu;
  opt.seeds.clear();
  for (int i = 0; i < a.seeds; ++i) opt.seeds.push_back(a.seed + static_cast<std::uint64_t>(i));
  opt.threads = thread_cap();

  if (!a.out.empty()) lisa::ensure_writable_dir(a.out);
  const auto report = lisa::run_matrix(opt);
  std::ostringstream summary;
  lisa::write_matrix_summary(summary, report);
  std::cout << summary.str();
  if (!a.out.empty()) {
    std::ostringstream csv;
    lisa::write_matrix_csv(csv, report);
    json echo = {{"seeds", opt.seeds},
                 {"mu", opt.mu ? json(*opt.mu) : json(nullptr)},
                 {"params", lisa::params_to_json(opt.params)},
                 {"thresholds", lisa::thresholds_to_json(opt.thresholds)}};
    lisa::write_file_atomic(fs::path(a.out) / "matrix.csv", csv.str());
    lisa::write_file_atomic(fs::path(a.out) / "summary.txt", summary.str());
    lisa::write_file_atomic(fs::path(a.out) / "config.json", echo.dump(2) + "\n");
  }
  return report.all_match_first_seed() ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ablated LISA affordance-inference simulator"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one simulation and write traces, weights and verdict");
  run_cmd->add_option("--task", run.task, "dbo, ro, mo, rm or a task document path");
  run_cmd->add_option("--arch", run.arch, "dbo, ro, mo or rm")->default_val("rm");
  run_cmd->add_option("--variant", run.variant, "cat or balints (RO task, nonrelational architectures)");
  run_cmd->add_option("--seed", run.seed, "Noise seed (default 7)");
  run_cmd->add_option("--out", run.out, "Output directory")->default_val("out");
  run_cmd->add_option("--trace", run.trace, "probes or all")->check(CLI::IsMember({"probes", "all"}));
  run_cmd->add_flag("--weights-at-boundaries", run.weights_at_boundaries,
                    "Also dump the weights after every phase-set boundary");
  run.ov.add_to(*run_cmd);

  MatrixArgs matrix;
  auto* matrix_cmd = app.add_subcommand("matrix", "Run all 17 cells and compare with expectations");
  matrix_cmd->add_option("--seed", matrix.seed, "First seed")->default_val(7);
  matrix_cmd->add_option("--seeds", matrix.seeds, "Number of consecutive seeds")->default_val(1);
  matrix_cmd->add_option("--out", matrix.out, "Directory for matrix.csv, summary.txt and config.json");
  matrix.ov.add_to(*matrix_cmd);

  std::string fixtures_out = "fixtures";
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Export the built-in fixtures as task documents");
  fixtures_cmd->add_option("--out", fixtures_out, "Output directory")->default_val("fixtures");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run, *run_cmd);
    if (*matrix_cmd) return cmd_matrix(matrix);
    for (const auto& p : lisa::export_fixtures(fixtures_out)) std::cout << p.string() << "\n";
    return 0;
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const lisa::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnwritable;
  }
}
