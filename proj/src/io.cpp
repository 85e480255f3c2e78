#include "lisa/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

namespace lisa {

using nlohmann::json;

namespace {

std::string num(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_weight_rows(std::ostream& out, const Network& net, const MappingTable& table,
                       const std::string& prefix) {
  for (auto kind : kMappedKinds) {
    const auto& b = table.block(kind);
    for (std::size_t d = 0; d < b.rows(); ++d)
      for (std::size_t r = 0; r < b.cols(); ++r)
        out << prefix << to_string(kind) << ',' << net.tokens[b.drivers()[d]].name << ','
            << net.tokens[b.recipients()[r]].name << ',' << num(b.weight(d, r), 17) << '\n';
  }
}

// Minimal CSV quoting for labels that may contain commas, e.g. "P(a,b)".
std::string field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

template <typename T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw IoError(std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

void write_traces_csv(std::ostream& out, const TraceSet& tr) {
  out << "iteration,unit,analog,kind,activation\n";
  for (int t = 1; t <= tr.iterations; ++t)
    for (const auto& s : tr.series)
      out << t << ',' << field(s.unit) << ',' << to_string(s.analog) << ',' << s.kind << ','
          << num(s.values[static_cast<std::size_t>(t - 1)]) << '\n';
}

void write_windows_csv(std::ostream& out, const TraceSet& tr) {
  out << "propositionLabel,startIter,endIter,passIndex\n";
  for (const auto& w : tr.windows)
    out << field(w.label) << ',' << w.start << ',' << w.end << ',' << w.pass << '\n';
}

void write_weights_csv(std::ostream& out, const Network& net, const MappingTable& table) {
  out << "kind,driverUnit,recipientUnit,weight\n";
  write_weight_rows(out, net, table, "");
}

void write_weight_snapshots_csv(std::ostream& out, const Network& net,
                                const std::vector<WeightSnapshot>& snapshots) {
  out << "iteration,kind,driverUnit,recipientUnit,weight\n";
  for (const auto& s : snapshots) write_weight_rows(out, net, s.table, std::to_string(s.iteration) + ",");
}

json params_to_json(const SimParams& p) {
  return {{"itersPerProp", p.iters_per_prop},
          {"growthRate", p.growth_rate},
          {"decayRate", p.decay_rate},
          {"recipientDecayRate", p.recipient_decay_rate},
          {"fireThreshold", p.fire_threshold},
          {"inhibitorWindow", p.inhibitor_window},
          {"refractory", p.refractory},
          {"noiseAmplitude", p.noise_amplitude},
          {"lateralGain", p.lateral_gain},
          {"structureLateralGain", p.structure_lateral_gain},
          {"topDownGain", p.top_down_gain},
          {"parentGain", p.parent_gain},
          {"mapGain", p.map_gain},
          {"siblingGain", p.sibling_gain},
          {"suppression", p.suppression},
          {"propositionRate", p.proposition_rate}};
}

SimParams params_from_json(const json& j, SimParams p) {
  if (!j.is_object()) throw IoError("params must be an object");
  const json known = params_to_json(p);
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw IoError("unknown parameter '" + key + "'");
  read(j, "itersPerProp", p.iters_per_prop);
  read(j, "growthRate", p.growth_rate);
  read(j, "decayRate", p.decay_rate);
  read(j, "recipientDecayRate", p.recipient_decay_rate);
  read(j, "fireThreshold", p.fire_threshold);
  read(j, "inhibitorWindow", p.inhibitor_window);
  read(j, "refractory", p.refractory);
  read(j, "noiseAmplitude", p.noise_amplitude);
  read(j, "lateralGain", p.lateral_gain);
  read(j, "structureLateralGain", p.structure_lateral_gain);
  read(j, "topDownGain", p.top_down_gain);
  read(j, "parentGain", p.parent_gain);
  read(j, "mapGain", p.map_gain);
  read(j, "siblingGain", p.sibling_gain);
  read(j, "suppression", p.suppression);
  read(j, "propositionRate", p.proposition_rate);
  if (auto err = p.check()) throw IoError("invalid parameters: " + *err);
  return p;
}

json thresholds_to_json(const Thresholds& th) {
  return {{"success", th.success}, {"margin", th.margin}, {"slidingWindow", th.sliding_window}};
}

Thresholds thresholds_from_json(const json& j, Thresholds th) {
  if (!j.is_object()) throw IoError("thresholds must be an object");
  const json known = thresholds_to_json(th);
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw IoError("unknown threshold '" + key + "'");
  read(j, "success", th.success);
  read(j, "margin", th.margin);
  read(j, "slidingWindow", th.sliding_window);
  if (th.sliding_window <= 0) throw IoError("slidingWindow must be positive");
  return th;
}

json run_config_to_json(const RunConfig& c) {
  json j;
  j["taskSelector"] = c.task_selector;
  j["variant"] = c.variant ? json(std::string(to_string(*c.variant))) : json(nullptr);
  j["task"] = json::parse(task_to_json(c.task));
  j["arch"] = {{"kind", std::string(to_string(c.arch.kind))},
               {"mu", c.arch.mu},
               {"relationsAllowed", c.arch.relations_allowed}};
  j["seed"] = c.seed;
  j["params"] = params_to_json(c.params);
  j["thresholds"] = thresholds_to_json(c.thresholds);
  j["trace"] = c.trace == TraceDetail::AllUnits ? "all" : "probes";
  return j;
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw IoError("config must be an object");
  if (!j.contains("task")) throw IoError("config lacks a task");
  if (!j.contains("arch") || !j.at("arch").is_object()) throw IoError("config lacks an arch object");

  RunConfig c;
  read(j, "taskSelector", c.task_selector);
  if (j.contains("variant") && !j.at("variant").is_null()) {
    std::string v;
    read(j, "variant", v);
    c.variant = parse_variant(v);
    if (!c.variant) throw IoError("unknown variant '" + v + "'");
  }
  c.task = parse_task_spec(j.at("task").dump());

  const json& a = j.at("arch");
  std::string kind;
  read(a, "kind", kind);
  const auto k = parse_arch_kind(kind);
  if (!k) throw IoError("unknown architecture '" + kind + "'");
  c.arch = ArchConfig::of(*k);
  read(a, "mu", c.arch.mu);
  read(a, "relationsAllowed", c.arch.relations_allowed);

  read(j, "seed", c.seed);
  if (j.contains("params")) c.params = params_from_json(j.at("params"));
  if (j.contains("thresholds")) c.thresholds = thresholds_from_json(j.at("thresholds"));
  std::string trace = "probes";
  read(j, "trace", trace);
  if (trace != "probes" && trace != "all") throw IoError("trace must be 'probes' or 'all'");
  c.trace = trace == "all" ? TraceDetail::AllUnits : TraceDetail::Probes;
  return c;
}

namespace {

json verdict_json(const Verdict& v) {
  return {{"verdict", std::string(to_string(v.outcome))},
          {"siAC", v.si_afford_critical},
          {"siNC", v.si_noafford_critical},
          {"siAN", v.si_afford_noncritical},
          {"window", {v.window.first, v.window.last}}};
}

}  // namespace

json verdict_to_json(const CellResult& res, const RunConfig& config) {
  json j = verdict_json(res.verdict);
  j["passes"] = json::array();
  for (const auto& v : res.pass_verdicts) j["passes"].push_back(verdict_json(v));
  j["timeToCriterion"] = res.time_to_criterion ? json(*res.time_to_criterion) : json(nullptr);
  j["expected"] = config.task.expected_verdict
                      ? json(std::string(to_string(*config.task.expected_verdict)))
                      : json(nullptr);
  j["iterations"] = res.run.traces.iterations;
  j["seed"] = config.seed;
  j["config"] = run_config_to_json(config);
  return j;
}

void write_matrix_csv(std::ostream& out, const MatrixReport& report) {
  out << "task,arch,variant,seed,verdict,expected,siAC,siNC,siAN,timeToCriterion,agreement\n";
  for (const auto& r : report.rows) {
    out << to_string(r.id.task) << ',' << field(to_string(r.arch)) << ','
        << (r.id.variant ? std::string(to_string(*r.id.variant)) : "") << ',' << r.seed << ','
        << (r.error.empty() ? to_string(r.verdict) : "error") << ',' << to_string(r.expected) << ','
        << num(r.si_ac, 6) << ',' << num(r.si_nc, 6) << ',' << num(r.si_an, 6) << ','
        << (r.time_to_criterion ? std::to_string(*r.time_to_criterion) : "") << ','
        << num(r.agreement, 6) << '\n';
  }
}

void write_matrix_summary(std::ostream& out, const MatrixReport& report) {
  out << std::left << std::setw(22) << "cell" << std::setw(9) << "verdict" << std::setw(9)
      << "expected" << std::setw(8) << "siAC" << std::setw(8) << "siNC" << std::setw(8) << "siAN"
      << std::setw(6) << "ttc" << std::setw(8) << "passes"
      << "agree\n";
  if (report.rows.empty()) return;
  const auto first = report.rows.front().seed;
  int matched = 0, cells = 0;
  for (const auto& r : report.rows) {
    if (r.seed != first) continue;
    ++cells;
    const bool ok = r.error.empty() && r.verdict == r.expected;
    matched += ok;
    std::string passes;
    for (auto p : r.pass_verdicts) passes += p == Outcome::Success ? 'S' : 'F';
    out << std::left << std::setw(22) << cell_name(r.id, r.arch) << std::setw(9)
        << (r.error.empty() ? to_string(r.verdict) : "error") << std::setw(9) << to_string(r.expected)
        << std::setw(8) << num(r.si_ac, 3) << std::setw(8) << num(r.si_nc, 3) << std::setw(8)
        << num(r.si_an, 3) << std::setw(6)
        << (r.time_to_criterion ? std::to_string(*r.time_to_criterion) : "-") << std::setw(8)
        << passes << num(r.agreement, 3) << (ok ? "" : "  MISMATCH") << '\n';
    if (!r.error.empty()) out << "  error: " << r.error << '\n';
  }
  out << matched << '/' << cells << " cells match on seed " << first << '\n';
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << content;
    f.close();
    if (!f) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
  const auto probe = dir / ".lisa-write-test";
  {
    std::ofstream f(probe);
    if (!f) throw IoError("directory is not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

std::vector<std::filesystem::path> export_fixtures(const std::filesystem::path& dir) {
  ensure_writable_dir(dir);
  std::vector<std::filesystem::path> out;
  for (auto f : kAllFixtures) {
    const auto path = dir / (std::string(fixture_stem(f)) + ".json");
    write_file_atomic(path, task_to_json(fixture(f)) + "\n");
    out.push_back(path);
  }
  return out;
}

}  // namespace lisa
