#include "lisa/core_model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "lisa/architecture.hpp"

namespace lisa {

using nlohmann::json;

std::string_view to_string(Analog a) {
  return a == Analog::Driver ? "driver" : "recipient";
}

std::string_view to_string(UnitKind k) {
  switch (k) {
    case UnitKind::Proposition:
      return "proposition";
    case UnitKind::SP:
      return "sp";
    case UnitKind::Predicate:
      return "predicate";
    case UnitKind::Object:
      return "object";
  }
  return "?";
}

std::string_view to_string(ScheduleMode m) {
  return m == ScheduleMode::SinglePass ? "single-pass" : "double-pass";
}

std::string_view to_string(Outcome o) {
  return o == Outcome::Success ? "success" : "failure";
}

// ---------------------------------------------------------------------------
// TaskSpec

namespace {

template <typename Analogs>
auto& find_role(Analogs& analogs, Analog role) {
  auto it = std::find_if(analogs.begin(), analogs.end(),
                         [role](const AnalogSpec& a) { return a.role == role; });
  if (it == analogs.end())
    throw TaskSpecError(std::string("task has no ") + std::string(to_string(role)) +
                        " analog");
  return *it;
}

}  // namespace

const AnalogSpec& TaskSpec::driver() const { return find_role(analogs, Analog::Driver); }
const AnalogSpec& TaskSpec::recipient() const {
  return find_role(analogs, Analog::Recipient);
}
AnalogSpec& TaskSpec::driver() { return find_role(analogs, Analog::Driver); }
AnalogSpec& TaskSpec::recipient() { return find_role(analogs, Analog::Recipient); }

std::vector<std::string> TaskSpec::semantic_pool() const {
  std::vector<std::string> pool;
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string& s) {
    if (seen.insert(s).second) pool.push_back(s);
  };
  for (const auto& analog : analogs) {
    for (const auto& obj : analog.objects)
      for (const auto& s : obj.semantics) add(s);
    for (const auto& prop : analog.propositions)
      for (const auto& role : prop.role_semantics)
        for (const auto& s : role) add(s);
  }
  return pool;
}

void validate_task_spec(const TaskSpec& task) {
  if (task.analogs.size() != 2) throw TaskSpecError("exactly two analogs required");
  const bool has_driver = std::any_of(task.analogs.begin(), task.analogs.end(),
                                      [](const auto& a) { return a.role == Analog::Driver; });
  const bool has_recipient =
      std::any_of(task.analogs.begin(), task.analogs.end(),
                  [](const auto& a) { return a.role == Analog::Recipient; });
  if (!has_driver || !has_recipient)
    throw TaskSpecError("one driver and one recipient analog required");

  for (const auto& analog : task.analogs) {
    std::unordered_set<std::string> names;
    for (const auto& obj : analog.objects) {
      if (obj.name.empty()) throw TaskSpecError("object with empty name in " + analog.name);
      if (!names.insert(obj.name).second)
        throw TaskSpecError("duplicate unit name '" + obj.name + "' in " + analog.name);
    }
    for (const auto& prop : analog.propositions) {
      if (prop.label.empty())
        throw TaskSpecError("proposition with empty label in " + analog.name);
      if (!names.insert(prop.label).second)
        throw TaskSpecError("duplicate unit name '" + prop.label + "' in " + analog.name);
    }
    for (const auto& prop : analog.propositions) {
      if (prop.arity() == 0)
        throw TaskSpecError("proposition '" + prop.label + "' has no arguments");
      if (prop.role_semantics.size() != prop.arity())
        throw TaskSpecError("arity mismatch in '" + prop.label + "': " +
                            std::to_string(prop.role_semantics.size()) +
                            " role-semantic lists for " + std::to_string(prop.arity()) +
                            " arguments");
      for (const auto& arg : prop.args)
        if (!names.contains(arg))
          throw TaskSpecError("unresolved filler '" + arg + "' in '" + prop.label + "'");
    }
  }

  const auto pool = task.semantic_pool();
  const std::unordered_set<std::string> pool_set(pool.begin(), pool.end());
  for (const auto* probe : {&task.probes.affordance, &task.probes.critical,
                            &task.probes.no_affordance, &task.probes.noncritical}) {
    if (probe->empty() || !pool_set.contains(*probe))
      throw TaskSpecError("probe name not found: '" + *probe + "'");
  }

  const auto& drv = task.driver();
  auto mentions_affordance = [&](const std::vector<std::string>& sems) {
    return std::find(sems.begin(), sems.end(), task.probes.affordance) != sems.end();
  };
  for (const auto& obj : drv.objects)
    if (mentions_affordance(obj.semantics))
      throw TaskSpecError("affordance semantic attached to driver object '" + obj.name + "'");
  for (const auto& prop : drv.propositions)
    for (const auto& role : prop.role_semantics)
      if (mentions_affordance(role))
        throw TaskSpecError("affordance semantic attached to driver predicate '" +
                            prop.predicate + "'");

  if (task.evaluate) {
    const auto& props = drv.propositions;
    if (std::none_of(props.begin(), props.end(),
                     [&](const auto& p) { return p.label == *task.evaluate; }))
      throw TaskSpecError("evaluate names no driver proposition: '" + *task.evaluate + "'");
  }
}

namespace {

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw TaskSpecError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw TaskSpecError(std::string(what) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw TaskSpecError(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_string()) throw TaskSpecError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

TaskSpec parse_task_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TaskSpecError(std::string("malformed task document: ") + e.what());
  }
  if (!doc.is_object()) throw TaskSpecError("malformed task document: top level must be an object");

  TaskSpec task;
  task.name = string_field(doc, "name");

  const auto& analogs = field(doc, "analogs");
  if (!analogs.is_array()) throw TaskSpecError("'analogs' must be an array");
  if (analogs.size() != 2) throw TaskSpecError("exactly two analogs required");
  for (const auto& a : analogs) {
    if (!a.is_object()) throw TaskSpecError("analog entries must be objects");
    AnalogSpec analog;
    analog.name = string_field(a, "name");
    const auto role = string_field(a, "role");
    if (role == "driver")
      analog.role = Analog::Driver;
    else if (role == "recipient")
      analog.role = Analog::Recipient;
    else
      throw TaskSpecError("analog role must be 'driver' or 'recipient', got '" + role + "'");
    analog.preserve_relations = a.value("preserveRelations", false);
    for (const auto& o : a.value("objects", json::array())) {
      analog.objects.push_back(
          {string_field(o, "name"), string_list(field(o, "semantics"), "semantics")});
    }
    for (const auto& p : a.value("propositions", json::array())) {
      PropositionSpec prop;
      prop.label = string_field(p, "label");
      prop.predicate = string_field(p, "predicate");
      const auto& roles = field(p, "roleSemantics");
      if (!roles.is_array()) throw TaskSpecError("'roleSemantics' must be an array");
      for (const auto& r : roles) prop.role_semantics.push_back(string_list(r, "roleSemantics"));
      prop.args = string_list(field(p, "args"), "args");
      analog.propositions.push_back(std::move(prop));
    }
    task.analogs.push_back(std::move(analog));
  }

  const auto& probes = field(doc, "probes");
  task.probes.affordance = string_field(probes, "affordance");
  task.probes.critical = string_field(probes, "critical");
  task.probes.no_affordance = string_field(probes, "noAffordance");
  task.probes.noncritical = string_field(probes, "noncritical");

  const auto mode = doc.value("scheduleMode", std::string("single-pass"));
  if (mode == "single-pass")
    task.schedule_mode = ScheduleMode::SinglePass;
  else if (mode == "double-pass")
    task.schedule_mode = ScheduleMode::DoublePass;
  else
    throw TaskSpecError("unknown scheduleMode '" + mode + "'");

  if (auto it = doc.find("expectedVerdict"); it != doc.end() && !it->is_null()) {
    const auto v = it->get<std::string>();
    if (v == "success")
      task.expected_verdict = Outcome::Success;
    else if (v == "failure")
      task.expected_verdict = Outcome::Failure;
    else
      throw TaskSpecError("unknown expectedVerdict '" + v + "'");
  }
  if (auto it = doc.find("evaluate"); it != doc.end() && !it->is_null())
    task.evaluate = it->get<std::string>();

  validate_task_spec(task);
  return task;
}

std::string task_to_json(const TaskSpec& task, int indent) {
  json doc;
  doc["name"] = task.name;
  doc["analogs"] = json::array();
  for (const auto& analog : task.analogs) {
    json a;
    a["name"] = analog.name;
    a["role"] = std::string(to_string(analog.role));
    if (analog.preserve_relations) a["preserveRelations"] = true;
    a["objects"] = json::array();
    for (const auto& o : analog.objects)
      a["objects"].push_back({{"name", o.name}, {"semantics", o.semantics}});
    a["propositions"] = json::array();
    for (const auto& p : analog.propositions)
      a["propositions"].push_back({{"label", p.label},
                                   {"predicate", p.predicate},
                                   {"roleSemantics", p.role_semantics},
                                   {"args", p.args}});
    doc["analogs"].push_back(std::move(a));
  }
  doc["probes"] = {{"affordance", task.probes.affordance},
                   {"critical", task.probes.critical},
                   {"noAffordance", task.probes.no_affordance},
                   {"noncritical", task.probes.noncritical}};
  doc["scheduleMode"] = std::string(to_string(task.schedule_mode));
  doc["expectedVerdict"] =
      task.expected_verdict ? json(std::string(to_string(*task.expected_verdict))) : json();
  doc["evaluate"] = task.evaluate ? json(*task.evaluate) : json();
  return doc.dump(indent) + "\n";
}

// ---------------------------------------------------------------------------
// Flattening

AnalogSpec flatten_relations(const AnalogSpec& analog) {
  std::unordered_set<std::string> labels;
  for (const auto& p : analog.propositions) labels.insert(p.label);

  AnalogSpec out = analog;
  out.propositions.clear();
  for (const auto& prop : analog.propositions) {
    if (prop.arity() < 2) {
      out.propositions.push_back(prop);
      continue;
    }
    for (std::size_t i = 0; i < prop.arity(); ++i) {
      if (labels.contains(prop.args[i]))
        throw TaskSpecError("cannot flatten proposition-valued role in '" + prop.label + "'");
      const auto suffix = "." + std::to_string(i + 1);
      out.propositions.push_back(
          {prop.label + suffix, prop.predicate + suffix, {prop.role_semantics[i]}, {prop.args[i]}});
    }
  }
  return out;
}

std::vector<std::string> flattened_labels(const AnalogSpec& original, const std::string& label) {
  for (const auto& prop : original.propositions) {
    if (prop.label != label) continue;
    if (prop.arity() < 2) return {label};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < prop.arity(); ++i)
      out.push_back(label + "." + std::to_string(i + 1));
    return out;
  }
  return {};
}

namespace {

TaskSpec flatten_analogs(const TaskSpec& task, bool honor_preserve) {
  TaskSpec out = task;
  for (auto& analog : out.analogs)
    if (!honor_preserve || !analog.preserve_relations) analog = flatten_relations(analog);

  // A judged relation that got flattened is judged on the piece bound to the
  // object carrying the critical probe.
  if (task.evaluate) {
    const auto pieces = flattened_labels(task.driver(), *task.evaluate);
    const auto& drv = out.driver();
    const bool survived = std::any_of(drv.propositions.begin(), drv.propositions.end(),
                                      [&](const auto& p) { return p.label == *task.evaluate; });
    if (!survived && pieces.size() > 1) {
      std::optional<std::string> chosen;
      for (const auto& piece : pieces) {
        auto it = std::find_if(drv.propositions.begin(), drv.propositions.end(),
                               [&](const auto& p) { return p.label == piece; });
        if (it == drv.propositions.end()) continue;
        for (const auto& obj : drv.objects) {
          if (obj.name != it->args.front()) continue;
          if (std::find(obj.semantics.begin(), obj.semantics.end(), task.probes.critical) !=
              obj.semantics.end())
            chosen = piece;
        }
        if (chosen) break;
      }
      out.evaluate = chosen ? *chosen : pieces.front();
    }
  }
  return out;
}

}  // namespace

TaskSpec flatten_task(const TaskSpec& task) { return flatten_analogs(task, false); }

TaskSpec resolve_for_architecture(const TaskSpec& task, const ArchConfig& arch) {
  if (arch.relations_allowed) return task;
  return flatten_analogs(task, true);
}

// ---------------------------------------------------------------------------
// Network

std::optional<SemanticIndex> Network::find_semantic(std::string_view name) const {
  for (SemanticIndex i = 0; i < semantics.size(); ++i)
    if (semantics[i] == name) return i;
  return std::nullopt;
}

std::optional<UnitIndex> Network::find_token(std::string_view name, Analog analog) const {
  for (UnitIndex i = 0; i < tokens.size(); ++i)
    if (tokens[i].analog == analog && tokens[i].name == name) return i;
  return std::nullopt;
}

std::vector<UnitIndex> Network::units_of(UnitKind kind, Analog analog) const {
  std::vector<UnitIndex> out;
  for (UnitIndex i = 0; i < tokens.size(); ++i)
    if (tokens[i].kind == kind && tokens[i].analog == analog) out.push_back(i);
  return out;
}

namespace {

void check_acyclic(const AnalogSpec& analog) {
  std::unordered_map<std::string, const PropositionSpec*> by_label;
  for (const auto& p : analog.propositions) by_label[p.label] = &p;

  enum class Mark { None, Active, Done };
  std::unordered_map<std::string, Mark> mark;
  std::function<void(const PropositionSpec&)> visit = [&](const PropositionSpec& p) {
    auto& m = mark[p.label];
    if (m == Mark::Done) return;
    if (m == Mark::Active)
      throw NetworkError("self-referential proposition '" + p.label + "' in " + analog.name);
    m = Mark::Active;
    for (const auto& arg : p.args)
      if (auto it = by_label.find(arg); it != by_label.end()) visit(*it->second);
    mark[p.label] = Mark::Done;
  };
  for (const auto& p : analog.propositions) visit(p);
}

std::string role_unit_name(const PropositionSpec& p, std::size_t role) {
  return p.arity() == 1 ? p.predicate : p.predicate + "#" + std::to_string(role + 1);
}

}  // namespace

Network build_network(const TaskSpec& input, const ArchConfig& arch) {
  validate_task_spec(input);
  const TaskSpec task = resolve_for_architecture(input, arch);

  Network net;
  net.task_name = task.name;
  net.probes = task.probes;
  net.semantics = task.semantic_pool();

  std::unordered_map<std::string, SemanticIndex> sem_index;
  for (SemanticIndex i = 0; i < net.semantics.size(); ++i) sem_index[net.semantics[i]] = i;
  auto sem_ids = [&](const std::vector<std::string>& names) {
    std::vector<SemanticIndex> ids;
    for (const auto& n : names) ids.push_back(sem_index.at(n));
    return ids;
  };

  auto add = [&](TokenUnit u) {
    net.tokens.push_back(std::move(u));
    return net.tokens.size() - 1;
  };

  // Driver first so driver units have the lower indices.
  std::vector<const AnalogSpec*> order = {&task.driver(), &task.recipient()};
  for (const auto* analog : order) {
    check_acyclic(*analog);
    std::unordered_map<std::string, UnitIndex> objects;
    std::unordered_map<std::string, UnitIndex> props;
    std::map<std::string, std::pair<UnitIndex, std::vector<std::string>>> roles;

    for (const auto& obj : analog->objects) {
      TokenUnit u;
      u.name = obj.name;
      u.kind = UnitKind::Object;
      u.analog = analog->role;
      u.semantics = sem_ids(obj.semantics);
      objects[obj.name] = add(std::move(u));
    }
    for (const auto& prop : analog->propositions) {
      TokenUnit u;
      u.name = prop.label;
      u.kind = UnitKind::Proposition;
      u.analog = analog->role;
      props[prop.label] = add(std::move(u));
      if (analog->role == Analog::Driver) net.driver_propositions.push_back(props[prop.label]);
    }
    for (const auto& prop : analog->propositions) {
      const UnitIndex p = props.at(prop.label);
      for (std::size_t r = 0; r < prop.arity(); ++r) {
        // A predicate role is one unit per analog, shared by every
        // proposition using that predicate.
        const auto rname = role_unit_name(prop, r);
        UnitIndex role;
        if (auto it = roles.find(rname); it != roles.end()) {
          if (it->second.second != prop.role_semantics[r])
            throw NetworkError("predicate role '" + rname + "' used with different semantics in " +
                               analog->name);
          role = it->second.first;
        } else {
          TokenUnit u;
          u.name = rname;
          u.kind = UnitKind::Predicate;
          u.analog = analog->role;
          u.semantics = sem_ids(prop.role_semantics[r]);
          role = add(std::move(u));
          roles.emplace(rname, std::make_pair(role, prop.role_semantics[r]));
        }

        UnitIndex filler;
        if (auto it = objects.find(prop.args[r]); it != objects.end())
          filler = it->second;
        else if (auto jt = props.find(prop.args[r]); jt != props.end())
          filler = jt->second;
        else
          throw NetworkError("unresolved filler '" + prop.args[r] + "' in '" + prop.label + "'");

        TokenUnit sp;
        sp.name = prop.label + "/" + rname + "+" + prop.args[r];
        sp.kind = UnitKind::SP;
        sp.analog = analog->role;
        sp.role = role;
        sp.filler = filler;
        sp.parent = p;
        const UnitIndex s = add(std::move(sp));
        net.tokens[p].children.push_back(s);
        net.tokens[role].bound_in.push_back(s);
        net.tokens[filler].bound_in.push_back(s);
      }
    }
  }

  net.fan_in.resize(net.tokens.size());
  for (UnitIndex i = 0; i < net.tokens.size(); ++i) net.fan_in[i] = net.tokens[i].semantics.size();
  return net;
}

std::vector<std::string> validate(const Network& net) {
  std::vector<std::string> diags;
  const auto n = net.tokens.size();
  auto in_range = [n](UnitIndex i) { return i < n; };

  std::set<std::pair<std::string, Analog>> seen_tokens;
  for (const auto& t : net.tokens)
    if (!seen_tokens.insert({t.name, t.analog}).second)
      diags.push_back("duplicate token unit '" + t.name + "'");
  std::set<std::string> seen_sems;
  for (const auto& s : net.semantics)
    if (!seen_sems.insert(s).second) diags.push_back("duplicate semantic unit '" + s + "'");

  for (UnitIndex i = 0; i < n; ++i) {
    const auto& t = net.tokens[i];
    for (auto s : t.semantics)
      if (s >= net.semantics.size()) diags.push_back("dangling semantic link on '" + t.name + "'");
    if (!t.semantics.empty() && t.kind != UnitKind::Object && t.kind != UnitKind::Predicate)
      diags.push_back("semantic link on non-object/predicate unit '" + t.name + "'");

    if (t.kind == UnitKind::SP) {
      if (!in_range(t.role) || !in_range(t.filler) || !in_range(t.parent)) {
        diags.push_back("dangling link on SP '" + t.name + "'");
        continue;
      }
      const auto& role = net.tokens[t.role];
      const auto& filler = net.tokens[t.filler];
      const auto& parent = net.tokens[t.parent];
      if (role.kind != UnitKind::Predicate)
        diags.push_back("SP '" + t.name + "' role is not a predicate unit");
      if (filler.kind != UnitKind::Object && filler.kind != UnitKind::Proposition)
        diags.push_back("SP '" + t.name + "' filler is not an object or proposition");
      if (parent.kind != UnitKind::Proposition)
        diags.push_back("SP '" + t.name + "' parent is not a proposition");
      for (const auto* other : {&role, &filler, &parent})
        if (other->analog != t.analog)
          diags.push_back("cross-analog token link on SP '" + t.name + "'");
      const auto owners = std::count_if(net.tokens.begin(), net.tokens.end(), [&](const auto& u) {
        return u.kind == UnitKind::Proposition &&
               std::find(u.children.begin(), u.children.end(), i) != u.children.end();
      });
      if (owners != 1) diags.push_back("SP '" + t.name + "' does not have exactly one parent");
    }
    for (auto c : t.children) {
      if (!in_range(c))
        diags.push_back("dangling child link on '" + t.name + "'");
      else if (net.tokens[c].analog != t.analog)
        diags.push_back("cross-analog token link from '" + t.name + "'");
    }
    for (auto b : t.bound_in) {
      if (!in_range(b))
        diags.push_back("dangling binding link on '" + t.name + "'");
      else if (net.tokens[b].analog != t.analog)
        diags.push_back("cross-analog token link from '" + t.name + "'");
    }
  }

  for (const auto* probe : {&net.probes.affordance, &net.probes.critical,
                            &net.probes.no_affordance, &net.probes.noncritical})
    if (!net.find_semantic(*probe)) diags.push_back("probe semantic missing: '" + *probe + "'");

  if (auto aff = net.find_semantic(net.probes.affordance)) {
    for (const auto& t : net.tokens)
      if (t.analog == Analog::Driver &&
          std::find(t.semantics.begin(), t.semantics.end(), *aff) != t.semantics.end())
        diags.push_back("affordance semantic linked into the driver via '" + t.name + "'");
  }
  return diags;
}

}  // namespace lisa
