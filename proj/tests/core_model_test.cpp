#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "helpers.hpp"
#include "lisa/architecture.hpp"
#include "lisa/mapping.hpp"
#include "lisa/tasks.hpp"

namespace lisa {
namespace {

using testing::tiny_task;

std::map<std::string, int> semantic_multiset(const AnalogSpec& a) {
  std::map<std::string, int> m;
  for (const auto& p : a.propositions)
    for (const auto& role : p.role_semantics)
      for (const auto& s : role) ++m[s];
  return m;
}

const PropositionSpec* find_prop(const AnalogSpec& a, const std::string& label) {
  for (const auto& p : a.propositions)
    if (p.label == label) return &p;
  return nullptr;
}

std::size_t count_kind(const Network& net, UnitKind kind, Analog analog) {
  return net.units_of(kind, analog).size();
}

TEST(ParseTaskSpec, TableOneDocument) {
  const TaskSpec t = parse_task_spec(task_to_json(fixture(Fixture::DBO)));
  EXPECT_EQ(t.driver().propositions.size(), 2u);
  EXPECT_EQ(t.recipient().propositions.size(), 2u);
  EXPECT_EQ(t.probes.affordance, "affordance*");
  EXPECT_EQ(t.probes.critical, "critical*");
  EXPECT_EQ(t.probes.no_affordance, "no-affordance*");
  EXPECT_EQ(t.probes.noncritical, "other*");
}

TEST(ParseTaskSpec, RoundTripsEveryFixture) {
  for (auto f : kAllFixtures) {
    const TaskSpec t = fixture(f);
    EXPECT_EQ(parse_task_spec(task_to_json(t)), t) << fixture_stem(f);
  }
}

TEST(ParseTaskSpec, EmptyAnalogListIsRejected) {
  const std::string doc = R"({"name": "x", "analogs": [],
    "probes": {"affordance": "a", "critical": "b", "noAffordance": "c", "noncritical": "d"}})";
  try {
    parse_task_spec(doc);
    FAIL() << "expected TaskSpecError";
  } catch (const TaskSpecError& e) {
    EXPECT_STREQ(e.what(), "exactly two analogs required");
  }
}

TEST(ParseTaskSpec, ArityMismatchIsRejected) {
  TaskSpec t = tiny_task();
  t.driver().propositions[0].args = {"A", "B"};
  EXPECT_THROW(parse_task_spec(task_to_json(t)), TaskSpecError);
}

TEST(ParseTaskSpec, MalformedDocumentIsRejected) {
  EXPECT_THROW(parse_task_spec("{not json"), TaskSpecError);
  EXPECT_THROW(parse_task_spec("[1, 2]"), TaskSpecError);
}

TEST(ValidateTaskSpec, DuplicateUnitNames) {
  TaskSpec t = tiny_task();
  t.driver().objects.push_back({"A", {"token"}});
  EXPECT_THROW(validate_task_spec(t), TaskSpecError);
}

TEST(ValidateTaskSpec, MissingProbe) {
  TaskSpec t = tiny_task();
  t.probes.noncritical = "nowhere";
  EXPECT_THROW(validate_task_spec(t), TaskSpecError);
}

TEST(ValidateTaskSpec, AffordanceMustStayOutOfPerception) {
  TaskSpec t = tiny_task();
  t.driver().propositions[0].role_semantics[0].push_back("aff");
  EXPECT_THROW(validate_task_spec(t), TaskSpecError);
  t = tiny_task();
  t.driver().objects[0].semantics.push_back("aff");
  EXPECT_THROW(validate_task_spec(t), TaskSpecError);
}

TEST(ValidateTaskSpec, UnresolvedFiller) {
  TaskSpec t = tiny_task();
  t.recipient().propositions[0].args = {"Nobody"};
  EXPECT_THROW(validate_task_spec(t), TaskSpecError);
}

TEST(SemanticPool, FirstMentionOrderWithoutDuplicates) {
  const auto pool = tiny_task().semantic_pool();
  const std::vector<std::string> expected = {"token", "a*", "b*", "s1", "s2", "s3", "t", "d", "aff", "noaff"};
  EXPECT_EQ(pool, expected);
}

TEST(FlattenRelations, TwoPlaceRelationSplitsIntoSinglePlacePredicates) {
  AnalogSpec a;
  a.name = "Perception";
  a.objects = {{"Toy", {"token", "toy"}}, {"Box", {"token", "box"}}};
  a.propositions = {{"smaller-than(Toy,Box)", "smaller-than", {{"S1"}, {"S2"}}, {"Toy", "Box"}}};
  const AnalogSpec f = flatten_relations(a);
  ASSERT_EQ(f.propositions.size(), 2u);
  EXPECT_EQ(f.propositions[0].args, std::vector<std::string>{"Toy"});
  EXPECT_EQ(f.propositions[0].role_semantics, (std::vector<std::vector<std::string>>{{"S1"}}));
  EXPECT_EQ(f.propositions[1].args, std::vector<std::string>{"Box"});
  EXPECT_EQ(f.propositions[1].role_semantics, (std::vector<std::vector<std::string>>{{"S2"}}));
  EXPECT_EQ(f.propositions[0].label, "smaller-than(Toy,Box).1");
  EXPECT_EQ(f.objects, a.objects);
}

TEST(FlattenRelations, SinglePlacePropositionsPassThrough) {
  AnalogSpec a;
  a.objects = {{"Table", {"token", "table"}}};
  a.propositions = {{"large-flat(Table)", "large-flat", {{"size10", "level"}}, {"Table"}}};
  EXPECT_EQ(flatten_relations(a), a);
}

TEST(FlattenRelations, ThreePlaceRelation) {
  AnalogSpec a;
  a.objects = {{"a", {"x"}}, {"b", {"y"}}, {"c", {"z"}}};
  a.propositions = {{"r(a,b,c)", "r", {{"r1", "k"}, {"r2"}, {"r3", "k"}}, {"a", "b", "c"}}};
  const AnalogSpec f = flatten_relations(a);
  ASSERT_EQ(f.propositions.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(f.propositions[i].arity(), 1u);
    EXPECT_EQ(f.propositions[i].args[0], a.propositions[0].args[i]);
    EXPECT_EQ(f.propositions[i].role_semantics[0], a.propositions[0].role_semantics[i]);
  }
  EXPECT_EQ(semantic_multiset(f), semantic_multiset(a));
  EXPECT_EQ(flattened_labels(a, "r(a,b,c)"),
            (std::vector<std::string>{"r(a,b,c).1", "r(a,b,c).2", "r(a,b,c).3"}));
}

TEST(FlattenRelations, PropositionValuedRoleIsRejected) {
  AnalogSpec a;
  a.objects = {{"Mary", {"person"}}, {"x", {"thing"}}};
  a.propositions = {{"p", "red", {{"red"}}, {"x"}},
                    {"knows(Mary,p)", "knows", {{"knower"}, {"known"}}, {"Mary", "p"}}};
  try {
    flatten_relations(a);
    FAIL() << "expected TaskSpecError";
  } catch (const TaskSpecError& e) {
    EXPECT_NE(std::string(e.what()).find("cannot flatten proposition-valued role"), std::string::npos);
  }
}

// Random analogs with arities 1..4 and random semantic lists.
AnalogSpec random_analog(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_objects(1, 4), n_props(1, 5), arity(1, 4), n_sems(1, 4), sem(0, 9);
  AnalogSpec a;
  a.name = "R";
  const int no = n_objects(rng);
  for (int i = 0; i < no; ++i) a.objects.push_back({"o" + std::to_string(i), {"token"}});
  const int np = n_props(rng);
  for (int i = 0; i < np; ++i) {
    PropositionSpec p;
    p.label = "P" + std::to_string(i);
    p.predicate = "pred" + std::to_string(i);
    const int n = arity(rng);
    for (int r = 0; r < n; ++r) {
      std::vector<std::string> sems;
      const int k = n_sems(rng);
      for (int s = 0; s < k; ++s) sems.push_back("f" + std::to_string(sem(rng)));
      p.role_semantics.push_back(sems);
      p.args.push_back(a.objects[static_cast<std::size_t>(r) % a.objects.size()].name);
    }
    a.propositions.push_back(p);
  }
  return a;
}

TEST(FlattenRelations, IdempotentAndSemanticConservingOnRandomAnalogs) {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 500; ++trial) {
    const AnalogSpec a = random_analog(rng);
    const AnalogSpec f = flatten_relations(a);
    EXPECT_EQ(flatten_relations(f), f);
    EXPECT_EQ(semantic_multiset(f), semantic_multiset(a));
    for (const auto& p : f.propositions) EXPECT_EQ(p.arity(), 1u);
  }
}

TEST(FlattenRelations, IdempotentAndSemanticConservingOnFixtures) {
  for (auto fx : kAllFixtures) {
    for (const auto& a : fixture(fx).analogs) {
      const AnalogSpec f = flatten_relations(a);
      EXPECT_EQ(flatten_relations(f), f);
      EXPECT_EQ(semantic_multiset(f), semantic_multiset(a));
    }
  }
}

TEST(FlattenTask, RedirectsEvaluationToCriticalPiece) {
  const TaskSpec t = flatten_task(fixture(Fixture::RORelational));
  ASSERT_TRUE(t.evaluate.has_value());
  EXPECT_EQ(*t.evaluate, "visual-input(Critical,Other).1");
  for (const auto& a : t.analogs)
    for (const auto& p : a.propositions) EXPECT_EQ(p.arity(), 1u);
}

TEST(ResolveForArchitecture, PreservedAnalogKeepsRelations) {
  const TaskSpec t = resolve_for_architecture(fixture(Fixture::ROBalints), ArchConfig::of(ArchKind::DBO));
  const auto* rel = find_prop(t.recipient(), "affordance(Target,Distractor1)");
  ASSERT_NE(rel, nullptr);
  EXPECT_EQ(rel->arity(), 2u);
}

TEST(BuildNetwork, TableOneUnderDBO) {
  const Network net = build_network(fixture(Fixture::DBO), ArchConfig::of(ArchKind::DBO));
  EXPECT_EQ(count_kind(net, UnitKind::Proposition, Analog::Driver), 2u);
  EXPECT_EQ(count_kind(net, UnitKind::Proposition, Analog::Recipient), 2u);
  EXPECT_EQ(count_kind(net, UnitKind::SP, Analog::Driver) + count_kind(net, UnitKind::SP, Analog::Recipient), 4u);
  EXPECT_TRUE(MappingTable(net, 0.9).all_zero());
  EXPECT_TRUE(validate(net).empty());
}

TEST(BuildNetwork, RelationalPerceptionUnderRM) {
  const Network net = build_network(builtin_task({TaskKind::RO, std::nullopt}, ArchConfig::of(ArchKind::RM)),
                                    ArchConfig::of(ArchKind::RM));
  const auto props = net.units_of(UnitKind::Proposition, Analog::Driver);
  ASSERT_EQ(props.size(), 1u);
  EXPECT_EQ(net.tokens[props[0]].children.size(), 2u);
}

TEST(BuildNetwork, RelationalPerceptionFlattenedUnderMO) {
  const Network net = build_network(fixture(Fixture::RORelational), ArchConfig::of(ArchKind::MO));
  const auto props = net.units_of(UnitKind::Proposition, Analog::Driver);
  ASSERT_EQ(props.size(), 2u);
  for (auto p : props) EXPECT_EQ(net.tokens[p].children.size(), 1u);
  const auto* role = &net.tokens[net.tokens[net.tokens[props[0]].children[0]].role];
  EXPECT_EQ(role->semantics.size(), 6u);
}

TEST(BuildNetwork, EveryFixtureUnderEveryArchitectureValidates) {
  for (auto fx : kAllFixtures) {
    for (auto kind : {ArchKind::DBO, ArchKind::RO, ArchKind::MO, ArchKind::RM}) {
      const Network net = build_network(fixture(fx), ArchConfig::of(kind));
      EXPECT_TRUE(validate(net).empty()) << fixture_stem(fx) << " " << to_string(kind);

      std::set<std::pair<std::string, Analog>> tokens;
      for (const auto& t : net.tokens) EXPECT_TRUE(tokens.insert({t.name, t.analog}).second) << t.name;
      std::set<std::string> sems(net.semantics.begin(), net.semantics.end());
      EXPECT_EQ(sems.size(), net.semantics.size());
    }
  }
}

TEST(BuildNetwork, PropositionFillerIsWiredWithoutCycles) {
  TaskSpec t = tiny_task();
  t.driver().objects.push_back({"Mary", {"token", "person"}});
  t.driver().propositions.push_back({"knows(Mary,p(A))", "knows", {{"k1"}, {"k2"}}, {"Mary", "p(A)"}});
  const Network net = build_network(t, ArchConfig::of(ArchKind::RM));
  EXPECT_TRUE(validate(net).empty());
  const auto knows = *net.find_token("knows(Mary,p(A))", Analog::Driver);
  const auto& sp = net.tokens[net.tokens[knows].children[1]];
  EXPECT_EQ(net.tokens[sp.filler].kind, UnitKind::Proposition);
  EXPECT_EQ(net.tokens[sp.filler].name, "p(A)");
}

TEST(BuildNetwork, SelfReferenceIsRejected) {
  TaskSpec t = tiny_task();
  t.driver().propositions.push_back({"loop", "l", {{"x"}}, {"loop"}});
  EXPECT_THROW(build_network(t, ArchConfig::of(ArchKind::RM)), NetworkError);
}

TEST(Validate, SPWithNonTokenFillerIsReported) {
  Network net = build_network(fixture(Fixture::DBO), ArchConfig::of(ArchKind::RM));
  const auto sp = net.units_of(UnitKind::SP, Analog::Driver)[0];
  net.tokens[sp].filler = net.tokens[sp].role;
  EXPECT_EQ(validate(net).size(), 1u);
}

TEST(Validate, AffordanceLinkedIntoPerceptionIsReported) {
  Network net = build_network(fixture(Fixture::DBO), ArchConfig::of(ArchKind::RM));
  const auto pred = net.units_of(UnitKind::Predicate, Analog::Driver)[0];
  net.tokens[pred].semantics.push_back(*net.find_semantic("affordance*"));
  EXPECT_EQ(validate(net).size(), 1u);
}

TEST(ArchConfig, CanonicalConfigsAreConsistent) {
  for (auto kind : {ArchKind::DBO, ArchKind::RO, ArchKind::MO, ArchKind::RM}) {
    const auto a = ArchConfig::of(kind);
    EXPECT_TRUE(is_consistent(a));
    EXPECT_EQ(a.mu > 0.0, kind == ArchKind::MO || kind == ArchKind::RM);
    EXPECT_EQ(a.relations_allowed, kind == ArchKind::RO || kind == ArchKind::RM);
  }
  EXPECT_EQ(ArchConfig::of(ArchKind::MO).mu, 0.9);
  EXPECT_FALSE(is_consistent({ArchKind::DBO, 0.9, false}));
  EXPECT_FALSE(is_consistent({ArchKind::RO, 0.0, false}));
}

TEST(ArchConfig, ParseKinds) {
  EXPECT_EQ(parse_arch_kind("dbo"), ArchKind::DBO);
  EXPECT_EQ(parse_arch_kind("RO"), ArchKind::RO);
  EXPECT_EQ(parse_arch_kind("mo"), ArchKind::MO);
  EXPECT_EQ(parse_arch_kind("rm"), ArchKind::RM);
  EXPECT_EQ(parse_arch_kind("r&m"), ArchKind::RM);
  EXPECT_FALSE(parse_arch_kind("xyz").has_value());
}

}  // namespace
}  // namespace lisa
