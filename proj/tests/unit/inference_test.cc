// Copyright 2026 The AAOG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aaog/inference.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "aaog/json_io.h"
#include "aaog/synthetic.h"
#include "random_instance.h"
#include "synthetic_corpus.h"
#include "test_util.h"

namespace aaog {
namespace {

using testing::ExpectAudited;
using testing::FlatGrammar;
using testing::FlatModels;
using testing::MakeProposal;

// Every complete assignment, scored from scratch.
double EnumeratedMax(const AOGrammar& g, const RelationModels& m,
                     const ProposalSet& set, const ParseObjective& objective,
                     bool use_syntactic = true) {
  std::vector<const std::vector<Proposal>*> buckets;
  for (const auto& node : g.nodes) buckets.push_back(&set.Bucket(node.id));
  std::vector<std::size_t> digit(buckets.size(), 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    ParseGraph pg;
    for (std::size_t i = 0; i < buckets.size(); ++i) {
      const Proposal& p = (*buckets[i])[digit[i]];
      pg.states.push_back({p.part, p.x, p.y, p.part_type, p.id});
    }
    if (use_syntactic) pg.used_psg_edges = g.psg_edges;
    pg.used_dg_edges = g.dg_edges;
    if (objective.constraint) {
      pg.attribute_assignment[objective.constraint->attr] =
          objective.constraint->value;
    }
    best = std::max(best, RecomputeScore(pg, g, m, set));
    std::size_t k = 0;
    while (k < digit.size() && ++digit[k] == buckets[k]->size()) digit[k++] = 0;
    if (k == digit.size()) break;
  }
  return best;
}

std::vector<ParseObjective> Objectives(const AOGrammar& g) {
  std::vector<ParseObjective> out = {ParseObjective::Unconstrained()};
  for (const auto& av : AllAttributeValues(g)) out.push_back({av});
  return out;
}

BeamConfig Width(int k, bool widening = true) {
  BeamConfig c;
  c.beam_width = k;
  c.widening = widening;
  return c;
}

TEST(BeamSearch, TwoByTwoFullWidthEqualsBruteForce) {
  const AOGrammar g = FlatGrammar(1, {{"x", "y"}});
  RelationModels m = FlatModels(g);
  ProposalSet set;
  set.Add(g, MakeProposal(0, NodeId(0), 0, 0), {{"a0", {{"x", -1.0}, {"y", -2.0}}}});
  set.Add(g, MakeProposal(1, NodeId(0), 5, 0), {{"a0", {{"x", -0.5}, {"y", -4.0}}}});
  set.Add(g, MakeProposal(2, NodeId(1), 0, 9), {{"a0", {{"x", -3.0}, {"y", 0.0}}}});
  set.Add(g, MakeProposal(3, NodeId(1), 1, 1), {{"a0", {{"x", -0.2}, {"y", -0.1}}}});
  for (const auto& obj : Objectives(g)) {
    const ParseGraph beam = Parse(g, m, set, obj, Width(4));
    const ParseGraph brute = BruteForceParse(g, m, set, obj);
    EXPECT_EQ(beam.total_score, brute.total_score);
    EXPECT_EQ(beam, brute);
    EXPECT_NEAR(beam.total_score, EnumeratedMax(g, m, set, obj), 1e-9);
    ExpectAudited(beam, g, m, set);
  }
}

TEST(BeamSearch, RandomInstancesAgainstOracles) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = testing::MakeRandomInstance(seed);
    SCOPED_TRACE(seed);
    for (const auto& obj : Objectives(inst.grammar)) {
      const double oracle = EnumeratedMax(inst.grammar, inst.models, inst.set, obj);
      const ParseGraph brute = BruteForceParse(inst.grammar, inst.models, inst.set, obj);
      EXPECT_NEAR(brute.total_score, oracle, 1e-9);
      ExpectAudited(brute, inst.grammar, inst.models, inst.set);
      double previous = -std::numeric_limits<double>::infinity();
      for (int k : {1, 2, 4, 8, 16, static_cast<int>(inst.combinations)}) {
        const ParseGraph pg = Parse(inst.grammar, inst.models, inst.set, obj, Width(k));
        ExpectAudited(pg, inst.grammar, inst.models, inst.set);
        EXPECT_LE(pg.total_score, brute.total_score);
        EXPECT_GE(pg.total_score, previous) << "K=" << k;
        previous = pg.total_score;
      }
      EXPECT_EQ(previous, brute.total_score);
    }
  }
}

TEST(BeamSearch, WithoutSyntacticScores) {
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    const auto inst = testing::MakeRandomInstance(seed);
    BeamConfig c = Width(static_cast<int>(inst.combinations));
    c.use_syntactic = false;
    const ParseGraph pg = Parse(inst.grammar, inst.models, inst.set,
                                ParseObjective::Unconstrained(), c);
    EXPECT_TRUE(pg.used_psg_edges.empty());
    ExpectAudited(pg, inst.grammar, inst.models, inst.set);
    EXPECT_NEAR(pg.total_score,
                EnumeratedMax(inst.grammar, inst.models, inst.set,
                              ParseObjective::Unconstrained(), false),
                1e-9);
  }
}

TEST(BeamSearch, GreedyIsALowerBound) {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    const auto inst = testing::MakeRandomInstance(seed);
    const auto obj = ParseObjective::Unconstrained();
    const ParseGraph greedy = Parse(inst.grammar, inst.models, inst.set, obj, Width(1));
    EXPECT_LE(greedy.total_score,
              BruteForceParse(inst.grammar, inst.models, inst.set, obj).total_score);
  }
}

TEST(BeamSearch, PartialScoresAreRecomputable) {
  const auto inst = testing::MakeRandomInstance(17, 5, 4);
  const auto& g = inst.grammar;
  BeamSearch beam(g, inst.models, inst.set,
                  ParseObjective::Constrained(g.attributes[0].id,
                                              g.attributes[0].domain[0]),
                  Width(3));
  const AttributeValue pair{g.attributes[0].id, g.attributes[0].domain[0]};
  while (true) {
    for (const auto& partial : beam.Partials()) {
      EXPECT_EQ(partial.assigned.size(), beam.depth());
      double s = 0.0;
      for (const auto& [part, st] : partial.assigned) {
        s += ProposalAppearance(g, inst.set, st.proposal, pair);
      }
      for (const auto& e : g.psg_edges) {
        if (partial.assigned.contains(e.parent) && partial.assigned.contains(e.child)) {
          s += SyntacticScore(inst.models.syntactic, e,
                              partial.assigned.at(e.parent).part_type,
                              partial.assigned.at(e.child).part_type);
        }
      }
      for (const auto& e : g.dg_edges) {
        if (partial.assigned.contains(e.parent) && partial.assigned.contains(e.child)) {
          const auto& p = partial.assigned.at(e.parent);
          const auto& c = partial.assigned.at(e.child);
          s += KinematicScore(inst.models.kinematic, e, c.x - p.x, c.y - p.y);
        }
      }
      EXPECT_NEAR(partial.score, s, 1e-9);
    }
    if (beam.Done()) break;
    beam.Step();
  }
  ExpectAudited(beam.Best(), g, inst.models, inst.set);
}

TEST(BeamSearch, TiesGoToLowestProposalIds) {
  const AOGrammar g = FlatGrammar(2, {{"x", "y"}});
  const RelationModels m = FlatModels(g);
  ProposalSet set;
  int id = 10;
  for (const auto& node : g.nodes) {
    for (int k = 0; k < 3; ++k) {
      set.Add(g, MakeProposal(id--, node.id, 0, 0), {{"a0", {{"x", 0.0}, {"y", 0.0}}}});
    }
  }
  for (int k : {1, 2, 27}) {
    const ParseGraph pg = Parse(g, m, set, ParseObjective::Unconstrained(), Width(k));
    for (const auto& st : pg.states) {
      int lowest = 1 << 30;
      for (const auto& p : set.Bucket(st.part)) lowest = std::min(lowest, p.id.value);
      EXPECT_EQ(st.proposal.value, lowest);
    }
  }
}

TEST(BeamSearch, ConstrainedAssignmentAndDeterminism) {
  const auto inst = testing::MakeRandomInstance(99);
  const auto& g = inst.grammar;
  for (const auto& av : AllAttributeValues(g)) {
    const ParseGraph a = ParseConstrained(g, inst.models, inst.set, av, {});
    const ParseGraph b = ParseConstrained(g, inst.models, inst.set, av, {});
    ASSERT_EQ(a.attribute_assignment.size(), 1u);
    EXPECT_EQ(a.attribute_assignment.at(av.attr), av.value);
    EXPECT_EQ(ParseGraphToJson(a, g), ParseGraphToJson(b, g));
    ExpectAudited(a, g, inst.models, inst.set);
  }
  const ParseGraph u = ParseUnconstrained(g, inst.models, inst.set, {});
  EXPECT_TRUE(u.attribute_assignment.empty());
}

TEST(BeamSearch, Errors) {
  const AOGrammar g = FlatGrammar(2, {{"x", "y"}});
  const RelationModels m = FlatModels(g);
  ProposalSet set;
  set.Add(g, MakeProposal(0, NodeId(0), 0, 0), {{"a0", {{"x", 0.0}, {"y", 0.0}}}});
  set.Add(g, MakeProposal(1, NodeId(1), 0, 0), {{"a0", {{"x", 0.0}, {"y", 0.0}}}});
  try {
    ParseUnconstrained(g, m, set, {});
    FAIL();
  } catch (const InferenceError& e) {
    EXPECT_NE(std::string(e.what()).find("t2"), std::string::npos);
  }
  set.Add(g, MakeProposal(2, NodeId(2), 0, 0), {{"a0", {{"x", 0.0}}}});
  EXPECT_THROW(ParseConstrained(g, m, set, {"a0", "y"}, {}), LookupError);
  EXPECT_THROW(ParseConstrained(g, m, set, {"a0", "x"}, Width(0)), ValidationError);
  BeamConfig bad_order;
  bad_order.expansion_order = {NodeId(1), NodeId(0), NodeId(2)};
  EXPECT_THROW(ParseConstrained(g, m, set, {"a0", "x"}, bad_order), ValidationError);
}

TEST(UnconstrainedParse, SinglePartPicksBestSummedScores) {
  AOGrammar g;
  g.root = NodeId(0);
  g.nodes = {{NodeId(0), NodeKind::kTerminal, "only", {}}};
  g.attributes = {{"a0", "A0", {"x", "y"}}, {"a1", "A1", {"x", "y"}}};
  const RelationModels m = FlatModels(g);
  ProposalSet set;
  set.Add(g, MakeProposal(0, NodeId(0), 0, 0),
          {{"a0", {{"x", 1.0}, {"y", 0.0}}}, {"a1", {{"x", 0.0}, {"y", 0.5}}}});
  set.Add(g, MakeProposal(1, NodeId(0), 0, 0),
          {{"a0", {{"x", 0.0}, {"y", 2.0}}}, {"a1", {{"x", -1.0}, {"y", -1.0}}}});
  set.Add(g, MakeProposal(2, NodeId(0), 0, 0),
          {{"a0", {{"x", 0.2}, {"y", 0.3}}}, {"a1", {{"x", 1.4}, {"y", 0.0}}}});
  const ParseGraph pg = ParseUnconstrained(g, m, set, {});
  ASSERT_EQ(pg.states.size(), 1u);
  EXPECT_EQ(pg.states[0].proposal, ProposalId(2));
  EXPECT_NEAR(pg.total_score, 1.7, 1e-12);
}

TEST(BruteForce, SmallLatticeAndGuard) {
  const AOGrammar g = FlatGrammar(2, {{"x", "y"}});
  RelationModels m = FlatModels(g);
  ProposalSet set;
  int id = 0;
  for (const auto& node : g.nodes) {
    for (int k = 0; k < 4; ++k, ++id) {
      set.Add(g, MakeProposal(id, node.id, 3.0 * id, 7.0 - id),
              {{"a0", {{"x", -0.1 * id}, {"y", 0.05 * id}}}});
    }
  }
  const auto obj = ParseObjective::Unconstrained();
  const ParseGraph pg = BruteForceParse(g, m, set, obj);
  EXPECT_TRUE(std::isfinite(pg.total_score));
  EXPECT_NEAR(pg.total_score, EnumeratedMax(g, m, set, obj), 1e-9);

  const AOGrammar human = BuildDefaultHumanGrammar(DefaultAttributes());
  ProposalSet big;
  id = 0;
  for (const auto& node : human.nodes) {
    for (int k = 0; k < 50; ++k, ++id) {
      AttributeScoreMap flat;
      for (const auto& def : human.attributes) {
        for (const auto& v : def.domain) flat[def.id][v] = 0.0;
      }
      big.Add(human, MakeProposal(id, node.id, k, k), flat);
    }
  }
  EXPECT_THROW(BruteForceParse(human, UninformativeModels(human, 50.0), big, obj),
               InferenceError);
}

// attr a0 on t1..t3; t1 plays the head.
class AttributeScoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    g_ = FlatGrammar(3, {{"x", "y"}});
    const double s[] = {5.0, 2.0, 5.0, 5.0};
    for (int i = 0; i < 4; ++i) {
      set_.Add(g_, MakeProposal(i, NodeId(i), 0, 0),
               {{"a0", {{"x", s[i]}, {"y", -s[i]}}}});
      pg_.states.push_back({NodeId(i), 0, 0, 1, ProposalId(i)});
    }
  }
  std::vector<std::pair<AttributeValue, ParseGraph>> PerPair() {
    std::vector<std::pair<AttributeValue, ParseGraph>> out;
    for (const auto& v : {"x", "y"}) {
      ParseGraph pg = pg_;
      pg.attribute_assignment = {{"a0", v}};
      out.push_back({{"a0", v}, pg});
    }
    return out;
  }
  AOGrammar g_;
  ProposalSet set_;
  ParseGraph pg_;
};

TEST_F(AttributeScoreTest, MaskedToAssociatedParts) {
  AttributeAssociation assoc;
  assoc.sets[NodeId(1)] = {"a0"};
  const auto scores = ComputeAttributeScores(PerPair(), set_, assoc);
  EXPECT_DOUBLE_EQ(scores.at("a0").at("x"), 2.0);
  EXPECT_DOUBLE_EQ(scores.at("a0").at("y"), -2.0);
  EXPECT_EQ(ClassifyAttributes(scores, g_).at("a0"), "x");
}

TEST_F(AttributeScoreTest, EmptyAssociationScoresZero) {
  const auto scores = ComputeAttributeScores(PerPair(), set_, {});
  EXPECT_EQ(scores.at("a0").at("x"), 0.0);
  EXPECT_EQ(scores.at("a0").at("y"), 0.0);
  // Tie goes to the first domain value.
  EXPECT_EQ(ClassifyAttributes(scores, g_).at("a0"), "x");
}

TEST_F(AttributeScoreTest, TwoAssociatedParts) {
  AttributeAssociation assoc;
  assoc.sets[NodeId(1)] = {"a0"};
  assoc.sets[NodeId(2)] = {"a0"};
  const auto scores = ComputeAttributeScores(PerPair(), set_, assoc);
  EXPECT_DOUBLE_EQ(scores.at("a0").at("x"), 2.0 + 5.0);
}

ProposalSet GenderRigged(const AOGrammar& g, double female, double male) {
  ProposalSet set;
  int id = 0;
  for (const auto& node : g.nodes) {
    for (int k = 0; k < 2; ++k, ++id) {
      set.Add(g, MakeProposal(id, node.id, 0, 0),
              {{"gender", {{"female", female - k}, {"male", male - k}}}});
    }
  }
  return set;
}

TEST(SelectFinal, RiggedWinnerAndTieRule) {
  AOGrammar g = FlatGrammar(2, {});
  g.attributes = {{"gender", "Gender", {"female", "male"}}};
  const RelationModels m = FlatModels(g);
  const auto pairs = AllAttributeValues(g);

  JointParse jp = SelectFinal(g, m, GenderRigged(g, 0.0, -3.0), pairs, {});
  EXPECT_EQ(jp.best_index, 0u);
  EXPECT_EQ(jp.best.attribute_assignment.at("gender"), "female");

  jp = SelectFinal(g, m, GenderRigged(g, -3.0, 0.0), pairs, {});
  EXPECT_EQ(jp.best_index, 1u);
  EXPECT_EQ(jp.best.attribute_assignment.at("gender"), "male");

  jp = SelectFinal(g, m, GenderRigged(g, -1.0, -1.0), pairs, {});
  EXPECT_EQ(jp.best_index, 0u);
  EXPECT_EQ(jp.per_pair[0].second.total_score, jp.per_pair[1].second.total_score);
}

class SyntheticSceneTest : public ::testing::Test {
 protected:
  SyntheticSceneTest() : g_(BuildDefaultHumanGrammar(DefaultAttributes())) {}
  AOGrammar g_;
};

TEST_F(SyntheticSceneTest, SelectFinalOverAllPairs) {
  std::mt19937_64 rng(5);
  const auto scene = GenerateScene(g_, SceneFamily::kTwoPerson, rng);
  SynthOptions opts;
  opts.seed = 6;
  opts.noise_sigma = 0.5;
  const ProposalSet set = SynthScores(scene, g_, opts);
  const RelationModels m = UninformativeModels(g_, 60.0);
  const JointParse jp = SelectFinal(g_, m, set, AllAttributeValues(g_), {});
  const auto scores = jp.Scores();
  ASSERT_EQ(scores.size(), 18u);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [pair, s] : scores) best = std::max(best, s);
  EXPECT_EQ(jp.best.total_score, best);
  for (const auto& [pair, pg] : jp.per_pair) ExpectAudited(pg, g_, m, set);
}

// Equal salience: only the gender bonus separates the two people.
TEST_F(SyntheticSceneTest, GenderConstraintSelectsOnePerson) {
  SynthOptions opts;
  opts.salience_gap = 0.0;
  opts.part_jitter = 0.0;
  opts.distractor_jitter = 0.0;
  const RelationModels m = UninformativeModels(g_, 200.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    const auto scene = GenerateScene(g_, SceneFamily::kTwoPerson, rng);
    opts.seed = seed;
    const ProposalSet set = SynthScores(scene, g_, opts);
    const AttributeValue pair{"gender", scene.persons[0].attributes.at("gender")};
    const ParseGraph pg = ParseConstrained(g_, m, set, pair, {});
    ExpectAudited(pg, g_, m, set);
    for (const auto& st : pg.states) {
      EXPECT_EQ(SyntheticOwner(st.proposal, scene, opts), 0) << g_.NameOf(st.part);
    }
    // No single-part swap improves the constrained score.
    for (std::size_t i = 0; i < pg.states.size(); ++i) {
      for (const auto& p : set.Bucket(pg.states[i].part)) {
        ParseGraph alt = pg;
        alt.states[i] = {p.part, p.x, p.y, p.part_type, p.id};
        EXPECT_LE(RecomputeScore(alt, g_, m, set), pg.total_score + 1e-9);
      }
    }
    // The unconstrained optimum dominates every constrained parse rescored
    // under the unconstrained objective.
    const ParseGraph u = ParseUnconstrained(g_, m, set, {});
    for (const auto& av : AllAttributeValues(g_)) {
      ParseGraph c = ParseConstrained(g_, m, set, av, {});
      c.attribute_assignment.clear();
      EXPECT_GE(u.total_score, RecomputeScore(c, g_, m, set) - 1e-9);
    }
  }
}

TEST_F(SyntheticSceneTest, NoiselessSinglePersonAgreesAcrossObjectives) {
  const RelationModels m = UninformativeModels(g_, 200.0);
  for (std::uint64_t seed = 10; seed < 13; ++seed) {
    std::mt19937_64 rng(seed);
    const auto scene = GenerateScene(g_, SceneFamily::kSinglePerson, rng);
    SynthOptions opts;
    opts.seed = seed;
    const ProposalSet set = SynthScores(scene, g_, opts);
    const ParseGraph u = ParseUnconstrained(g_, m, set, {});
    for (const auto& st : u.states) {
      EXPECT_EQ(SyntheticOwner(st.proposal, scene, opts), 0);
    }
    for (const auto& av : AllAttributeValues(g_)) {
      const ParseGraph c = ParseConstrained(g_, m, set, av, {});
      ASSERT_EQ(c.states.size(), u.states.size());
      for (std::size_t i = 0; i < c.states.size(); ++i) {
        EXPECT_EQ(c.states[i].proposal, u.states[i].proposal);
      }
    }
  }
}

// Fraction of parses that take all 17 parts from one person.
TEST_F(SyntheticSceneTest, GlobalConstraintKeepsPartsTogether) {
  const auto train = testing::MakeCorpus(g_, SceneFamily::kTwoPerson, 60, 101, 0.5);
  const RelationModels m = testing::TrainModels(train, g_, 7);
  const auto test = testing::MakeCorpus(g_, SceneFamily::kTwoPerson, 100, 202, 0.5);
  SynthOptions opts;
  opts.noise_sigma = 0.5;
  int together_c = 0, together_u = 0;
  auto one_person = [&](const ParseGraph& pg, std::size_t i) {
    opts.seed = 202 + 1 + i;
    const int owner = SyntheticOwner(pg.states[0].proposal, test.scenes[i], opts);
    if (owner < 0) return false;
    for (const auto& st : pg.states) {
      if (SyntheticOwner(st.proposal, test.scenes[i], opts) != owner) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < test.scenes.size(); ++i) {
    const auto& set = test.proposals[i];
    const AttributeValue pair{"gender",
                              test.scenes[i].persons[0].attributes.at("gender")};
    const ParseGraph c = ParseConstrained(g_, m, set, pair, {});
    const ParseGraph u = ParseUnconstrained(g_, m, set, {});
    ExpectAudited(c, g_, m, set);
    ExpectAudited(u, g_, m, set);
    together_c += one_person(c, i);
    together_u += one_person(u, i);
  }
  EXPECT_GE(together_c, together_u);
  RecordProperty("together_constrained", together_c);
  RecordProperty("together_unconstrained", together_u);
}

}  // namespace
}  // namespace aaog
