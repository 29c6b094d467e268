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

#include "aaog/appearance.h"

#include <gtest/gtest.h>

#include <sstream>

#include "aaog/parse_graph.h"
#include "test_util.h"

namespace aaog {
namespace {

using testing::FlatGrammar;
using testing::MakeProposal;

AOGrammar Human() { return BuildDefaultHumanGrammar(DefaultAttributes()); }

std::string ProposalLine(int id, std::string_view part, const std::string& score) {
  std::ostringstream s;
  s << R"({"id":)" << id << R"(,"part":")" << part
    << R"(","x":10,"y":20,"part_type":2,"box":[5,15,10,10],)"
    << R"("scores":{"gender":{"female":)" << score << R"(,"male":-1.5}}})";
  return s.str();
}

TEST(ProposalFile, ReadsAllProposals) {
  const AOGrammar g = Human();
  std::ostringstream text;
  int id = 0;
  for (auto name : kDefaultPartNames) {
    for (int k = 0; k < 3; ++k) text << ProposalLine(id++, name, "-0.25") << "\n";
  }
  std::istringstream in(text.str());
  const ProposalSet set = ReadProposals(in, g);
  EXPECT_EQ(set.size(), 51u);
  for (const auto& node : g.nodes) EXPECT_EQ(set.Bucket(node.id).size(), 3u);
  EXPECT_DOUBLE_EQ(set.scores().Get(ProposalId(4), "gender", "female"), -0.25);
}

TEST(ProposalFile, RejectsInfiniteScore) {
  const AOGrammar g = Human();
  for (const char* bad : {R"("inf")", R"("-inf")", R"("nan")"}) {
    std::istringstream in(ProposalLine(0, "head", "-1") + "\n" +
                          ProposalLine(1, "head", bad) + "\n");
    try {
      ReadProposals(in, g);
      FAIL() << "accepted " << bad;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
  }
}

TEST(ProposalFile, RejectsMalformedRecords) {
  const AOGrammar g = Human();
  for (const std::string& line :
       {ProposalLine(0, "tail", "-1"), std::string("{not json"),
        std::string(R"({"id":0,"part":"head"})")}) {
    std::istringstream in(line);
    EXPECT_THROW(ReadProposals(in, g), ValidationError) << line;
  }
  std::istringstream dup(ProposalLine(3, "head", "-1") + "\n" +
                         ProposalLine(3, "torso", "-1"));
  EXPECT_THROW(ReadProposals(dup, g), ValidationError);
}

TEST(ProposalFile, RoundTrip) {
  const AOGrammar g = Human();
  ProposalSet set;
  int id = 0;
  for (const auto& node : g.nodes) {
    for (int k = 0; k < 2; ++k) {
      AttributeScoreMap scores;
      for (const auto& def : g.attributes) {
        for (std::size_t v = 0; v < def.domain.size(); ++v) {
          scores[def.id][def.domain[v]] = -0.1 * id - 1.0 / 3.0 * v;
        }
      }
      Proposal p = MakeProposal(id, node.id, 1.0 / 7.0 * id, 100.0 - id, 1 + id % 9);
      ++id;
      set.Add(g, p, scores);
    }
  }
  std::ostringstream first;
  WriteProposals(set, g, first);
  std::istringstream in(first.str());
  const ProposalSet back = ReadProposals(in, g);
  std::ostringstream second;
  WriteProposals(back, g, second);
  EXPECT_EQ(first.str(), second.str());
  for (ProposalId pid : set.order()) {
    EXPECT_EQ(set.Get(pid), back.Get(pid));
    EXPECT_EQ(set.scores().ScoresFor(pid), back.scores().ScoresFor(pid));
  }
}

TEST(ProposalSet, BucketMismatchAndBadGeometry) {
  const AOGrammar g = FlatGrammar(2, {{"x", "y"}});
  ProposalSet set;
  EXPECT_THROW(set.AddToBucket(g, NodeId(1), MakeProposal(0, NodeId(2), 0, 0), {}),
               ValidationError);
  EXPECT_THROW(set.Add(g, MakeProposal(0, NodeId(1), 0, 0, 4), {}),
               ValidationError);
  Proposal flat = MakeProposal(0, NodeId(1), 0, 0);
  flat.box.w = 0.0;
  EXPECT_THROW(set.Add(g, flat, {}), ValidationError);
  EXPECT_THROW(set.Get(ProposalId(0)), LookupError);
}

TEST(ScoreTable, BestValueTiesToEarlierValue) {
  ScoreTable t;
  t.Set(ProposalId(1), "a", "x", -1.0);
  t.Set(ProposalId(1), "a", "y", -1.0);
  const AttributeDef def{"a", "A", {"x", "y"}};
  EXPECT_DOUBLE_EQ(t.BestValueScore(ProposalId(1), def), -1.0);
  EXPECT_THROW(t.Get(ProposalId(1), "a", "z"), LookupError);
  EXPECT_THROW(t.Get(ProposalId(2), "a", "x"), LookupError);
}

class AppearanceSumTest : public ::testing::Test {
 protected:
  void SetUp() override {
    g_ = FlatGrammar(2, {{"x", "y"}});
    set_.Add(g_, MakeProposal(0, NodeId(0), 0, 0), {{"a0", {{"x", 0.0}, {"y", 0.0}}}});
    set_.Add(g_, MakeProposal(1, NodeId(1), 0, 0), {{"a0", {{"x", 1.5}, {"y", 9.0}}}});
    set_.Add(g_, MakeProposal(2, NodeId(2), 0, 0), {{"a0", {{"x", 2.5}, {"y", 7.0}}}});
    pg_.states = {{NodeId(0), 0, 0, 1, ProposalId(0)},
                  {NodeId(1), 0, 0, 1, ProposalId(1)},
                  {NodeId(2), 0, 0, 1, ProposalId(2)}};
    pg_.attribute_assignment = {{"a0", "x"}};
    assoc_.sets[NodeId(1)] = {"a0"};
    assoc_.sets[NodeId(2)] = {"a0"};
  }
  AOGrammar g_;
  ProposalSet set_;
  ParseGraph pg_;
  AttributeAssociation assoc_;
};

TEST_F(AppearanceSumTest, HandSum) {
  EXPECT_DOUBLE_EQ(AppearanceSum(pg_, g_, set_, assoc_), 1.5 + 2.5);
}

TEST_F(AppearanceSumTest, OpenAttributeUsesBestValue) {
  pg_.attribute_assignment.clear();
  EXPECT_DOUBLE_EQ(AppearanceSum(pg_, g_, set_, assoc_), 9.0 + 7.0);
}

TEST_F(AppearanceSumTest, EmptyAssociationIsZero) {
  EXPECT_DOUBLE_EQ(AppearanceSum(pg_, g_, set_, AttributeAssociation{}), 0.0);
}

TEST_F(AppearanceSumTest, AllZeroScoresIsZero) {
  ProposalSet zeros;
  for (int i = 0; i < 3; ++i) {
    zeros.Add(g_, MakeProposal(i, NodeId(i), 0, 0), {{"a0", {{"x", 0.0}, {"y", 0.0}}}});
  }
  EXPECT_DOUBLE_EQ(AppearanceSum(pg_, g_, zeros, assoc_), 0.0);
}

TEST_F(AppearanceSumTest, LinearInScores) {
  for (double c : {-2.0, 0.5, 3.0}) {
    ProposalSet scaled;
    for (ProposalId id : set_.order()) {
      AttributeScoreMap m = set_.scores().ScoresFor(id);
      for (auto& [attr, values] : m) {
        for (auto& [v, s] : values) s *= c;
      }
      scaled.Add(g_, set_.Get(id), m);
    }
    EXPECT_NEAR(AppearanceSum(pg_, g_, scaled, assoc_),
                c * AppearanceSum(pg_, g_, set_, assoc_), 1e-12);
  }
}

TEST_F(AppearanceSumTest, UnresolvedProposal) {
  pg_.states[1].proposal = ProposalId(77);
  EXPECT_THROW(AppearanceSum(pg_, g_, set_, assoc_), LookupError);
}

}  // namespace
}  // namespace aaog
