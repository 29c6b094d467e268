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

#include "aaog/evaluation.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aaog/json_io.h"
#include "synthetic_corpus.h"
#include "test_util.h"

namespace aaog {
namespace {

AOGrammar Human() { return BuildDefaultHumanGrammar(DefaultAttributes()); }

class PcpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    g_ = Human();
    torso_ = g_.FindNode("torso");
    head_ = g_.FindNode("head");
    shoulder_ = g_.FindNode("l_shoulder");
    arm_ = g_.FindNode("l_upper_arm");
    sticks_ = {{torso_, head_, 1}, {torso_, shoulder_, 2}, {shoulder_, arm_, 3}};
    truth_.person_box = {-50, -50, 100, 100};
    truth_.joints[torso_] = {{0, 0}, true};
    truth_.joints[head_] = {{0, -10}, true};
    truth_.joints[shoulder_] = {{10, 0}, true};
    truth_.joints[arm_] = {{10, 20}, true};
    for (const auto& [id, j] : truth_.joints) pred_[id] = j.position;
  }
  AOGrammar g_;
  NodeId torso_, head_, shoulder_, arm_;
  std::vector<Stick> sticks_;
  Annotation truth_;
  std::map<NodeId, Point> pred_;
};

TEST_F(PcpTest, IdenticalPredictionIsPerfect) {
  const auto r = StrictPcp(pred_, truth_, sticks_);
  EXPECT_EQ(r.mean, 1.0);
  EXPECT_EQ(r.evaluated, 3);
}

TEST_F(PcpTest, DisplacedEndpointFailsItsStick) {
  pred_[arm_].x += 0.6 * 20.0;
  const auto r = StrictPcp(pred_, truth_, sticks_, 0.5);
  EXPECT_EQ(r.per_stick[0], std::optional<bool>(true));
  EXPECT_EQ(r.per_stick[1], std::optional<bool>(true));
  EXPECT_EQ(r.per_stick[2], std::optional<bool>(false));
  EXPECT_EQ(r.mean, 2.0 / 3.0);
  EXPECT_NEAR(100.0 * r.mean, 66.67, 0.005);
}

TEST_F(PcpTest, BoundaryCountsAsCorrect) {
  pred_[head_].y += 5.0;  // exactly half of the 10 px stick
  EXPECT_EQ(StrictPcp(pred_, truth_, sticks_).per_stick[0],
            std::optional<bool>(true));
  pred_[head_].y += 1e-9;
  EXPECT_EQ(StrictPcp(pred_, truth_, sticks_).per_stick[0],
            std::optional<bool>(false));
}

TEST_F(PcpTest, InvisibleTruthLeavesDenominator) {
  truth_.joints[head_].visible = false;
  pred_[arm_].x += 50.0;
  const auto r = StrictPcp(pred_, truth_, sticks_);
  EXPECT_FALSE(r.per_stick[0].has_value());
  EXPECT_EQ(r.evaluated, 2);
  EXPECT_EQ(r.mean, 0.5);
}

TEST_F(PcpTest, Errors) {
  Annotation hidden = truth_;
  for (auto& [id, j] : hidden.joints) j.visible = false;
  EXPECT_THROW(StrictPcp(pred_, hidden, sticks_), ValidationError);
  pred_.erase(arm_);
  EXPECT_THROW(StrictPcp(pred_, truth_, sticks_), ValidationError);
}

TEST(Pcp, ScaleEquivariant) {
  const AOGrammar g = Human();
  const auto sticks = DefaultSticks(g);
  ASSERT_EQ(sticks.size(), 13u);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(0.0, 200.0), jitter(-15.0, 15.0);
  for (int trial = 0; trial < 200; ++trial) {
    Annotation truth, scaled_truth;
    truth.person_box = scaled_truth.person_box = {0, 0, 10, 10};
    std::map<NodeId, Point> pred, scaled_pred;
    for (NodeId t : g.TerminalParts()) {
      const Point p{pos(rng), pos(rng)};
      const Point q{p.x + jitter(rng), p.y + jitter(rng)};
      const bool visible = rng() % 8 != 0;
      truth.joints[t] = {p, visible};
      scaled_truth.joints[t] = {{10 * p.x, 10 * p.y}, visible};
      pred[t] = q;
      scaled_pred[t] = {10 * q.x, 10 * q.y};
    }
    try {
      const auto a = StrictPcp(pred, truth, sticks);
      const auto b = StrictPcp(scaled_pred, scaled_truth, sticks);
      EXPECT_EQ(a.per_stick, b.per_stick);
    } catch (const ValidationError&) {
      // Every stick invisible; nothing to compare.
    }
  }
}

TEST(AveragePrecision, Fixtures) {
  const std::vector<double> four = {0.9, 0.8, 0.7, 0.6};
  EXPECT_EQ(AveragePrecision(four, {true, true, false, false}), 1.0);
  EXPECT_DOUBLE_EQ(AveragePrecision(four, {true, false, true, false}), 5.0 / 6.0);
  EXPECT_NEAR(AveragePrecision(four, {true, false, true, false}), 0.8333, 5e-5);
  for (int n : {1, 2, 5, 10}) {
    std::vector<double> scores;
    std::vector<bool> labels;
    for (int i = 0; i < n; ++i) {
      scores.push_back(n - i);
      labels.push_back(i == n - 1);
    }
    EXPECT_DOUBLE_EQ(AveragePrecision(scores, labels), 1.0 / n);
  }
}

TEST(AveragePrecision, TiesFormOneGroup) {
  const std::vector<double> tied = {1.0, 1.0};
  EXPECT_EQ(AveragePrecision(tied, {true, false}), 0.5);
  EXPECT_EQ(AveragePrecision(tied, {false, true}), 0.5);
}

TEST(AveragePrecision, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s;
    std::vector<bool> labels;
    for (int i = 0; i < 30; ++i) {
      s.push_back(z(rng));
      labels.push_back(rng() % 3 == 0);
    }
    labels[0] = true;
    const double base = AveragePrecision(s, labels);
    std::vector<double> t1, t2, t3;
    for (double v : s) {
      t1.push_back(std::exp(v));
      t2.push_back(3.0 * v - 7.0);
      t3.push_back(std::atan(v));
    }
    EXPECT_EQ(AveragePrecision(t1, labels), base);
    EXPECT_EQ(AveragePrecision(t2, labels), base);
    EXPECT_EQ(AveragePrecision(t3, labels), base);
  }
}

TEST(AveragePrecision, Errors) {
  const std::vector<double> s = {0.1, 0.2};
  EXPECT_THROW(AveragePrecision(s, {false, false}), ValidationError);
  EXPECT_THROW(AveragePrecision(s, {true}), ValidationError);
}

TEST(DiagMode, Names) {
  for (DiagMode m : {DiagMode::kJoint, DiagMode::kNoAttribute, DiagMode::kNoPose}) {
    EXPECT_EQ(ParseDiagMode(DiagModeName(m)), m);
  }
  EXPECT_THROW(ParseDiagMode("both"), ValidationError);
}

TEST(Diagnostic, NoiselessSinglePersonIsNearPerfect) {
  const AOGrammar g = Human();
  const auto train = testing::MakeCorpus(g, SceneFamily::kSinglePerson, 40, 31, 0.0);
  const RelationModels m = testing::TrainModels(train, g, 1);
  const auto test = testing::MakeCorpus(g, SceneFamily::kSinglePerson, 20, 77, 0.0);
  const auto cases = testing::DiagnosticCases(test);
  const auto report = RunDiagnostic(cases, g, m, {});
  ASSERT_EQ(report.modes.size(), 3u);
  for (const auto& mr : report.modes) {
    SCOPED_TRACE(DiagModeName(mr.mode));
    EXPECT_EQ(mr.attribute_accuracy, 1.0);
    EXPECT_EQ(mr.mean_ap, 1.0);
    if (mr.mode == DiagMode::kNoPose) {
      // Appearance alone: the truth is the strict argmax of every bucket.
      EXPECT_EQ(mr.pcp, 1.0);
      for (double s : mr.stick_pcp) EXPECT_EQ(s, 1.0);
    } else {
      // The learned pose prior may outvote appearance on an odd pose.
      EXPECT_GE(mr.pcp, 0.98);
    }
  }
}

TEST(Diagnostic, ReportIsReproducible) {
  const AOGrammar g = Human();
  const auto train = testing::MakeCorpus(g, SceneFamily::kTwoPerson, 30, 3, 0.5);
  const RelationModels m = testing::TrainModels(train, g, 1);
  const auto test = testing::MakeCorpus(g, SceneFamily::kTwoPerson, 10, 4, 0.5);
  const auto cases = testing::DiagnosticCases(test);
  const std::string a = ReportToJson(RunDiagnostic(cases, g, m, {}), g);
  const std::string b = ReportToJson(RunDiagnostic(cases, g, m, {}), g);
  EXPECT_EQ(a, b);
}

TEST(Diagnostic, JointPredictionIsTheBestConstrainedParse) {
  const AOGrammar g = Human();
  const auto train = testing::MakeCorpus(g, SceneFamily::kTwoPerson, 30, 3, 0.5);
  const RelationModels m = testing::TrainModels(train, g, 1);
  const auto test = testing::MakeCorpus(g, SceneFamily::kTwoPerson, 3, 9, 0.5);
  for (const auto& set : test.proposals) {
    const auto joint = PredictScene(DiagMode::kJoint, g, m, set, {});
    const auto jp = SelectFinal(g, m, set, AllAttributeValues(g), {});
    EXPECT_EQ(joint.pose, jp.best);
    testing::ExpectAudited(joint.pose, g, m, set);
    const auto none = PredictScene(DiagMode::kNoPose, g, m, set, {});
    testing::ExpectAudited(none.pose, g, m, set);
    const auto free = PredictScene(DiagMode::kNoAttribute, g, m, set, {});
    testing::ExpectAudited(free.pose, g, m, set);
    EXPECT_EQ(joint.attributes.size(), g.attributes.size());
  }
}

TEST(Diagnostic, EmptyInput) {
  const AOGrammar g = Human();
  EXPECT_THROW(RunDiagnostic({}, g, UninformativeModels(g, 50.0), {}),
               ValidationError);
}

}  // namespace
}  // namespace aaog
