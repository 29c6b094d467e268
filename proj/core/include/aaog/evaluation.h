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

#ifndef AAOG_EVALUATION_H_
#define AAOG_EVALUATION_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aaog/appearance.h"
#include "aaog/grammar.h"
#include "aaog/inference.h"
#include "aaog/learning.h"
#include "aaog/parse_graph.h"
#include "aaog/relation_models.h"
#include "aaog/synthetic.h"

namespace aaog {

// A limb segment between two dg-adjacent atomic parts; index is 1-based.
struct Stick {
  NodeId a;
  NodeId b;
  int index = 0;
};

// One stick per dependency edge, in grammar dg-edge order (13 for the default
// human grammar: torso-head, torso-shoulders, shoulders-elbows, elbows-wrists,
// torso-hips, hips-knees, knees-ankles).
std::vector<Stick> DefaultSticks(const AOGrammar& grammar);

struct PcpResult {
  // nullopt where a ground-truth endpoint is invisible.
  std::vector<std::optional<bool>> per_stick;
  double mean = 0.0;
  int evaluated = 0;
};

// Strict PCP: a stick is correct iff both predicted endpoints lie within
// threshold * (ground-truth stick length) of their ground-truth endpoints.
// Throws ValidationError when no stick is evaluable or a predicted endpoint
// is missing.
PcpResult StrictPcp(const std::map<NodeId, Point>& pred, const Annotation& truth,
                    std::span<const Stick> sticks, double threshold = 0.5);
PcpResult StrictPcp(const ParseGraph& pred, const Annotation& truth,
                    std::span<const Stick> sticks, double threshold = 0.5);

// Area under the all-points interpolated precision-recall curve; tied scores
// enter the curve as one group. Throws ValidationError on a length mismatch
// or when no label is positive.
double AveragePrecision(std::span<const double> scores,
                        const std::vector<bool>& labels);

enum class DiagMode { kJoint, kNoAttribute, kNoPose };

DiagMode ParseDiagMode(std::string_view name);
std::string_view DiagModeName(DiagMode mode);

// Scene truth plus the proposals inference runs on.
struct DiagnosticCase {
  SyntheticScene scene;
  ProposalSet proposals;
};

struct DiagnosticConfig {
  BeamConfig beam;
  double pcp_threshold = 0.5;
  std::vector<DiagMode> modes = {DiagMode::kJoint, DiagMode::kNoAttribute,
                                 DiagMode::kNoPose};
};

struct ModeReport {
  DiagMode mode = DiagMode::kJoint;
  // Fraction of (scene, attribute) predictions equal to the target's value.
  double attribute_accuracy = 0.0;
  // Mean over attributes of the mean one-vs-rest AP over domain values.
  double mean_ap = 0.0;
  std::map<AttrId, double> attribute_ap;
  // Mean over scenes of the per-scene strict PCP.
  double pcp = 0.0;
  // Per-stick fraction correct over scenes where the stick is evaluable.
  std::vector<double> stick_pcp;
};

struct DiagnosticReport {
  int scenes = 0;
  std::vector<ModeReport> modes;
};

// Per-scene pose and attribute predictions for person 0 of each scene.
struct ScenePrediction {
  ParseGraph pose;
  AttributeScores scores;
  std::map<AttrId, std::string> attributes;
};

// joint: winner of the constrained parses over all attribute values, with
// attributes from the per-value constrained parses masked by associations.
// no-attr: the unconstrained parse; attributes from its parts, masked the
// same way. no-pose: every part's best-appearance proposal; each attribute
// value scored by its highest score over all proposals.
ScenePrediction PredictScene(DiagMode mode, const AOGrammar& grammar,
                             const RelationModels& models,
                             const ProposalSet& set,
                             const BeamConfig& config);

// Evaluates person 0 of every case under each configured mode.
DiagnosticReport RunDiagnostic(std::span<const DiagnosticCase> cases,
                               const AOGrammar& grammar,
                               const RelationModels& models,
                               const DiagnosticConfig& config);

}  // namespace aaog

#endif  // AAOG_EVALUATION_H_
