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

#ifndef AAOG_LEARNING_H_
#define AAOG_LEARNING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aaog/appearance.h"
#include "aaog/grammar.h"
#include "aaog/relation_models.h"

namespace aaog {

struct JointAnnotation {
  Point position;
  bool visible = true;

  bool operator==(const JointAnnotation&) const = default;
};

// Ground truth for one person: the atomic-part joints, the person box and the
// attribute labels (nullopt = annotated unknown).
struct Annotation {
  // Links the record to its proposal file / image.
  std::string image;
  std::map<NodeId, JointAnnotation> joints;
  Box person_box;
  std::map<AttrId, std::optional<std::string>> attributes;

  bool operator==(const Annotation&) const = default;

  // Visible joint positions only.
  std::map<NodeId, Point> VisibleJoints() const;
};

// Throws ValidationError unless at least one joint is visible, the box has
// positive area and all ids are known.
void CheckAnnotation(const Annotation& ann, const AOGrammar& grammar);

enum class ProposalLabel { kNegative, kPart };

struct LabeledProposal {
  Proposal proposal;
  ProposalLabel label = ProposalLabel::kNegative;
  // Set for kPart: the part index I_p and part type t_p.
  NodeId part;
  int part_type = 0;
  // Squared keypoint distance over min(w, h) to the nearest candidate part;
  // infinity for negatives.
  double distance = 0.0;
};

struct LabelingThresholds {
  double negative_iou = 0.5;
  double positive_iou = 0.7;
  double max_distance = 0.5;
};

// Labels proposals against one person: IoU with the person box below
// `negative_iou` is negative; above `positive_iou` with a keypoint distance
// below `max_distance` is a part. A non-terminal part is a candidate only when
// the proposal box contains all its visible joints. Everything else is
// dropped. Output follows input order.
std::vector<LabeledProposal> LabelProposals(
    const Annotation& ann, std::span<const Proposal> proposals,
    const AOGrammar& grammar, const LabelingThresholds& thresholds = {});

// Part type of the closest positive per part.
using PartTypeSample = std::map<NodeId, int>;
PartTypeSample ChoosePartTypes(std::span<const LabeledProposal> labeled);

// Laplace-smoothed normalized co-occurrence histograms, one per psg edge.
// Edges without a single sample fall back to uniform and get a warning.
SyntacticTable FitSyntactic(std::span<const PartTypeSample> samples,
                            const AOGrammar& grammar, double alpha = 1.0,
                            std::vector<std::string>* warnings = nullptr);

struct EmOptions {
  int n_components = 10;
  std::uint64_t seed = 0;
  int max_iter = 200;
  // Stop when the mean log-likelihood improves by less than this.
  double tol = 1e-6;
  // Lower bound on covariance eigenvalues, px^2.
  double covariance_floor = 1e-4;
};

struct MixtureFit {
  std::vector<GaussianComponent> components;
  // Mean per-sample log-likelihood after each M-step.
  std::vector<double> log_likelihood_trace;
  bool converged = false;
  std::vector<std::string> warnings;
};

// EM for a 2-D Gaussian mixture with k-means++ seeding. Uses fewer
// components (with a warning) when there are fewer samples than components.
// Throws DegenerateDataError for fewer than 2 samples.
MixtureFit FitMixture(std::span<const Point> samples, const EmOptions& options);

double MeanLogLikelihood(const std::vector<GaussianComponent>& mixture,
                         std::span<const Point> samples);

// Child-minus-parent joint displacements per dg edge, over annotations where
// both joints are visible.
std::map<Edge, std::vector<Point>> CollectDisplacements(
    std::span<const Annotation> annotations, const AOGrammar& grammar);

KinematicMoG FitKinematic(const std::map<Edge, std::vector<Point>>& samples,
                          const EmOptions& options,
                          std::vector<std::string>* warnings = nullptr);

// Mutual information (nats) of two binary variables from paired samples.
// Throws std::invalid_argument on length mismatch or empty input.
double MutualInformation(const std::vector<bool>& a, const std::vector<bool>& b);

using MiTable = std::map<NodeId, std::map<AttrId, double>>;

// MI between "attribute known" and "joint visible" for every atomic part and
// attribute.
MiTable ComputePartAttributeMi(std::span<const Annotation> annotations,
                               const AOGrammar& grammar);

// Atomic parts whose MI is strictly above the attribute's mean over the
// atomic parts, closed under psg ancestors. Throws LookupError when a part or
// attribute entry is missing.
AttributeAssociation DeriveAssociations(const MiTable& mi,
                                        const AOGrammar& grammar);

struct LearnOptions {
  EmOptions em;
  double syntactic_alpha = 1.0;
  LabelingThresholds labeling;
};

// Full relation learning from annotations and, per annotation image, its
// proposals (missing images contribute no part-type samples).
RelationModels LearnRelationModels(
    std::span<const Annotation> annotations,
    const std::map<std::string, std::vector<Proposal>>& proposals_by_image,
    const AOGrammar& grammar, const LearnOptions& options,
    std::vector<std::string>* warnings = nullptr);

}  // namespace aaog

#endif  // AAOG_LEARNING_H_
