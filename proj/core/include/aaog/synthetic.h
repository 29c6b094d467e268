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

#ifndef AAOG_SYNTHETIC_H_
#define AAOG_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "aaog/appearance.h"
#include "aaog/grammar.h"
#include "aaog/learning.h"

namespace aaog {

struct SyntheticPerson {
  // Atomic-part joints.
  std::map<NodeId, Point> joints;
  std::map<AttrId, std::string> attributes;

  bool operator==(const SyntheticPerson&) const = default;
};

// Persons are ordered by salience: persons[0] is the target whose pose and
// attributes are evaluated; later persons are distractors.
struct SyntheticScene {
  std::vector<SyntheticPerson> persons;
  double width = 0.0;
  double height = 0.0;

  bool operator==(const SyntheticScene&) const = default;
};

// Throws ValidationError: no persons, a joint outside the image, a missing
// atomic joint, or an attribute value outside its domain.
void CheckScene(const SyntheticScene& scene, const AOGrammar& grammar);

enum class SceneFamily { kSinglePerson, kTwoPerson };

SceneFamily ParseSceneFamily(std::string_view name);
std::string_view SceneFamilyName(SceneFamily family);

// Draws one scene. Poses are a template skeleton with scale, per-joint
// kinematic jitter and a random placement; in the two-person family the
// distractor stands beside the target, overlapping it, and differs in gender.
// Requires the default human grammar's part names.
SyntheticScene GenerateScene(const AOGrammar& grammar, SceneFamily family,
                             std::mt19937_64& rng);

std::vector<SyntheticScene> GenerateSceneFamily(const AOGrammar& grammar,
                                                SceneFamily family, int count,
                                                std::uint64_t seed);

struct SynthOptions {
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  // Bonus of a person's own attribute value on parts covering the
  // attribute's body region, and on all other parts.
  double region_margin = 1.0;
  double off_region_margin = 0.2;
  // Mean appearance of person k is -1 - k * salience_gap.
  double salience_gap = 2.5;
  // Std-dev of the per-part appearance level of the target and of the
  // distractors. Distractors are weaker on average but locally erratic.
  double part_jitter = 0.5;
  double distractor_jitter = 3.5;
  // Proposals per part at random image locations.
  int clutter_per_part = 2;
  // Clutter appearance level below the target's mean.
  double clutter_gap = 4.0;
};

// Oracle appearance provider. Every person contributes one proposal per part
// at its keypoint (mid-level parts at the centroid of their joints), plus
// `clutter_per_part` random proposals per part. Score of (proposal, a, u) is
// the person's part level, plus the margin when u is the person's value of a,
// plus N(0, noise_sigma^2). Deterministic given options.seed.
ProposalSet SynthScores(const SyntheticScene& scene, const AOGrammar& grammar,
                        const SynthOptions& options);

// Person index that emitted proposal `id` in SynthScores output, or -1 for
// clutter. Proposal ids are laid out part-major: persons first, then clutter.
int SyntheticOwner(ProposalId id, const SyntheticScene& scene,
                   const SynthOptions& options);

// Body region whose appearance carries evidence for an attribute, as atomic
// parts. Unknown attributes map to every atomic part.
std::vector<NodeId> AttributeRegion(const AOGrammar& grammar,
                                    const AttrId& attr);

// Ground truth for person `index` with every joint visible and every
// attribute known.
Annotation ExactAnnotation(const SyntheticScene& scene, std::size_t index,
                           const AOGrammar& grammar, std::string image);

// Training-style annotation: occlusion/truncation events hide body regions
// and make the attributes that live there mostly unknown.
Annotation OccludedAnnotation(const SyntheticScene& scene, std::size_t index,
                              const AOGrammar& grammar, std::string image,
                              std::mt19937_64& rng);

}  // namespace aaog

#endif  // AAOG_SYNTHETIC_H_
