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

#include "synthetic_corpus.h"

#include <cstdio>
#include <map>
#include <random>

namespace aaog::testing {

SyntheticCorpus MakeCorpus(const AOGrammar& grammar, SceneFamily family,
                           int count, std::uint64_t seed, double noise) {
  SyntheticCorpus c;
  c.scenes = GenerateSceneFamily(grammar, family, count, seed);
  std::mt19937_64 occlusion_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < count; ++i) {
    SynthOptions opts;
    opts.noise_sigma = noise;
    opts.seed = seed + 1 + static_cast<std::uint64_t>(i);
    c.proposals.push_back(SynthScores(c.scenes[i], grammar, opts));
    char stem[32];
    std::snprintf(stem, sizeof stem, "scene_%04d", i);
    for (std::size_t k = 0; k < c.scenes[i].persons.size(); ++k) {
      c.annotations.push_back(
          OccludedAnnotation(c.scenes[i], k, grammar, stem, occlusion_rng));
    }
  }
  return c;
}

RelationModels TrainModels(const SyntheticCorpus& corpus,
                           const AOGrammar& grammar, std::uint64_t em_seed) {
  std::map<std::string, std::vector<Proposal>> by_image;
  for (std::size_t i = 0; i < corpus.proposals.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "scene_%04zu", i);
    auto& list = by_image[stem];
    const ProposalSet& set = corpus.proposals[i];
    for (ProposalId id : set.order()) list.push_back(set.Get(id));
  }
  LearnOptions opts;
  opts.em.seed = em_seed;
  return LearnRelationModels(corpus.annotations, by_image, grammar, opts);
}

std::vector<DiagnosticCase> DiagnosticCases(const SyntheticCorpus& corpus) {
  std::vector<DiagnosticCase> cases;
  for (std::size_t i = 0; i < corpus.scenes.size(); ++i) {
    cases.push_back({corpus.scenes[i], corpus.proposals[i]});
  }
  return cases;
}

}  // namespace aaog::testing
