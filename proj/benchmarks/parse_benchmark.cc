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

#include <benchmark/benchmark.h>

#include <cstdio>
#include <map>
#include <random>
#include <vector>

#include "aaog/grammar.h"
#include "aaog/inference.h"
#include "aaog/learning.h"
#include "aaog/synthetic.h"

namespace aaog {
namespace {

struct World {
  AOGrammar grammar = BuildDefaultHumanGrammar(DefaultAttributes());
  RelationModels models;
};

// Models trained once on 60 two-person scenes with exact annotations.
const World& TrainedWorld() {
  static const World world = [] {
    World w;
    const auto scenes =
        GenerateSceneFamily(w.grammar, SceneFamily::kTwoPerson, 60, 5);
    std::vector<Annotation> annotations;
    std::map<std::string, std::vector<Proposal>> by_image;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "scene_%04zu", i);
      SynthOptions opts;
      opts.seed = 100 + i;
      const ProposalSet set = SynthScores(scenes[i], w.grammar, opts);
      for (ProposalId id : set.order()) by_image[stem].push_back(set.Get(id));
      for (std::size_t k = 0; k < scenes[i].persons.size(); ++k) {
        annotations.push_back(ExactAnnotation(scenes[i], k, w.grammar, stem));
      }
    }
    LearnOptions lo;
    lo.em.seed = 1;
    w.models = LearnRelationModels(annotations, by_image, w.grammar, lo);
    return w;
  }();
  return world;
}

ProposalSet ClutteredSet(const AOGrammar& g, int clutter) {
  std::mt19937_64 rng(99);
  const auto scene = GenerateScene(g, SceneFamily::kTwoPerson, rng);
  SynthOptions opts;
  opts.seed = 7;
  opts.noise_sigma = 0.5;
  opts.clutter_per_part = clutter;
  return SynthScores(scene, g, opts);
}

// 17 parts with 50 proposals each; argument is the beam width.
void BM_ParseConstrained(benchmark::State& state) {
  const World& w = TrainedWorld();
  const ProposalSet set = ClutteredSet(w.grammar, 48);
  BeamConfig config;
  config.beam_width = static_cast<int>(state.range(0));
  const AttributeValue pair{"gender", "female"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ParseConstrained(w.grammar, w.models, set, pair, config));
  }
}
BENCHMARK(BM_ParseConstrained)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ParseConstrainedNoWidening(benchmark::State& state) {
  const World& w = TrainedWorld();
  const ProposalSet set = ClutteredSet(w.grammar, 48);
  BeamConfig config;
  config.beam_width = static_cast<int>(state.range(0));
  config.widening = false;
  const AttributeValue pair{"gender", "female"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ParseConstrained(w.grammar, w.models, set, pair, config));
  }
}
BENCHMARK(BM_ParseConstrainedNoWidening)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SelectFinal(benchmark::State& state) {
  const World& w = TrainedWorld();
  const ProposalSet set = ClutteredSet(w.grammar, static_cast<int>(state.range(0)));
  BeamConfig config;
  config.beam_width = 100;
  const auto pairs = AllAttributeValues(w.grammar);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SelectFinal(w.grammar, w.models, set, pairs, config));
  }
}
BENCHMARK(BM_SelectFinal)->Arg(2)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_FitMixture(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Point> samples;
  for (int i = 0; i < state.range(0); ++i) {
    const double c = (i % 3) * 10.0;
    samples.push_back({c + n(rng), -c + 2.0 * n(rng)});
  }
  EmOptions opts;
  opts.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(FitMixture(samples, opts));
}
BENCHMARK(BM_FitMixture)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace aaog

BENCHMARK_MAIN();
