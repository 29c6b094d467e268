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

#ifndef AAOG_INFERENCE_H_
#define AAOG_INFERENCE_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aaog/appearance.h"
#include "aaog/grammar.h"
#include "aaog/parse_graph.h"
#include "aaog/relation_models.h"

namespace aaog {

inline constexpr int kDefaultBeamWidth = 100;

struct BeamConfig {
  int beam_width = kDefaultBeamWidth;
  // Order in which parts are added. Empty means DefaultExpansionOrder().
  std::vector<NodeId> expansion_order;
  // Score part-type co-occurrence on phrase-structure edges (the implicit
  // Or-branch choice). When off, parses use no psg edges.
  bool use_syntactic = true;
  // Also run the beam at widths 1, 2, 4, ... below beam_width and keep the
  // best complete parse. A single fixed-width beam can lose the candidate a
  // narrower beam kept; widening makes the result non-decreasing whenever
  // beam_width doubles, at most about twice the work.
  bool widening = true;
};

// Root first; afterwards repeatedly the lowest-id part whose phrase-structure
// parent and dependency parent are both placed. Every part after the root
// therefore has at least one relation to the partial parse.
std::vector<NodeId> DefaultExpansionOrder(const AOGrammar& grammar);

// Throws ValidationError unless `order` is a permutation of all nodes that
// starts at the root and places every psg parent before its children.
void CheckExpansionOrder(const AOGrammar& grammar,
                         const std::vector<NodeId>& order);

// Which appearance term a parse maximizes: a single attribute value imposed on
// every part, or every attribute at each part's own best value.
struct ParseObjective {
  std::optional<AttributeValue> constraint;

  static ParseObjective Constrained(AttrId attr, std::string value) {
    return {AttributeValue{std::move(attr), std::move(value)}};
  }
  static ParseObjective Unconstrained() { return {}; }
};

// A beam candidate: the parts placed so far and its running score.
struct PartialParse {
  std::map<NodeId, PartState> assigned;
  double score = 0.0;
};

namespace internal {
class ScoringPlan;
}  // namespace internal

// Beam search over the proposal lattice. Starts from one candidate per root
// proposal, adds one part per step in expansion order, and keeps the top-K
// candidates by (score desc, proposal-id tuple asc).
class BeamSearch {
 public:
  // Ignores config.widening: always a single beam of config.beam_width.
  // Throws InferenceError when a part has no proposals, ValidationError for a
  // bad config, LookupError for missing scores or models.
  BeamSearch(const AOGrammar& grammar, const RelationModels& models,
             const ProposalSet& set, ParseObjective objective,
             BeamConfig config);
  ~BeamSearch();
  BeamSearch(BeamSearch&&) noexcept;
  BeamSearch& operator=(BeamSearch&&) noexcept;

  bool Done() const;
  // Number of parts placed in every current candidate.
  std::size_t depth() const { return depth_; }
  void Step();
  std::vector<PartialParse> Partials() const;
  // Highest-ranked complete candidate. Requires Done().
  ParseGraph Best() const;
  ParseGraph Run();

 private:
  friend ParseGraph Parse(const AOGrammar&, const RelationModels&,
                          const ProposalSet&, const ParseObjective&,
                          const BeamConfig&);
  BeamSearch(std::shared_ptr<const internal::ScoringPlan> plan,
             int beam_width);

  std::shared_ptr<const internal::ScoringPlan> plan_;
  int beam_width_;
  std::size_t depth_ = 0;
  // Row-major [candidate][step] bucket indices; only the first depth_ columns
  // are meaningful.
  std::vector<int> choices_;
  std::vector<double> scores_;
};

// Beam parse under `objective`, widened per config.widening; ties between
// widths go to the narrower beam.
ParseGraph Parse(const AOGrammar& grammar, const RelationModels& models,
                 const ProposalSet& set, const ParseObjective& objective,
                 const BeamConfig& config);

// Attribute-constrained parse: every part scored with attr=value.
ParseGraph ParseConstrained(const AOGrammar& grammar,
                            const RelationModels& models,
                            const ProposalSet& set, const AttributeValue& pair,
                            const BeamConfig& config);

// Unconstrained parse: each part scored with the sum over all attributes of
// its best value score.
ParseGraph ParseUnconstrained(const AOGrammar& grammar,
                              const RelationModels& models,
                              const ProposalSet& set, const BeamConfig& config);

// Every (attribute, value) pair of the grammar in declaration order.
std::vector<AttributeValue> AllAttributeValues(const AOGrammar& grammar);

struct JointParse {
  ParseGraph best;
  std::size_t best_index = 0;
  // One constrained parse per requested pair, in request order.
  std::vector<std::pair<AttributeValue, ParseGraph>> per_pair;

  std::vector<std::pair<AttributeValue, double>> Scores() const;
};

// Runs ParseConstrained for every pair (concurrently) and returns the
// highest-scoring parse; ties go to the earlier pair.
JointParse SelectFinal(const AOGrammar& grammar, const RelationModels& models,
                       const ProposalSet& set,
                       const std::vector<AttributeValue>& pairs,
                       const BeamConfig& config);

// attr -> value -> S(a_j).
using AttributeScores = std::map<AttrId, std::map<std::string, double>>;

// S(a_j): appearance of a_j summed over the parts of pg_{a_j} whose
// association set contains the attribute.
AttributeScores ComputeAttributeScores(
    const std::vector<std::pair<AttributeValue, ParseGraph>>& per_pair,
    const ProposalSet& set, const AttributeAssociation& assoc);

// Argmax value per attribute; ties go to the earlier domain value.
std::map<AttrId, std::string> ClassifyAttributes(const AttributeScores& scores,
                                                 const AOGrammar& grammar);

inline constexpr double kBruteForceLimit = 1e7;

// Exhaustive argmax under the same objective and summation order as the beam
// (the beam with unbounded width). Throws InferenceError when the number of
// combinations exceeds kBruteForceLimit.
ParseGraph BruteForceParse(const AOGrammar& grammar,
                           const RelationModels& models, const ProposalSet& set,
                           const ParseObjective& objective,
                           const BeamConfig& config = {});

}  // namespace aaog

#endif  // AAOG_INFERENCE_H_
