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

#ifndef AAOG_APPEARANCE_H_
#define AAOG_APPEARANCE_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "aaog/grammar.h"
#include "aaog/parse_graph.h"
#include "aaog/relation_models.h"
#include "aaog/types.h"

namespace aaog {

// Candidate placement of one part.
struct Proposal {
  ProposalId id;
  NodeId part;
  double x = 0.0;
  double y = 0.0;
  int part_type = 1;
  Box box;

  bool operator==(const Proposal&) const = default;
};

// attr -> value label -> log-score.
using AttributeScoreMap = std::map<AttrId, std::map<std::string, double>>;

// Combined part-attribute appearance log-scores keyed by
// (proposal, attribute, value). The part-type likelihood of the proposal's
// own type is already folded in by the provider.
class ScoreTable {
 public:
  // Throws ValidationError for non-finite scores.
  void Set(ProposalId proposal, const AttrId& attr, const std::string& value,
           double score);
  // Makes `proposal` known even if it carries no scores.
  void Register(ProposalId proposal);
  // Throws LookupError when the entry is missing.
  double Get(ProposalId proposal, const AttrId& attr,
             const std::string& value) const;
  // Best-scoring value of `attr`, ties to the earlier domain value.
  double BestValueScore(ProposalId proposal, const AttributeDef& attr) const;

  const AttributeScoreMap& ScoresFor(ProposalId proposal) const;
  bool Has(ProposalId proposal) const { return scores_.contains(proposal); }

 private:
  std::unordered_map<ProposalId, AttributeScoreMap> scores_;
};

// O_v for every part plus the shared score table. Immutable once built.
class ProposalSet {
 public:
  // Validates part/type/box, id uniqueness and score finiteness; throws
  // ValidationError.
  void Add(const AOGrammar& grammar, Proposal proposal,
           const AttributeScoreMap& scores);
  // Adds into an explicit bucket; rejects a proposal whose part differs.
  void AddToBucket(const AOGrammar& grammar, NodeId bucket, Proposal proposal,
                   const AttributeScoreMap& scores);

  // Empty span-like vector when the part has no proposals.
  const std::vector<Proposal>& Bucket(NodeId part) const;
  const Proposal& Get(ProposalId id) const;
  bool Contains(ProposalId id) const { return index_.contains(id); }

  const ScoreTable& scores() const { return scores_; }
  const std::map<NodeId, std::vector<Proposal>>& buckets() const {
    return buckets_;
  }
  // Proposals in file order.
  const std::vector<ProposalId>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }

 private:
  std::map<NodeId, std::vector<Proposal>> buckets_;
  std::unordered_map<ProposalId, std::pair<NodeId, std::size_t>> index_;
  std::vector<ProposalId> order_;
  ScoreTable scores_;
};

// JSON-lines, one proposal per line:
// {"id", "part", "x", "y", "part_type", "box": [x0, y0, w, h],
//  "scores": {attr: {value: logscore}}}
// Throws ValidationError with a "line N:" prefix on malformed input.
ProposalSet ReadProposals(std::istream& in, const AOGrammar& grammar);
ProposalSet LoadProposals(const std::filesystem::path& path,
                          const AOGrammar& grammar);
void WriteProposals(const ProposalSet& set, const AOGrammar& grammar,
                    std::ostream& out);

// sum over selected parts v of sum over a in X(v) of S_app(v, a, value(a)),
// with value(a) taken from the parse's attribute assignment; attributes the
// assignment leaves open use their best value.
double AppearanceSum(const ParseGraph& pg, const AOGrammar& grammar,
                     const ProposalSet& set, const AttributeAssociation& assoc);

}  // namespace aaog

#endif  // AAOG_APPEARANCE_H_
