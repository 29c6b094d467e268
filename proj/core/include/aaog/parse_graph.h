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

#ifndef AAOG_PARSE_GRAPH_H_
#define AAOG_PARSE_GRAPH_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aaog/grammar.h"
#include "aaog/types.h"

namespace aaog {

class ProposalSet;
struct RelationModels;

// Placement of one selected part.
struct PartState {
  NodeId part;
  double x = 0.0;
  double y = 0.0;
  int part_type = 1;
  ProposalId proposal;

  bool operator==(const PartState&) const = default;
};

// A derivation pg = (V(pg), E(pg), X(pg)).
//
// `attribute_assignment` doubles as the record of which objective produced
// the parse: exactly one entry means the parse was scored under that single
// attribute value on every part; an empty assignment means the unconstrained
// objective (each part scored with its best value of every attribute).
struct ParseGraph {
  // One state per selected part, ordered by part id.
  std::vector<PartState> states;
  std::vector<Edge> used_psg_edges;
  std::vector<Edge> used_dg_edges;
  std::map<AttrId, std::string> attribute_assignment;
  double total_score = 0.0;

  bool operator==(const ParseGraph&) const = default;

  // Throws ValidationError when the assignment has more than one entry.
  std::optional<AttributeValue> Constraint() const;
  const PartState* StateFor(NodeId part) const;
};

// Structural check against the grammar: one state per node, types in range,
// used edges are grammar edges joining selected states, at most one
// attribute assignment whose value is in the domain. Empty when valid.
std::vector<std::string> CheckParseGraph(const ParseGraph& pg,
                                         const AOGrammar& grammar);

// Appearance term of one proposal under an objective: the stored score of
// `constraint` when set, otherwise the sum over every grammar attribute of
// that attribute's best value score. Throws LookupError on missing scores.
double ProposalAppearance(const AOGrammar& grammar, const ProposalSet& set,
                          ProposalId proposal,
                          const std::optional<AttributeValue>& constraint);

// From-scratch total: appearance of every state plus syntactic scores of the
// used psg edges plus kinematic scores of the used dg edges.
double RecomputeScore(const ParseGraph& pg, const AOGrammar& grammar,
                      const RelationModels& models, const ProposalSet& set);

}  // namespace aaog

#endif  // AAOG_PARSE_GRAPH_H_
