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

#ifndef AAOG_TESTS_UNIT_TEST_UTIL_H_
#define AAOG_TESTS_UNIT_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "aaog/appearance.h"
#include "aaog/grammar.h"
#include "aaog/parse_graph.h"
#include "aaog/relation_models.h"

namespace aaog::testing {

// Root And-node "root" over terminals t1..tn, dg chain t1 -> t2 -> ... -> tn,
// one attribute per entry of `domains` named a0, a1, ...
inline AOGrammar FlatGrammar(int terminals,
                             const std::vector<std::vector<std::string>>& domains,
                             int part_type_count = 3) {
  AOGrammar g;
  g.part_type_count = part_type_count;
  g.root = NodeId(0);
  g.nodes.push_back({NodeId(0), NodeKind::kAnd, "root", {}});
  for (int i = 1; i <= terminals; ++i) {
    g.nodes.push_back({NodeId(i), NodeKind::kTerminal, "t" + std::to_string(i), {}});
    g.nodes[0].children.emplace_back(i);
    g.psg_edges.push_back({NodeId(0), NodeId(i)});
    if (i > 1) g.dg_edges.push_back({NodeId(i - 1), NodeId(i)});
  }
  for (std::size_t a = 0; a < domains.size(); ++a) {
    g.attributes.push_back(
        {"a" + std::to_string(a), "attr" + std::to_string(a), domains[a]});
  }
  return g;
}

inline Proposal MakeProposal(int id, NodeId part, double x, double y,
                             int part_type = 1) {
  return {ProposalId(id), part, x, y, part_type, {x - 5.0, y - 5.0, 10.0, 10.0}};
}

// Models that contribute nothing but constants: uniform tables and a
// very broad kinematic Gaussian.
inline RelationModels FlatModels(const AOGrammar& g) {
  return UninformativeModels(g, 1e3);
}

inline void ExpectAudited(const ParseGraph& pg, const AOGrammar& g,
                          const RelationModels& m, const ProposalSet& set) {
  EXPECT_TRUE(CheckParseGraph(pg, g).empty());
  EXPECT_LE(std::abs(RecomputeScore(pg, g, m, set) - pg.total_score), 1e-9);
}

}  // namespace aaog::testing

#endif  // AAOG_TESTS_UNIT_TEST_UTIL_H_
