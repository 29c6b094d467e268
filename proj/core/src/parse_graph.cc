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

#include "aaog/parse_graph.h"

#include <algorithm>
#include <set>

#include "aaog/appearance.h"
#include "aaog/relation_models.h"

namespace aaog {

std::optional<AttributeValue> ParseGraph::Constraint() const {
  if (attribute_assignment.empty()) return std::nullopt;
  if (attribute_assignment.size() > 1) {
    throw ValidationError("parse graph assigns more than one attribute");
  }
  const auto& [attr, value] = *attribute_assignment.begin();
  return AttributeValue{attr, value};
}

const PartState* ParseGraph::StateFor(NodeId part) const {
  auto it = std::lower_bound(
      states.begin(), states.end(), part,
      [](const PartState& s, NodeId id) { return s.part < id; });
  if (it == states.end() || it->part != part) return nullptr;
  return &*it;
}

std::vector<std::string> CheckParseGraph(const ParseGraph& pg,
                                         const AOGrammar& grammar) {
  std::vector<std::string> problems;
  std::set<NodeId> selected;
  for (std::size_t i = 0; i < pg.states.size(); ++i) {
    const auto& s = pg.states[i];
    if (!grammar.HasNode(s.part)) {
      problems.push_back("state for unknown part " +
                         std::to_string(s.part.value));
      continue;
    }
    if (!selected.insert(s.part).second) {
      problems.push_back("part '" + grammar.NameOf(s.part) +
                         "' selected twice");
    }
    if (i > 0 && !(pg.states[i - 1].part < s.part)) {
      problems.push_back("states are not ordered by part id");
    }
    if (s.part_type < 1 || s.part_type > grammar.part_type_count) {
      problems.push_back("part '" + grammar.NameOf(s.part) +
                         "' has out-of-range type " +
                         std::to_string(s.part_type));
    }
  }
  for (const auto& n : grammar.nodes) {
    if (!selected.contains(n.id)) {
      problems.push_back("part '" + n.name + "' is not selected");
    }
  }
  auto check_edges = [&](const std::vector<Edge>& used,
                         const std::vector<Edge>& allowed,
                         const char* label) {
    for (const auto& e : used) {
      if (std::find(allowed.begin(), allowed.end(), e) == allowed.end()) {
        problems.push_back(std::string(label) + " edge is not in the grammar");
      } else if (!selected.contains(e.parent) || !selected.contains(e.child)) {
        problems.push_back(std::string(label) +
                           " edge joins an unselected part");
      }
    }
  };
  check_edges(pg.used_psg_edges, grammar.psg_edges, "psg");
  check_edges(pg.used_dg_edges, grammar.dg_edges, "dg");
  if (pg.attribute_assignment.size() > 1) {
    problems.push_back("more than one attribute assignment");
  }
  for (const auto& [attr, value] : pg.attribute_assignment) {
    if (!grammar.HasAttribute(attr)) {
      problems.push_back("unknown attribute '" + attr + "'");
      continue;
    }
    const auto& domain = grammar.attribute(attr).domain;
    if (std::find(domain.begin(), domain.end(), value) == domain.end()) {
      problems.push_back("value '" + value + "' not in domain of '" + attr +
                         "'");
    }
  }
  return problems;
}

double ProposalAppearance(const AOGrammar& grammar, const ProposalSet& set,
                          ProposalId proposal,
                          const std::optional<AttributeValue>& constraint) {
  if (constraint) {
    return set.scores().Get(proposal, constraint->attr, constraint->value);
  }
  double sum = 0.0;
  for (const auto& attr : grammar.attributes) {
    sum += set.scores().BestValueScore(proposal, attr);
  }
  return sum;
}

double RecomputeScore(const ParseGraph& pg, const AOGrammar& grammar,
                      const RelationModels& models, const ProposalSet& set) {
  const auto constraint = pg.Constraint();
  auto state_of = [&](NodeId part) -> const PartState& {
    const PartState* s = pg.StateFor(part);
    if (s == nullptr) {
      throw LookupError("parse graph has no state for part '" +
                        grammar.NameOf(part) + "'");
    }
    return *s;
  };

  double appearance = 0.0;
  for (const auto& s : pg.states) {
    if (!set.Contains(s.proposal)) {
      throw LookupError("part '" + grammar.NameOf(s.part) +
                        "' references unknown proposal " +
                        std::to_string(s.proposal.value));
    }
    appearance += ProposalAppearance(grammar, set, s.proposal, constraint);
  }
  double syntactic = 0.0;
  for (const auto& e : pg.used_psg_edges) {
    syntactic += SyntacticScore(models.syntactic, e, state_of(e.parent).part_type,
                                state_of(e.child).part_type);
  }
  double kinematic = 0.0;
  for (const auto& e : pg.used_dg_edges) {
    const auto& p = state_of(e.parent);
    const auto& c = state_of(e.child);
    kinematic += KinematicScore(models.kinematic, e, c.x - p.x, c.y - p.y);
  }
  return appearance + syntactic + kinematic;
}

}  // namespace aaog
