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

#ifndef AAOG_GRAMMAR_H_
#define AAOG_GRAMMAR_H_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aaog/types.h"

namespace aaog {

enum class NodeKind { kAnd, kOr, kTerminal };

std::string_view NodeKindName(NodeKind kind);
NodeKind ParseNodeKind(std::string_view name);

struct GrammarNode {
  NodeId id;
  NodeKind kind = NodeKind::kTerminal;
  std::string name;
  // Canonical expansion order for And-nodes.
  std::vector<NodeId> children;
};

// A categorical attribute and its semantic domain, e.g. gender -> {female,
// male}. Domain order is significant: it is the tie-break order everywhere a
// value is chosen.
struct AttributeDef {
  AttrId id;
  std::string name;
  std::vector<std::string> domain;
};

// Directed edge. For phrase-structure edges `parent` is the composite part;
// for dependency edges it is the kinematic parent.
struct Edge {
  NodeId parent;
  NodeId child;

  auto operator<=>(const Edge&) const = default;
};

// The attributed And-Or graph: root symbol, nodes, phrase-structure and
// dependency edges, and the attribute set. Node ids are dense: nodes[i].id
// must equal i. The probability models live in RelationModels and the
// appearance provider.
struct AOGrammar {
  NodeId root;
  std::vector<GrammarNode> nodes;
  std::vector<Edge> psg_edges;
  std::vector<Edge> dg_edges;
  std::vector<AttributeDef> attributes;
  int part_type_count = 9;

  bool HasNode(NodeId id) const;
  // Throws LookupError.
  const GrammarNode& node(NodeId id) const;
  NodeId FindNode(std::string_view name) const;
  const std::string& NameOf(NodeId id) const;

  bool HasAttribute(const AttrId& id) const;
  const AttributeDef& attribute(const AttrId& id) const;

  std::optional<NodeId> PsgParent(NodeId id) const;
  std::optional<NodeId> DgParent(NodeId id) const;
  // Nearest first.
  std::vector<NodeId> PsgAncestors(NodeId id) const;
  // Terminal parts in id order.
  std::vector<NodeId> TerminalParts() const;
  std::vector<NodeId> TerminalDescendants(NodeId id) const;
  bool IsTerminal(NodeId id) const;
};

// Attribute set of the Attributes of People benchmark: nine
// binary attributes.
std::vector<AttributeDef> DefaultAttributes();

// Part names of the default human grammar in node-id order.
inline constexpr std::string_view kDefaultPartNames[] = {
    "full_body",   "upper_body",  "lower_body",  "head",        "torso",
    "l_shoulder",  "r_shoulder",  "l_upper_arm", "l_lower_arm", "r_upper_arm",
    "r_lower_arm", "l_hip",       "r_hip",       "l_upper_leg", "l_lower_leg",
    "r_upper_leg", "r_lower_leg"};

inline constexpr int kDefaultPartTypeCount = 9;

// full body -> {upper body, lower body}; upper body -> head, torso, shoulders,
// arms; lower body -> hips, legs. Kinematic tree rooted at the torso.
// Throws ValidationError for empty, duplicated or malformed attribute defs.
AOGrammar BuildDefaultHumanGrammar(const std::vector<AttributeDef>& attr_defs);

enum class ViolationKind {
  kBadNodeId,
  kMissingRoot,
  kArity,
  kDanglingEdge,
  kSelfEdge,
  kDuplicateEdge,
  kChildrenMismatch,
  kPsgCycle,
  kNotTree,
  kUnreachable,
  kDgNonTerminal,
  kDgCycle,
  kDgNotTree,
  kBadAttribute,
  kBadPartTypeCount,
};

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Contains(ViolationKind kind) const;
  std::string ToString() const;
};

ValidationReport Validate(const AOGrammar& grammar);

// Keypoint of a part from atomic joint positions: the joint itself for a
// terminal part, the centroid of the terminal descendants present in
// `joints` otherwise. Empty when none of the needed joints is present.
std::optional<Point> PartKeypoint(const AOGrammar& grammar, NodeId part,
                                  const std::map<NodeId, Point>& joints);

}  // namespace aaog

#endif  // AAOG_GRAMMAR_H_
