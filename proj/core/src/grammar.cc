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

#include "aaog/grammar.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace aaog {

double IntersectionOverUnion(const Box& a, const Box& b) {
  const double ix0 = std::max(a.x0, b.x0);
  const double iy0 = std::max(a.y0, b.y0);
  const double ix1 = std::min(a.x0 + a.w, b.x0 + b.w);
  const double iy1 = std::min(a.y0 + a.h, b.y0 + b.h);
  const double inter = std::max(0.0, ix1 - ix0) * std::max(0.0, iy1 - iy0);
  const double uni = a.Area() + b.Area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kAnd:
      return "and";
    case NodeKind::kOr:
      return "or";
    case NodeKind::kTerminal:
      return "terminal";
  }
  return "terminal";
}

NodeKind ParseNodeKind(std::string_view name) {
  if (name == "and") return NodeKind::kAnd;
  if (name == "or") return NodeKind::kOr;
  if (name == "terminal") return NodeKind::kTerminal;
  throw ValidationError("unknown node kind '" + std::string(name) + "'");
}

bool AOGrammar::HasNode(NodeId id) const {
  return id.value >= 0 && id.value < static_cast<int>(nodes.size()) &&
         nodes[id.value].id == id;
}

const GrammarNode& AOGrammar::node(NodeId id) const {
  if (!HasNode(id)) {
    throw LookupError("unknown node id " + std::to_string(id.value));
  }
  return nodes[id.value];
}

NodeId AOGrammar::FindNode(std::string_view name) const {
  for (const auto& n : nodes) {
    if (n.name == name) return n.id;
  }
  throw LookupError("unknown part '" + std::string(name) + "'");
}

const std::string& AOGrammar::NameOf(NodeId id) const { return node(id).name; }

bool AOGrammar::HasAttribute(const AttrId& id) const {
  return std::any_of(attributes.begin(), attributes.end(),
                     [&](const AttributeDef& a) { return a.id == id; });
}

const AttributeDef& AOGrammar::attribute(const AttrId& id) const {
  for (const auto& a : attributes) {
    if (a.id == id) return a;
  }
  throw LookupError("unknown attribute '" + id + "'");
}

std::optional<NodeId> AOGrammar::PsgParent(NodeId id) const {
  for (const auto& e : psg_edges) {
    if (e.child == id) return e.parent;
  }
  return std::nullopt;
}

std::optional<NodeId> AOGrammar::DgParent(NodeId id) const {
  for (const auto& e : dg_edges) {
    if (e.child == id) return e.parent;
  }
  return std::nullopt;
}

std::vector<NodeId> AOGrammar::PsgAncestors(NodeId id) const {
  std::vector<NodeId> out;
  std::set<NodeId> seen{id};
  auto parent = PsgParent(id);
  while (parent && seen.insert(*parent).second) {
    out.push_back(*parent);
    parent = PsgParent(*parent);
  }
  return out;
}

std::vector<NodeId> AOGrammar::TerminalParts() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes) {
    if (n.kind == NodeKind::kTerminal) out.push_back(n.id);
  }
  return out;
}

std::vector<NodeId> AOGrammar::TerminalDescendants(NodeId id) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{id};
  std::set<NodeId> seen;
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second || !HasNode(cur)) continue;
    const auto& n = nodes[cur.value];
    if (n.kind == NodeKind::kTerminal) {
      out.push_back(cur);
      continue;
    }
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
      stack.push_back(*it);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool AOGrammar::IsTerminal(NodeId id) const {
  return node(id).kind == NodeKind::kTerminal;
}

std::vector<AttributeDef> DefaultAttributes() {
  const std::vector<std::string> yes_no = {"no", "yes"};
  return {
      {"gender", "Gender", {"female", "male"}},
      {"long_hair", "Long hair", yes_no},
      {"glasses", "Glasses", yes_no},
      {"hat", "Hat", yes_no},
      {"tshirt", "T-shirt", yes_no},
      {"long_sleeve", "Long sleeve", yes_no},
      {"shorts", "Shorts", yes_no},
      {"jeans", "Jeans", yes_no},
      {"long_pants", "Long pants", yes_no},
  };
}

namespace {

void CheckAttributeDefs(const std::vector<AttributeDef>& defs,
                        std::vector<Violation>& out) {
  std::set<AttrId> ids;
  for (const auto& a : defs) {
    if (a.id.empty()) {
      out.push_back({ViolationKind::kBadAttribute, "attribute with empty id"});
    }
    if (!ids.insert(a.id).second) {
      out.push_back(
          {ViolationKind::kBadAttribute, "duplicate attribute id '" + a.id + "'"});
    }
    if (a.domain.size() < 2) {
      out.push_back({ViolationKind::kBadAttribute,
                     "attribute '" + a.id + "' has fewer than 2 values"});
    }
    std::set<std::string> labels(a.domain.begin(), a.domain.end());
    if (labels.size() != a.domain.size()) {
      out.push_back({ViolationKind::kBadAttribute,
                     "attribute '" + a.id + "' has duplicate value labels"});
    }
  }
}

}  // namespace

AOGrammar BuildDefaultHumanGrammar(const std::vector<AttributeDef>& attr_defs) {
  if (attr_defs.empty()) {
    throw ValidationError("attribute definitions must be non-empty");
  }
  std::vector<Violation> problems;
  CheckAttributeDefs(attr_defs, problems);
  if (!problems.empty()) throw ValidationError(problems.front().message);

  AOGrammar g;
  g.root = NodeId(0);
  g.part_type_count = kDefaultPartTypeCount;
  g.attributes = attr_defs;
  for (int i = 0; i < static_cast<int>(std::size(kDefaultPartNames)); ++i) {
    g.nodes.push_back({NodeId(i), NodeKind::kTerminal,
                       std::string(kDefaultPartNames[i]), {}});
  }
  auto id = [&](std::string_view name) { return g.FindNode(name); };
  auto decompose = [&](std::string_view parent,
                       std::initializer_list<std::string_view> children) {
    GrammarNode& p = g.nodes[id(parent).value];
    p.kind = NodeKind::kAnd;
    for (auto c : children) {
      p.children.push_back(id(c));
      g.psg_edges.push_back({p.id, id(c)});
    }
  };
  decompose("full_body", {"upper_body", "lower_body"});
  decompose("upper_body", {"head", "torso", "l_shoulder", "r_shoulder",
                           "l_upper_arm", "l_lower_arm", "r_upper_arm",
                           "r_lower_arm"});
  decompose("lower_body", {"l_hip", "r_hip", "l_upper_leg", "l_lower_leg",
                           "r_upper_leg", "r_lower_leg"});

  auto articulate = [&](std::string_view parent, std::string_view child) {
    g.dg_edges.push_back({id(parent), id(child)});
  };
  articulate("torso", "head");
  articulate("torso", "l_shoulder");
  articulate("l_shoulder", "l_upper_arm");
  articulate("l_upper_arm", "l_lower_arm");
  articulate("torso", "r_shoulder");
  articulate("r_shoulder", "r_upper_arm");
  articulate("r_upper_arm", "r_lower_arm");
  articulate("torso", "l_hip");
  articulate("l_hip", "l_upper_leg");
  articulate("l_upper_leg", "l_lower_leg");
  articulate("torso", "r_hip");
  articulate("r_hip", "r_upper_leg");
  articulate("r_upper_leg", "r_lower_leg");
  return g;
}

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kBadNodeId:
      return "bad-node-id";
    case ViolationKind::kMissingRoot:
      return "missing-root";
    case ViolationKind::kArity:
      return "arity";
    case ViolationKind::kDanglingEdge:
      return "dangling-edge";
    case ViolationKind::kSelfEdge:
      return "self-edge";
    case ViolationKind::kDuplicateEdge:
      return "duplicate-edge";
    case ViolationKind::kChildrenMismatch:
      return "children-mismatch";
    case ViolationKind::kPsgCycle:
      return "psg-cycle";
    case ViolationKind::kNotTree:
      return "psg-not-tree";
    case ViolationKind::kUnreachable:
      return "unreachable";
    case ViolationKind::kDgNonTerminal:
      return "dg-non-terminal";
    case ViolationKind::kDgCycle:
      return "dg-cycle";
    case ViolationKind::kDgNotTree:
      return "dg-not-tree";
    case ViolationKind::kBadAttribute:
      return "bad-attribute";
    case ViolationKind::kBadPartTypeCount:
      return "bad-part-type-count";
  }
  return "unknown";
}

bool ValidationReport::Contains(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::ToString() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << ViolationKindName(v.kind) << ": " << v.message << "\n";
  }
  return os.str();
}

namespace {

// Returns true when the directed graph over `n` nodes has a cycle.
bool HasCycle(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) adj[e.parent.value].push_back(e.child.value);
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<int> state(n, 0);
  for (int start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < adj[v].size()) {
        const int w = adj[v][next++];
        if (state[w] == 1) return true;
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

std::string EdgeString(const AOGrammar& g, const Edge& e) {
  auto name = [&](NodeId id) {
    return g.HasNode(id) ? g.nodes[id.value].name : std::to_string(id.value);
  };
  return name(e.parent) + "->" + name(e.child);
}

// Keeps the edges whose endpoints both exist and are distinct; reports the
// rest.
std::vector<Edge> CheckEdgeEndpoints(const AOGrammar& g,
                                     const std::vector<Edge>& edges,
                                     std::string_view label,
                                     std::vector<Violation>& out) {
  std::vector<Edge> good;
  std::set<Edge> seen;
  for (const auto& e : edges) {
    if (!g.HasNode(e.parent) || !g.HasNode(e.child)) {
      out.push_back({ViolationKind::kDanglingEdge,
                     std::string(label) + " edge " + EdgeString(g, e) +
                         " references a missing node"});
      continue;
    }
    if (e.parent == e.child) {
      out.push_back({ViolationKind::kSelfEdge, std::string(label) + " edge " +
                                                   EdgeString(g, e) +
                                                   " is a self-edge"});
      continue;
    }
    if (!seen.insert(e).second) {
      out.push_back({ViolationKind::kDuplicateEdge,
                     std::string(label) + " edge " + EdgeString(g, e) +
                         " is listed twice"});
      continue;
    }
    good.push_back(e);
  }
  return good;
}

}  // namespace

ValidationReport Validate(const AOGrammar& g) {
  ValidationReport report;
  auto& out = report.violations;
  const int n = static_cast<int>(g.nodes.size());

  for (int i = 0; i < n; ++i) {
    if (g.nodes[i].id.value != i) {
      out.push_back({ViolationKind::kBadNodeId,
                     "node at position " + std::to_string(i) + " has id " +
                         std::to_string(g.nodes[i].id.value)});
    }
  }
  if (!report.ok()) return report;  // Everything below indexes by id.

  if (!g.HasNode(g.root)) {
    out.push_back({ViolationKind::kMissingRoot, "root node does not exist"});
  }
  if (g.part_type_count < 1) {
    out.push_back(
        {ViolationKind::kBadPartTypeCount, "part_type_count must be positive"});
  }
  CheckAttributeDefs(g.attributes, out);

  // Node arity and children references.
  std::set<Edge> from_children;
  for (const auto& node : g.nodes) {
    const std::size_t k = node.children.size();
    if (node.kind == NodeKind::kTerminal && k != 0) {
      out.push_back({ViolationKind::kArity,
                     "terminal node '" + node.name + "' has children"});
    } else if (node.kind == NodeKind::kOr && k < 2) {
      out.push_back({ViolationKind::kArity,
                     "or-node '" + node.name + "' has fewer than 2 children"});
    } else if (node.kind == NodeKind::kAnd && k < 1) {
      out.push_back(
          {ViolationKind::kArity, "and-node '" + node.name + "' has no children"});
    }
    for (NodeId c : node.children) {
      if (!g.HasNode(c)) {
        out.push_back({ViolationKind::kDanglingEdge,
                       "node '" + node.name + "' lists missing child " +
                           std::to_string(c.value)});
      } else {
        from_children.insert({node.id, c});
      }
    }
  }

  // Phrase-structure edges.
  const auto psg = CheckEdgeEndpoints(g, g.psg_edges, "psg", out);
  if (std::set<Edge>(psg.begin(), psg.end()) != from_children) {
    out.push_back({ViolationKind::kChildrenMismatch,
                   "psg edges disagree with node children lists"});
  }
  if (HasCycle(n, psg)) {
    out.push_back({ViolationKind::kPsgCycle, "psg edges contain a cycle"});
  } else if (g.HasNode(g.root)) {
    std::vector<int> and_parents(n, 0);
    for (const auto& e : psg) {
      if (g.nodes[e.parent.value].kind == NodeKind::kAnd) {
        ++and_parents[e.child.value];
      }
    }
    for (int i = 0; i < n; ++i) {
      if (and_parents[i] > 1) {
        out.push_back({ViolationKind::kNotTree,
                       "node '" + g.nodes[i].name +
                           "' is a constituent of more than one and-node"});
      }
    }
    std::vector<bool> reached(n, false);
    std::vector<int> stack{g.root.value};
    reached[g.root.value] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& e : psg) {
        if (e.parent.value == v && !reached[e.child.value]) {
          reached[e.child.value] = true;
          stack.push_back(e.child.value);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!reached[i]) {
        out.push_back({ViolationKind::kUnreachable,
                       "node '" + g.nodes[i].name + "' is not reachable from root"});
      }
    }
  }

  // Dependency edges: a tree over the terminal parts.
  const auto dg = CheckEdgeEndpoints(g, g.dg_edges, "dg", out);
  for (const auto& e : dg) {
    if (g.nodes[e.parent.value].kind != NodeKind::kTerminal ||
        g.nodes[e.child.value].kind != NodeKind::kTerminal) {
      out.push_back({ViolationKind::kDgNonTerminal,
                     "dg edge " + EdgeString(g, e) + " joins a non-terminal"});
    }
  }
  if (HasCycle(n, dg)) {
    out.push_back({ViolationKind::kDgCycle, "dg edges contain a cycle"});
  }
  const auto terminals = g.TerminalParts();
  std::vector<int> dg_parents(n, 0);
  for (const auto& e : dg) ++dg_parents[e.child.value];
  int roots = 0;
  for (NodeId t : terminals) {
    if (dg_parents[t.value] > 1) {
      out.push_back({ViolationKind::kDgNotTree,
                     "part '" + g.nodes[t.value].name +
                         "' has more than one dependency parent"});
    }
    if (dg_parents[t.value] == 0) ++roots;
  }
  if (!terminals.empty() && dg.size() + 1 != terminals.size()) {
    out.push_back({ViolationKind::kDgNotTree,
                   "dg edges do not form a spanning tree over " +
                       std::to_string(terminals.size()) + " terminal parts (" +
                       std::to_string(dg.size()) + " edges)"});
  } else if (roots != 1 && !terminals.empty()) {
    out.push_back(
        {ViolationKind::kDgNotTree, "dg skeleton does not have a single root"});
  }
  return report;
}

std::optional<Point> PartKeypoint(const AOGrammar& grammar, NodeId part,
                                  const std::map<NodeId, Point>& joints) {
  if (grammar.IsTerminal(part)) {
    auto it = joints.find(part);
    if (it == joints.end()) return std::nullopt;
    return it->second;
  }
  Point sum;
  int count = 0;
  for (NodeId t : grammar.TerminalDescendants(part)) {
    auto it = joints.find(t);
    if (it == joints.end()) continue;
    sum.x += it->second.x;
    sum.y += it->second.y;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return Point{sum.x / count, sum.y / count};
}

}  // namespace aaog
