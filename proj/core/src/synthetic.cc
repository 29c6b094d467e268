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

#include "aaog/synthetic.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace aaog {
namespace {

struct TemplateJoint {
  std::string_view name;
  // Offset from the torso joint at unit scale, px.
  double x;
  double y;
  // Std-dev of the displacement jitter relative to the kinematic parent.
  double jitter;
};

constexpr TemplateJoint kTemplate[] = {
    {"torso", 0.0, 0.0, 0.0},          {"head", 0.0, -40.0, 5.0},
    {"l_shoulder", -20.0, -20.0, 3.0}, {"r_shoulder", 20.0, -20.0, 3.0},
    {"l_upper_arm", -26.0, 5.0, 9.0},  {"l_lower_arm", -30.0, 30.0, 11.0},
    {"r_upper_arm", 26.0, 5.0, 9.0},   {"r_lower_arm", 30.0, 30.0, 11.0},
    {"l_hip", -12.0, 30.0, 3.0},       {"r_hip", 12.0, 30.0, 3.0},
    {"l_upper_leg", -13.0, 68.0, 7.0}, {"l_lower_leg", -14.0, 106.0, 9.0},
    {"r_upper_leg", 13.0, 68.0, 7.0},  {"r_lower_leg", 14.0, 106.0, 9.0},
};

constexpr double kImageWidth = 420.0;
constexpr double kImageHeight = 280.0;
constexpr double kBoxPadding = 8.0;

const TemplateJoint& TemplateFor(std::string_view name) {
  for (const auto& t : kTemplate) {
    if (t.name == name) return t;
  }
  throw ValidationError("synthetic scenes need the default human parts; no "
                        "template joint for '" + std::string(name) + "'");
}

std::string RandomValue(const AttributeDef& def, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, def.domain.size() - 1);
  return def.domain[pick(rng)];
}

std::string OtherValue(const AttributeDef& def, const std::string& value,
                       std::mt19937_64& rng) {
  std::vector<std::string> others;
  for (const auto& v : def.domain) {
    if (v != value) others.push_back(v);
  }
  std::uniform_int_distribution<std::size_t> pick(0, others.size() - 1);
  return others[pick(rng)];
}

SyntheticPerson DrawPerson(const AOGrammar& grammar, Point torso, double scale,
                           std::mt19937_64& rng) {
  const auto terminals = grammar.TerminalParts();
  std::vector<NodeId> order;
  // Place joints parent-first along the kinematic tree.
  std::set<NodeId> placed;
  while (order.size() < terminals.size()) {
    bool progress = false;
    for (NodeId t : terminals) {
      if (placed.contains(t)) continue;
      auto parent = grammar.DgParent(t);
      if (parent && !placed.contains(*parent)) continue;
      order.push_back(t);
      placed.insert(t);
      progress = true;
    }
    if (!progress) throw ValidationError("dependency edges are not a tree");
  }

  SyntheticPerson person;
  std::normal_distribution<double> unit(0.0, 1.0);
  for (NodeId t : order) {
    const auto& tj = TemplateFor(grammar.NameOf(t));
    auto parent = grammar.DgParent(t);
    if (!parent) {
      person.joints[t] = {torso.x + scale * tj.x, torso.y + scale * tj.y};
      continue;
    }
    const auto& pj = TemplateFor(grammar.NameOf(*parent));
    const Point& pp = person.joints.at(*parent);
    person.joints[t] = {pp.x + scale * (tj.x - pj.x) + tj.jitter * unit(rng),
                        pp.y + scale * (tj.y - pj.y) + tj.jitter * unit(rng)};
  }
  for (auto& [id, p] : person.joints) {
    p.x = std::clamp(p.x, 1.0, kImageWidth - 1.0);
    p.y = std::clamp(p.y, 1.0, kImageHeight - 1.0);
  }
  return person;
}

Box PersonBox(const SyntheticPerson& person) {
  double x0 = kImageWidth, y0 = kImageHeight, x1 = 0.0, y1 = 0.0;
  for (const auto& [id, p] : person.joints) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  return {x0 - kBoxPadding, y0 - kBoxPadding, x1 - x0 + 2 * kBoxPadding,
          y1 - y0 + 2 * kBoxPadding};
}

Box BoxAround(Point center, double w, double h) {
  return {center.x - 0.5 * w, center.y - 0.5 * h, w, h};
}

constexpr double kScaleFactor[] = {0.95, 1.0, 1.05};
constexpr double kAspectFactor[] = {0.95, 1.0, 1.05};

// Parts whose terminal descendants meet `region`.
std::set<NodeId> RegionClosure(const AOGrammar& grammar,
                               const std::vector<NodeId>& region) {
  std::set<NodeId> in_region(region.begin(), region.end());
  std::set<NodeId> out;
  for (const auto& node : grammar.nodes) {
    for (NodeId t : grammar.TerminalDescendants(node.id)) {
      if (in_region.contains(t)) {
        out.insert(node.id);
        break;
      }
    }
  }
  return out;
}

enum class Occlusion { kHead, kArms, kLower };

struct AttributeRegionSpec {
  std::string_view attr;
  Occlusion region;
};

constexpr AttributeRegionSpec kRegions[] = {
    {"long_hair", Occlusion::kHead},   {"glasses", Occlusion::kHead},
    {"hat", Occlusion::kHead},         {"tshirt", Occlusion::kArms},
    {"long_sleeve", Occlusion::kArms}, {"shorts", Occlusion::kLower},
    {"jeans", Occlusion::kLower},      {"long_pants", Occlusion::kLower},
};

std::optional<Occlusion> RegionOf(const AttrId& attr) {
  for (const auto& r : kRegions) {
    if (r.attr == attr) return r.region;
  }
  return std::nullopt;
}

std::vector<std::string_view> OccludedParts(Occlusion o) {
  switch (o) {
    case Occlusion::kHead:
      return {"head"};
    case Occlusion::kArms:
      return {"l_upper_arm", "l_lower_arm", "r_upper_arm", "r_lower_arm"};
    case Occlusion::kLower:
      return {"l_hip", "r_hip", "l_upper_leg", "l_lower_leg", "r_upper_leg",
              "r_lower_leg"};
  }
  return {};
}

}  // namespace

void CheckScene(const SyntheticScene& scene, const AOGrammar& grammar) {
  if (scene.persons.empty()) throw ValidationError("scene has no persons");
  if (!(scene.width > 0.0) || !(scene.height > 0.0)) {
    throw ValidationError("scene image size must be positive");
  }
  const auto terminals = grammar.TerminalParts();
  for (std::size_t i = 0; i < scene.persons.size(); ++i) {
    const auto& person = scene.persons[i];
    const std::string who = "person " + std::to_string(i) + ": ";
    for (NodeId t : terminals) {
      auto it = person.joints.find(t);
      if (it == person.joints.end()) {
        throw ValidationError(who + "missing joint " + grammar.NameOf(t));
      }
      const Point& p = it->second;
      if (!(p.x >= 0.0 && p.x <= scene.width && p.y >= 0.0 &&
            p.y <= scene.height)) {
        throw ValidationError(who + "joint " + grammar.NameOf(t) +
                              " outside the image");
      }
    }
    if (person.joints.size() != terminals.size()) {
      throw ValidationError(who + "joint on a non-atomic part");
    }
    for (const auto& [attr, value] : person.attributes) {
      if (!grammar.HasAttribute(attr)) {
        throw ValidationError(who + "unknown attribute " + attr);
      }
      const auto& domain = grammar.attribute(attr).domain;
      if (std::find(domain.begin(), domain.end(), value) == domain.end()) {
        throw ValidationError(who + "value '" + value + "' not in the domain of " +
                              attr);
      }
    }
  }
}

SceneFamily ParseSceneFamily(std::string_view name) {
  if (name == "single-person") return SceneFamily::kSinglePerson;
  if (name == "two-person") return SceneFamily::kTwoPerson;
  throw ValidationError("unknown scene family '" + std::string(name) + "'");
}

std::string_view SceneFamilyName(SceneFamily family) {
  return family == SceneFamily::kSinglePerson ? "single-person" : "two-person";
}

SyntheticScene GenerateScene(const AOGrammar& grammar, SceneFamily family,
                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> torso_x(130.0, 290.0);
  std::uniform_real_distribution<double> torso_y(75.0, 110.0);
  std::uniform_real_distribution<double> scale(0.9, 1.1);

  SyntheticScene scene;
  scene.width = kImageWidth;
  scene.height = kImageHeight;

  const Point a_torso{torso_x(rng), torso_y(rng)};
  SyntheticPerson a = DrawPerson(grammar, a_torso, scale(rng), rng);
  for (const auto& def : grammar.attributes) {
    a.attributes[def.id] = RandomValue(def, rng);
  }
  scene.persons.push_back(std::move(a));

  if (family == SceneFamily::kTwoPerson) {
    std::uniform_real_distribution<double> offset(28.0, 45.0);
    std::uniform_real_distribution<double> lift(-10.0, 10.0);
    std::bernoulli_distribution left(0.5), copy(0.5);
    const double dx = left(rng) ? -offset(rng) : offset(rng);
    const Point b_torso{a_torso.x + dx, a_torso.y + lift(rng)};
    SyntheticPerson b = DrawPerson(grammar, b_torso, scale(rng), rng);
    const auto& a_attrs = scene.persons[0].attributes;
    for (std::size_t k = 0; k < grammar.attributes.size(); ++k) {
      const auto& def = grammar.attributes[k];
      const auto& av = a_attrs.at(def.id);
      // The first attribute (gender in the default set) always differs.
      b.attributes[def.id] =
          (k == 0 || !copy(rng)) ? OtherValue(def, av, rng) : av;
    }
    scene.persons.push_back(std::move(b));
  }
  return scene;
}

std::vector<SyntheticScene> GenerateSceneFamily(const AOGrammar& grammar,
                                                SceneFamily family, int count,
                                                std::uint64_t seed) {
  if (count < 1) throw ValidationError("scene count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<SyntheticScene> scenes;
  scenes.reserve(count);
  for (int i = 0; i < count; ++i) {
    scenes.push_back(GenerateScene(grammar, family, rng));
  }
  return scenes;
}

std::vector<NodeId> AttributeRegion(const AOGrammar& grammar,
                                    const AttrId& attr) {
  auto region = RegionOf(attr);
  if (!region) return grammar.TerminalParts();
  std::vector<NodeId> out;
  for (auto name : OccludedParts(*region)) out.push_back(grammar.FindNode(name));
  if (*region == Occlusion::kArms) {
    out.push_back(grammar.FindNode("torso"));
    out.push_back(grammar.FindNode("l_shoulder"));
    out.push_back(grammar.FindNode("r_shoulder"));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProposalSet SynthScores(const SyntheticScene& scene, const AOGrammar& grammar,
                        const SynthOptions& options) {
  CheckScene(scene, grammar);
  if (!(options.noise_sigma >= 0.0) || !(options.part_jitter >= 0.0) ||
      !(options.distractor_jitter >= 0.0) ||
      options.clutter_per_part < 0) {
    throw ValidationError("noise, jitter and clutter count must be >= 0");
  }
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  auto noise = [&] {
    return options.noise_sigma > 0.0 ? options.noise_sigma * unit(rng) : 0.0;
  };

  std::map<AttrId, std::set<NodeId>> regions;
  for (const auto& def : grammar.attributes) {
    regions[def.id] = RegionClosure(grammar, AttributeRegion(grammar, def.id));
  }

  struct PersonContext {
    std::map<NodeId, Point> keypoints;
    Box box;
    int scale_index = 1;
    std::map<NodeId, int> aspect_index;
    std::map<NodeId, double> level;
  };
  std::vector<PersonContext> contexts;
  std::uniform_int_distribution<int> three(0, 2);
  std::bernoulli_distribution follow_style(0.7);
  for (std::size_t k = 0; k < scene.persons.size(); ++k) {
    const auto& person = scene.persons[k];
    PersonContext ctx;
    ctx.box = PersonBox(person);
    ctx.scale_index = ctx.box.h < 140.0 ? 0 : (ctx.box.h < 160.0 ? 1 : 2);
    const int style = three(rng);
    for (const auto& node : grammar.nodes) {
      ctx.keypoints[node.id] = *PartKeypoint(grammar, node.id, person.joints);
      ctx.aspect_index[node.id] = follow_style(rng) ? style : three(rng);
      const double jitter =
          k == 0 ? options.part_jitter : options.distractor_jitter;
      ctx.level[node.id] = -1.0 - static_cast<double>(k) * options.salience_gap +
                           jitter * unit(rng);
    }
    contexts.push_back(std::move(ctx));
  }

  const Box& ref = contexts[0].box;
  std::uniform_real_distribution<double> ux(1.0, scene.width - 1.0);
  std::uniform_real_distribution<double> uy(1.0, scene.height - 1.0);
  std::uniform_int_distribution<int> any_type(1, grammar.part_type_count);

  ProposalSet set;
  int next_id = 0;
  for (const auto& node : grammar.nodes) {
    for (std::size_t k = 0; k < scene.persons.size(); ++k) {
      const auto& ctx = contexts[k];
      const auto& person = scene.persons[k];
      const int si = ctx.scale_index;
      const int ai = ctx.aspect_index.at(node.id);
      Proposal p;
      p.id = ProposalId(next_id++);
      p.part = node.id;
      p.x = ctx.keypoints.at(node.id).x;
      p.y = ctx.keypoints.at(node.id).y;
      p.part_type =
          std::min(3 * si + ai + 1, grammar.part_type_count);
      p.box = BoxAround({p.x, p.y}, ctx.box.w * kAspectFactor[ai],
                        ctx.box.h * kScaleFactor[si] / kAspectFactor[ai]);
      AttributeScoreMap scores;
      for (const auto& def : grammar.attributes) {
        const double margin = regions.at(def.id).contains(node.id)
                                  ? options.region_margin
                                  : options.off_region_margin;
        const auto truth = person.attributes.find(def.id);
        for (const auto& value : def.domain) {
          const bool own =
              truth != person.attributes.end() && truth->second == value;
          scores[def.id][value] =
              ctx.level.at(node.id) + (own ? margin : 0.0) + noise();
        }
      }
      set.Add(grammar, std::move(p), scores);
    }
    for (int c = 0; c < options.clutter_per_part; ++c) {
      Proposal p;
      p.id = ProposalId(next_id++);
      p.part = node.id;
      p.x = ux(rng);
      p.y = uy(rng);
      p.part_type = any_type(rng);
      p.box = BoxAround({p.x, p.y}, ref.w, ref.h);
      const double level =
          -1.0 - options.clutter_gap + options.part_jitter * unit(rng);
      AttributeScoreMap scores;
      for (const auto& def : grammar.attributes) {
        const std::string favored = RandomValue(def, rng);
        for (const auto& value : def.domain) {
          scores[def.id][value] =
              level + (value == favored ? options.off_region_margin : 0.0) +
              noise();
        }
      }
      set.Add(grammar, std::move(p), scores);
    }
  }
  return set;
}

int SyntheticOwner(ProposalId id, const SyntheticScene& scene,
                   const SynthOptions& options) {
  const int block =
      static_cast<int>(scene.persons.size()) + options.clutter_per_part;
  const int slot = id.value % block;
  return slot < static_cast<int>(scene.persons.size()) ? slot : -1;
}

Annotation ExactAnnotation(const SyntheticScene& scene, std::size_t index,
                           const AOGrammar& grammar, std::string image) {
  CheckScene(scene, grammar);
  const auto& person = scene.persons.at(index);
  Annotation ann;
  ann.image = std::move(image);
  for (const auto& [id, p] : person.joints) ann.joints[id] = {p, true};
  ann.person_box = PersonBox(person);
  for (const auto& def : grammar.attributes) {
    auto it = person.attributes.find(def.id);
    ann.attributes[def.id] =
        it == person.attributes.end() ? std::nullopt
                                      : std::optional<std::string>(it->second);
  }
  return ann;
}

Annotation OccludedAnnotation(const SyntheticScene& scene, std::size_t index,
                              const AOGrammar& grammar, std::string image,
                              std::mt19937_64& rng) {
  Annotation ann = ExactAnnotation(scene, index, grammar, std::move(image));
  std::bernoulli_distribution head(0.15), arms(0.2), lower(0.3);
  std::set<Occlusion> hidden;
  if (head(rng)) hidden.insert(Occlusion::kHead);
  if (arms(rng)) hidden.insert(Occlusion::kArms);
  if (lower(rng)) hidden.insert(Occlusion::kLower);
  for (Occlusion o : hidden) {
    for (auto name : OccludedParts(o)) {
      ann.joints.at(grammar.FindNode(name)).visible = false;
    }
  }

  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& def : grammar.attributes) {
    double p_unknown = 0.05;
    auto region = RegionOf(def.id);
    if (region && hidden.contains(*region)) {
      p_unknown = *region == Occlusion::kArms ? 0.85 : 0.9;
    } else if (!region && hidden.contains(Occlusion::kHead)) {
      // Gender and other whole-body attributes get hard to tell without
      // the face.
      p_unknown = 0.6;
    }
    if (u(rng) < p_unknown) ann.attributes[def.id] = std::nullopt;
  }
  return ann;
}

}  // namespace aaog
