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

#include "aaog/json_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace aaog {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

std::string Dump(const ordered_json& j) { return j.dump(2) + "\n"; }

template <typename Fn>
auto Parsing(std::string_view what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  } catch (const LookupError& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

std::string EdgeKey(const Edge& e, const AOGrammar& grammar) {
  return grammar.NameOf(e.parent) + "->" + grammar.NameOf(e.child);
}

Edge EdgeFromKey(const std::string& key, const AOGrammar& grammar) {
  const auto arrow = key.find("->");
  if (arrow == std::string::npos) {
    throw ValidationError("edge key '" + key + "' is not 'parent->child'");
  }
  return {grammar.FindNode(key.substr(0, arrow)),
          grammar.FindNode(key.substr(arrow + 2))};
}

ordered_json EdgesToJson(const std::vector<Edge>& edges,
                         const AOGrammar& grammar) {
  ordered_json out = ordered_json::array();
  for (const auto& e : edges) {
    out.push_back({grammar.NameOf(e.parent), grammar.NameOf(e.child)});
  }
  return out;
}

std::vector<Edge> EdgesFromJson(const json& j, const AOGrammar& grammar) {
  std::vector<Edge> edges;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) {
      throw ValidationError("edge must be [parent, child]");
    }
    edges.push_back({grammar.FindNode(e[0].get<std::string>()),
                     grammar.FindNode(e[1].get<std::string>())});
  }
  return edges;
}

Point PointFromJson(const json& j) {
  if (!j.is_array() || j.size() < 2) {
    throw ValidationError("point must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

// ---- grammar ---------------------------------------------------------------

std::string GrammarToJson(const AOGrammar& grammar) {
  ordered_json j;
  j["schema_version"] = kGrammarSchemaVersion;
  j["root"] = grammar.root.value;
  ordered_json nodes = ordered_json::array();
  for (const auto& n : grammar.nodes) {
    ordered_json node;
    node["id"] = n.id.value;
    node["kind"] = NodeKindName(n.kind);
    node["name"] = n.name;
    ordered_json children = ordered_json::array();
    for (NodeId c : n.children) children.push_back(c.value);
    node["children"] = std::move(children);
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  auto edges = [](const std::vector<Edge>& es) {
    ordered_json out = ordered_json::array();
    for (const auto& e : es) out.push_back({e.parent.value, e.child.value});
    return out;
  };
  j["psg_edges"] = edges(grammar.psg_edges);
  j["dg_edges"] = edges(grammar.dg_edges);
  ordered_json attrs = ordered_json::array();
  for (const auto& a : grammar.attributes) {
    ordered_json attr;
    attr["id"] = a.id;
    attr["name"] = a.name;
    attr["domain"] = a.domain;
    attrs.push_back(std::move(attr));
  }
  j["attributes"] = std::move(attrs);
  j["part_type_count"] = grammar.part_type_count;
  return Dump(j);
}

AOGrammar GrammarFromJson(std::string_view text) {
  return Parsing("grammar", [&] {
    const json j = json::parse(text);
    AOGrammar g;
    g.root = NodeId(j.at("root").get<int>());
    for (const auto& n : j.at("nodes")) {
      GrammarNode node;
      node.id = NodeId(n.at("id").get<int>());
      node.kind = ParseNodeKind(n.at("kind").get<std::string>());
      node.name = n.at("name").get<std::string>();
      for (const auto& c : n.at("children")) node.children.emplace_back(c.get<int>());
      g.nodes.push_back(std::move(node));
    }
    auto edges = [](const json& es) {
      std::vector<Edge> out;
      for (const auto& e : es) {
        if (!e.is_array() || e.size() != 2) {
          throw ValidationError("edge must be [parent_id, child_id]");
        }
        out.push_back({NodeId(e[0].get<int>()), NodeId(e[1].get<int>())});
      }
      return out;
    };
    g.psg_edges = edges(j.at("psg_edges"));
    g.dg_edges = edges(j.at("dg_edges"));
    for (const auto& a : j.at("attributes")) {
      AttributeDef def;
      def.id = a.at("id").get<std::string>();
      def.name = a.at("name").get<std::string>();
      def.domain = a.at("domain").get<std::vector<std::string>>();
      g.attributes.push_back(std::move(def));
    }
    g.part_type_count = j.at("part_type_count").get<int>();
    return g;
  });
}

// ---- parse graph -----------------------------------------------------------

std::string ParseGraphToJson(const ParseGraph& pg, const AOGrammar& grammar) {
  ordered_json j;
  j["schema_version"] = kParseSchemaVersion;
  ordered_json states = ordered_json::array();
  for (const auto& s : pg.states) {
    ordered_json st;
    st["part"] = grammar.NameOf(s.part);
    st["x"] = s.x;
    st["y"] = s.y;
    st["part_type"] = s.part_type;
    st["proposal"] = s.proposal.value;
    states.push_back(std::move(st));
  }
  j["states"] = std::move(states);
  j["psg_edges"] = EdgesToJson(pg.used_psg_edges, grammar);
  j["dg_edges"] = EdgesToJson(pg.used_dg_edges, grammar);
  ordered_json attrs = ordered_json::object();
  for (const auto& [a, v] : pg.attribute_assignment) attrs[a] = v;
  j["attributes"] = std::move(attrs);
  j["total_score"] = pg.total_score;
  return Dump(j);
}

ParseGraph ParseGraphFromJson(std::string_view text, const AOGrammar& grammar) {
  return Parsing("parse graph", [&] {
    const json j = json::parse(text);
    ParseGraph pg;
    for (const auto& st : j.at("states")) {
      PartState s;
      s.part = grammar.FindNode(st.at("part").get<std::string>());
      s.x = st.at("x").get<double>();
      s.y = st.at("y").get<double>();
      s.part_type = st.at("part_type").get<int>();
      s.proposal = ProposalId(st.at("proposal").get<int>());
      pg.states.push_back(s);
    }
    pg.used_psg_edges = EdgesFromJson(j.at("psg_edges"), grammar);
    pg.used_dg_edges = EdgesFromJson(j.at("dg_edges"), grammar);
    pg.attribute_assignment =
        j.at("attributes").get<std::map<std::string, std::string>>();
    pg.total_score = j.at("total_score").get<double>();
    return pg;
  });
}

// ---- relation models -------------------------------------------------------

std::string ModelsToJson(const RelationModels& models,
                         const AOGrammar& grammar) {
  ordered_json j;
  j["schema_version"] = kModelsSchemaVersion;
  const int types = models.syntactic.type_count();
  j["part_type_count"] = types;
  ordered_json syn = ordered_json::object();
  for (const auto& e : grammar.psg_edges) {
    if (!models.syntactic.Has(e)) continue;
    const auto& flat = models.syntactic.Matrix(e);
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < types; ++r) {
      rows.push_back(std::vector<double>(flat.begin() + r * types,
                                         flat.begin() + (r + 1) * types));
    }
    syn[EdgeKey(e, grammar)] = std::move(rows);
  }
  j["syntactic"] = std::move(syn);
  ordered_json kin = ordered_json::object();
  for (const auto& e : grammar.dg_edges) {
    if (!models.kinematic.Has(e)) continue;
    ordered_json comps = ordered_json::array();
    for (const auto& c : models.kinematic.Mixture(e)) {
      ordered_json comp;
      comp["w"] = c.weight;
      comp["mu"] = {c.mean.x, c.mean.y};
      comp["cov"] = {{c.cov.xx, c.cov.xy}, {c.cov.xy, c.cov.yy}};
      comps.push_back(std::move(comp));
    }
    kin[EdgeKey(e, grammar)] = std::move(comps);
  }
  j["kinematic"] = std::move(kin);
  ordered_json assoc = ordered_json::object();
  ordered_json mi = ordered_json::object();
  for (const auto& n : grammar.nodes) {
    auto it = models.association.sets.find(n.id);
    if (it != models.association.sets.end()) {
      ordered_json attrs = ordered_json::array();
      for (const auto& a : grammar.attributes) {
        if (it->second.contains(a.id)) attrs.push_back(a.id);
      }
      assoc[n.name] = std::move(attrs);
    }
    auto m = models.association.mi.find(n.id);
    if (m != models.association.mi.end()) {
      ordered_json values = ordered_json::object();
      for (const auto& a : grammar.attributes) {
        auto v = m->second.find(a.id);
        if (v != m->second.end()) values[a.id] = v->second;
      }
      mi[n.name] = std::move(values);
    }
  }
  assoc["mi"] = std::move(mi);
  j["association"] = std::move(assoc);
  return Dump(j);
}

RelationModels ModelsFromJson(std::string_view text, const AOGrammar& grammar) {
  return Parsing("models", [&] {
    const json j = json::parse(text);
    RelationModels models;
    models.syntactic = SyntacticTable(j.at("part_type_count").get<int>());
    for (const auto& [key, rows] : j.at("syntactic").items()) {
      std::vector<double> flat;
      for (const auto& row : rows) {
        for (const auto& p : row) flat.push_back(p.get<double>());
      }
      models.syntactic.Set(EdgeFromKey(key, grammar), std::move(flat));
    }
    for (const auto& [key, comps] : j.at("kinematic").items()) {
      std::vector<GaussianComponent> mixture;
      for (const auto& c : comps) {
        GaussianComponent g;
        g.weight = c.at("w").get<double>();
        g.mean = PointFromJson(c.at("mu"));
        const auto cov = c.at("cov").get<std::vector<std::vector<double>>>();
        if (cov.size() != 2 || cov[0].size() != 2 || cov[1].size() != 2) {
          throw ValidationError("cov must be a 2x2 matrix");
        }
        if (cov[0][1] != cov[1][0]) {
          throw ValidationError("cov must be symmetric");
        }
        g.cov = {cov[0][0], cov[0][1], cov[1][1]};
        mixture.push_back(g);
      }
      models.kinematic.Set(EdgeFromKey(key, grammar), std::move(mixture));
    }
    for (const auto& [key, value] : j.at("association").items()) {
      if (key == "mi") {
        for (const auto& [part, values] : value.items()) {
          auto& row = models.association.mi[grammar.FindNode(part)];
          for (const auto& [attr, v] : values.items()) {
            row[attr] = v.get<double>();
          }
        }
        continue;
      }
      auto& set = models.association.sets[grammar.FindNode(key)];
      for (const auto& a : value) set.insert(a.get<std::string>());
    }
    return models;
  });
}

// ---- annotations -----------------------------------------------------------

std::string AnnotationToJson(const Annotation& ann, const AOGrammar& grammar) {
  ordered_json j;
  j["image"] = ann.image;
  ordered_json joints = ordered_json::object();
  for (const auto& [id, jt] : ann.joints) {
    joints[grammar.NameOf(id)] = {jt.position.x, jt.position.y, jt.visible};
  }
  j["joints"] = std::move(joints);
  j["person_box"] = {ann.person_box.x0, ann.person_box.y0, ann.person_box.w,
                     ann.person_box.h};
  ordered_json attrs = ordered_json::object();
  for (const auto& [a, v] : ann.attributes) {
    attrs[a] = v ? ordered_json(*v) : ordered_json(nullptr);
  }
  j["attributes"] = std::move(attrs);
  return j.dump();
}

Annotation AnnotationFromJson(std::string_view text, const AOGrammar& grammar) {
  return Parsing("annotation", [&] {
    const json j = json::parse(text);
    Annotation ann;
    ann.image = j.value("image", std::string());
    for (const auto& [name, v] : j.at("joints").items()) {
      if (!v.is_array() || v.size() != 3) {
        throw ValidationError("joint must be [x, y, visible]");
      }
      ann.joints[grammar.FindNode(name)] = {
          {v[0].get<double>(), v[1].get<double>()}, v[2].get<bool>()};
    }
    const auto& box = j.at("person_box");
    if (!box.is_array() || box.size() != 4) {
      throw ValidationError("person_box must be [x0, y0, w, h]");
    }
    ann.person_box = {box[0].get<double>(), box[1].get<double>(),
                      box[2].get<double>(), box[3].get<double>()};
    for (const auto& [attr, v] : j.at("attributes").items()) {
      ann.attributes[attr] = v.is_null()
                                 ? std::nullopt
                                 : std::optional<std::string>(v.get<std::string>());
    }
    CheckAnnotation(ann, grammar);
    return ann;
  });
}

std::vector<Annotation> ReadAnnotations(std::istream& in,
                                        const AOGrammar& grammar) {
  std::vector<Annotation> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(AnnotationFromJson(line, grammar));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void WriteAnnotations(const std::vector<Annotation>& anns,
                      const AOGrammar& grammar, std::ostream& out) {
  for (const auto& a : anns) out << AnnotationToJson(a, grammar) << "\n";
}

// ---- scenes ----------------------------------------------------------------

std::string SceneToJson(const SyntheticScene& scene, const AOGrammar& grammar) {
  ordered_json j;
  j["schema_version"] = kSceneSchemaVersion;
  j["image_size"] = {scene.width, scene.height};
  ordered_json persons = ordered_json::array();
  for (const auto& p : scene.persons) {
    ordered_json person;
    ordered_json joints = ordered_json::object();
    for (const auto& [id, pt] : p.joints) {
      joints[grammar.NameOf(id)] = {pt.x, pt.y};
    }
    person["joints"] = std::move(joints);
    ordered_json attrs = ordered_json::object();
    for (const auto& def : grammar.attributes) {
      auto it = p.attributes.find(def.id);
      if (it != p.attributes.end()) attrs[def.id] = it->second;
    }
    person["attributes"] = std::move(attrs);
    persons.push_back(std::move(person));
  }
  j["persons"] = std::move(persons);
  return Dump(j);
}

SyntheticScene SceneFromJson(std::string_view text, const AOGrammar& grammar) {
  return Parsing("scene", [&] {
    const json j = json::parse(text);
    SyntheticScene scene;
    const Point size = PointFromJson(j.at("image_size"));
    scene.width = size.x;
    scene.height = size.y;
    for (const auto& p : j.at("persons")) {
      SyntheticPerson person;
      for (const auto& [name, pt] : p.at("joints").items()) {
        person.joints[grammar.FindNode(name)] = PointFromJson(pt);
      }
      person.attributes =
          p.at("attributes").get<std::map<std::string, std::string>>();
      scene.persons.push_back(std::move(person));
    }
    CheckScene(scene, grammar);
    return scene;
  });
}

// ---- results ---------------------------------------------------------------

std::string AttributeScoresToJson(const AttributeScores& scores,
                                  const AOGrammar& grammar) {
  ordered_json j;
  ordered_json by_attr = ordered_json::object();
  for (const auto& def : grammar.attributes) {
    auto it = scores.find(def.id);
    if (it == scores.end()) continue;
    ordered_json values = ordered_json::object();
    for (const auto& v : def.domain) {
      auto s = it->second.find(v);
      if (s != it->second.end()) values[v] = s->second;
    }
    by_attr[def.id] = std::move(values);
  }
  j["scores"] = std::move(by_attr);
  ordered_json pred = ordered_json::object();
  for (const auto& [a, v] : ClassifyAttributes(scores, grammar)) pred[a] = v;
  j["prediction"] = std::move(pred);
  return Dump(j);
}

std::string ReportToJson(const DiagnosticReport& report,
                         const AOGrammar& grammar) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["scenes"] = report.scenes;
  ordered_json modes = ordered_json::object();
  const auto sticks = DefaultSticks(grammar);
  for (const auto& m : report.modes) {
    ordered_json block;
    block["attribute_accuracy"] = m.attribute_accuracy;
    block["mAP"] = m.mean_ap;
    ordered_json ap = ordered_json::object();
    for (const auto& def : grammar.attributes) {
      auto it = m.attribute_ap.find(def.id);
      if (it != m.attribute_ap.end()) ap[def.id] = it->second;
    }
    block["attribute_ap"] = std::move(ap);
    block["pcp"] = m.pcp;
    ordered_json per_stick = ordered_json::array();
    for (std::size_t i = 0; i < m.stick_pcp.size(); ++i) {
      ordered_json s;
      if (i < sticks.size()) {
        s["stick"] = grammar.NameOf(sticks[i].a) + "-" +
                     grammar.NameOf(sticks[i].b);
      }
      s["pcp"] = m.stick_pcp[i];
      per_stick.push_back(std::move(s));
    }
    block["stick_pcp"] = std::move(per_stick);
    modes[std::string(DiagModeName(m.mode))] = std::move(block);
  }
  j["modes"] = std::move(modes);
  return Dump(j);
}

}  // namespace aaog
