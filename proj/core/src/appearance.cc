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

#include "aaog/appearance.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

namespace aaog {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void ScoreTable::Set(ProposalId proposal, const AttrId& attr,
                     const std::string& value, double score) {
  if (!std::isfinite(score)) {
    throw ValidationError("non-finite score for proposal " +
                          std::to_string(proposal.value) + " " + attr + "=" +
                          value);
  }
  scores_[proposal][attr][value] = score;
}

void ScoreTable::Register(ProposalId proposal) { scores_[proposal]; }

const AttributeScoreMap& ScoreTable::ScoresFor(ProposalId proposal) const {
  auto it = scores_.find(proposal);
  if (it == scores_.end()) {
    throw LookupError("no scores for proposal " +
                      std::to_string(proposal.value));
  }
  return it->second;
}

double ScoreTable::Get(ProposalId proposal, const AttrId& attr,
                       const std::string& value) const {
  const auto& per_attr = ScoresFor(proposal);
  auto a = per_attr.find(attr);
  if (a != per_attr.end()) {
    auto v = a->second.find(value);
    if (v != a->second.end()) return v->second;
  }
  throw LookupError("no score for proposal " + std::to_string(proposal.value) +
                    " " + attr + "=" + value);
}

double ScoreTable::BestValueScore(ProposalId proposal,
                                  const AttributeDef& attr) const {
  double best = Get(proposal, attr.id, attr.domain.front());
  for (std::size_t i = 1; i < attr.domain.size(); ++i) {
    best = std::max(best, Get(proposal, attr.id, attr.domain[i]));
  }
  return best;
}

void ProposalSet::Add(const AOGrammar& grammar, Proposal proposal,
                      const AttributeScoreMap& scores) {
  AddToBucket(grammar, proposal.part, std::move(proposal), scores);
}

void ProposalSet::AddToBucket(const AOGrammar& grammar, NodeId bucket,
                              Proposal proposal,
                              const AttributeScoreMap& scores) {
  const std::string pid = std::to_string(proposal.id.value);
  if (!grammar.HasNode(proposal.part)) {
    throw ValidationError("proposal " + pid + " names an unknown part");
  }
  if (proposal.part != bucket) {
    throw ValidationError("proposal " + pid + " for part '" +
                          grammar.NameOf(proposal.part) +
                          "' placed in bucket '" +
                          (grammar.HasNode(bucket) ? grammar.NameOf(bucket)
                                                   : std::string("?")) +
                          "'");
  }
  if (index_.contains(proposal.id)) {
    throw ValidationError("duplicate proposal id " + pid);
  }
  if (proposal.part_type < 1 || proposal.part_type > grammar.part_type_count) {
    throw ValidationError("proposal " + pid + " has part_type " +
                          std::to_string(proposal.part_type) +
                          " outside [1, " +
                          std::to_string(grammar.part_type_count) + "]");
  }
  if (!(proposal.box.w > 0.0) || !(proposal.box.h > 0.0)) {
    throw ValidationError("proposal " + pid + " has an empty box");
  }
  for (double v : {proposal.x, proposal.y, proposal.box.x0, proposal.box.y0,
                   proposal.box.w, proposal.box.h}) {
    if (!std::isfinite(v)) {
      throw ValidationError("proposal " + pid + " has non-finite geometry");
    }
  }
  for (const auto& [attr, values] : scores) {
    for (const auto& [value, s] : values) {
      if (!std::isfinite(s)) {
        throw ValidationError("proposal " + pid + " has non-finite score for " +
                              attr + "=" + value);
      }
    }
  }
  for (const auto& [attr, values] : scores) {
    for (const auto& [value, s] : values) {
      scores_.Set(proposal.id, attr, value, s);
    }
  }
  scores_.Register(proposal.id);
  auto& b = buckets_[bucket];
  index_[proposal.id] = {bucket, b.size()};
  order_.push_back(proposal.id);
  b.push_back(std::move(proposal));
}

const std::vector<Proposal>& ProposalSet::Bucket(NodeId part) const {
  static const std::vector<Proposal> kEmpty;
  auto it = buckets_.find(part);
  return it == buckets_.end() ? kEmpty : it->second;
}

const Proposal& ProposalSet::Get(ProposalId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw LookupError("unknown proposal " + std::to_string(id.value));
  }
  return buckets_.at(it->second.first)[it->second.second];
}

namespace {

double ReadScore(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    // Accept the textual spellings some writers emit, then reject them as
    // non-finite during validation.
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity") {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf" || s == "-Infinity") {
      return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ValidationError("score must be a number");
}

}  // namespace

ProposalSet ReadProposals(std::istream& in, const AOGrammar& grammar) {
  ProposalSet set;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      const json j = json::parse(line);
      Proposal p;
      p.id = ProposalId(j.at("id").get<int>());
      p.part = grammar.FindNode(j.at("part").get<std::string>());
      p.x = j.at("x").get<double>();
      p.y = j.at("y").get<double>();
      p.part_type = j.at("part_type").get<int>();
      const auto& box = j.at("box");
      if (!box.is_array() || box.size() != 4) {
        throw ValidationError("field 'box' must be [x0, y0, w, h]");
      }
      p.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
               box[3].get<double>()};
      AttributeScoreMap scores;
      for (const auto& [attr, values] : j.at("scores").items()) {
        for (const auto& [value, s] : values.items()) {
          scores[attr][value] = ReadScore(s);
        }
      }
      set.Add(grammar, std::move(p), scores);
    } catch (const json::exception& e) {
      throw ValidationError(where + e.what());
    } catch (const LookupError& e) {
      throw ValidationError(where + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return set;
}

ProposalSet LoadProposals(const std::filesystem::path& path,
                          const AOGrammar& grammar) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return ReadProposals(in, grammar);
}

void WriteProposals(const ProposalSet& set, const AOGrammar& grammar,
                    std::ostream& out) {
  for (ProposalId id : set.order()) {
    const Proposal& p = set.Get(id);
    ordered_json j;
    j["id"] = p.id.value;
    j["part"] = grammar.NameOf(p.part);
    j["x"] = p.x;
    j["y"] = p.y;
    j["part_type"] = p.part_type;
    j["box"] = {p.box.x0, p.box.y0, p.box.w, p.box.h};
    ordered_json scores = ordered_json::object();
    for (const auto& [attr, values] : set.scores().ScoresFor(id)) {
      ordered_json vals = ordered_json::object();
      for (const auto& [value, s] : values) vals[value] = s;
      scores[attr] = std::move(vals);
    }
    j["scores"] = std::move(scores);
    out << j.dump() << "\n";
  }
}

double AppearanceSum(const ParseGraph& pg, const AOGrammar& grammar,
                     const ProposalSet& set,
                     const AttributeAssociation& assoc) {
  double sum = 0.0;
  for (const auto& s : pg.states) {
    if (!set.Contains(s.proposal)) {
      throw LookupError("part '" + grammar.NameOf(s.part) +
                        "' references unknown proposal " +
                        std::to_string(s.proposal.value));
    }
    auto it = assoc.sets.find(s.part);
    if (it == assoc.sets.end()) continue;
    for (const auto& attr : it->second) {
      auto assigned = pg.attribute_assignment.find(attr);
      if (assigned != pg.attribute_assignment.end()) {
        sum += set.scores().Get(s.proposal, attr, assigned->second);
      } else {
        sum += set.scores().BestValueScore(s.proposal, grammar.attribute(attr));
      }
    }
  }
  return sum;
}

}  // namespace aaog
