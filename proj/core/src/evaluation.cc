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

#include "aaog/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace aaog {
namespace {

double Distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Confidence that `value` is the right label: its score minus the best
// competing value's score.
double Margin(const std::map<std::string, double>& by_value,
              const std::string& value) {
  double other = -std::numeric_limits<double>::infinity();
  for (const auto& [v, s] : by_value) {
    if (v != value) other = std::max(other, s);
  }
  return by_value.at(value) - other;
}

}  // namespace

std::vector<Stick> DefaultSticks(const AOGrammar& grammar) {
  std::vector<Stick> sticks;
  int index = 1;
  for (const auto& e : grammar.dg_edges) {
    sticks.push_back({e.parent, e.child, index++});
  }
  return sticks;
}

PcpResult StrictPcp(const std::map<NodeId, Point>& pred, const Annotation& truth,
                    std::span<const Stick> sticks, double threshold) {
  PcpResult result;
  int correct = 0;
  for (const auto& stick : sticks) {
    auto ta = truth.joints.find(stick.a);
    auto tb = truth.joints.find(stick.b);
    if (ta == truth.joints.end() || tb == truth.joints.end() ||
        !ta->second.visible || !tb->second.visible) {
      result.per_stick.push_back(std::nullopt);
      continue;
    }
    auto pa = pred.find(stick.a);
    auto pb = pred.find(stick.b);
    if (pa == pred.end() || pb == pred.end()) {
      throw ValidationError("prediction lacks an endpoint of stick " +
                            std::to_string(stick.index));
    }
    const double limit =
        threshold * Distance(ta->second.position, tb->second.position);
    const bool ok = Distance(pa->second, ta->second.position) <= limit &&
                    Distance(pb->second, tb->second.position) <= limit;
    result.per_stick.push_back(ok);
    ++result.evaluated;
    if (ok) ++correct;
  }
  if (result.evaluated == 0) {
    throw ValidationError("no stick has both ground-truth endpoints visible");
  }
  result.mean = static_cast<double>(correct) / result.evaluated;
  return result;
}

PcpResult StrictPcp(const ParseGraph& pred, const Annotation& truth,
                    std::span<const Stick> sticks, double threshold) {
  std::map<NodeId, Point> points;
  for (const auto& s : pred.states) points[s.part] = {s.x, s.y};
  return StrictPcp(points, truth, sticks, threshold);
}

double AveragePrecision(std::span<const double> scores,
                        const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
  const auto positives = std::count(labels.begin(), labels.end(), true);
  if (positives == 0) throw ValidationError("no positive labels");

  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<double> recall, precision;
  double tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (labels[idx[j]] ? tp : fp) += 1.0;
      ++j;
    }
    recall.push_back(tp / static_cast<double>(positives));
    precision.push_back(tp / (tp + fp));
    i = j;
  }
  // Precision envelope from the right.
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    ap += (recall[i] - prev) * precision[i];
    prev = recall[i];
  }
  return ap;
}

DiagMode ParseDiagMode(std::string_view name) {
  if (name == "joint") return DiagMode::kJoint;
  if (name == "no-attr") return DiagMode::kNoAttribute;
  if (name == "no-pose") return DiagMode::kNoPose;
  throw ValidationError("unknown diagnostic mode '" + std::string(name) + "'");
}

std::string_view DiagModeName(DiagMode mode) {
  switch (mode) {
    case DiagMode::kJoint:
      return "joint";
    case DiagMode::kNoAttribute:
      return "no-attr";
    case DiagMode::kNoPose:
      return "no-pose";
  }
  return "";
}

ScenePrediction PredictScene(DiagMode mode, const AOGrammar& grammar,
                             const RelationModels& models,
                             const ProposalSet& set,
                             const BeamConfig& config) {
  const ScoreTable& table = set.scores();
  const auto& assoc = models.association;
  ScenePrediction out;
  switch (mode) {
    case DiagMode::kJoint: {
      JointParse jp = SelectFinal(grammar, models, set,
                                  AllAttributeValues(grammar), config);
      out.scores = ComputeAttributeScores(jp.per_pair, set, assoc);
      out.pose = std::move(jp.best);
      break;
    }
    case DiagMode::kNoAttribute: {
      out.pose = ParseUnconstrained(grammar, models, set, config);
      for (const auto& def : grammar.attributes) {
        for (const auto& value : def.domain) {
          double s = 0.0;
          for (const auto& st : out.pose.states) {
            if (assoc.Contains(st.part, def.id)) {
              s += table.Get(st.proposal, def.id, value);
            }
          }
          out.scores[def.id][value] = s;
        }
      }
      break;
    }
    case DiagMode::kNoPose: {
      for (const auto& node : grammar.nodes) {
        const auto& bucket = set.Bucket(node.id);
        if (bucket.empty()) {
          throw InferenceError("no proposals for part " + node.name);
        }
        const Proposal* best = nullptr;
        double best_score = -std::numeric_limits<double>::infinity();
        for (const auto& p : bucket) {
          const double s = ProposalAppearance(grammar, set, p.id, std::nullopt);
          if (best == nullptr || s > best_score) {
            best = &p;
            best_score = s;
          }
        }
        out.pose.states.push_back(
            {node.id, best->x, best->y, best->part_type, best->id});
      }
      out.pose.total_score = RecomputeScore(out.pose, grammar, models, set);
      for (const auto& def : grammar.attributes) {
        for (const auto& value : def.domain) {
          double s = -std::numeric_limits<double>::infinity();
          for (ProposalId id : set.order()) {
            s = std::max(s, table.Get(id, def.id, value));
          }
          out.scores[def.id][value] = s;
        }
      }
      break;
    }
  }
  out.attributes = ClassifyAttributes(out.scores, grammar);
  return out;
}

DiagnosticReport RunDiagnostic(std::span<const DiagnosticCase> cases,
                               const AOGrammar& grammar,
                               const RelationModels& models,
                               const DiagnosticConfig& config) {
  if (cases.empty()) throw ValidationError("diagnostic needs at least one scene");
  const auto sticks = DefaultSticks(grammar);

  DiagnosticReport report;
  report.scenes = static_cast<int>(cases.size());
  for (DiagMode mode : config.modes) {
    ModeReport mr;
    mr.mode = mode;
    std::vector<int> stick_correct(sticks.size(), 0);
    std::vector<int> stick_total(sticks.size(), 0);
    double pcp_sum = 0.0;
    int correct = 0, judged = 0;
    // attr -> value -> (confidences, labels) over scenes.
    std::map<AttrId, std::map<std::string, std::pair<std::vector<double>,
                                                     std::vector<bool>>>>
        ap_data;

    for (const auto& c : cases) {
      const Annotation truth = ExactAnnotation(c.scene, 0, grammar, "");
      const auto& target = c.scene.persons[0].attributes;
      const ScenePrediction pred =
          PredictScene(mode, grammar, models, c.proposals, config.beam);

      const PcpResult pcp =
          StrictPcp(pred.pose, truth, sticks, config.pcp_threshold);
      pcp_sum += pcp.mean;
      for (std::size_t i = 0; i < sticks.size(); ++i) {
        if (!pcp.per_stick[i]) continue;
        ++stick_total[i];
        if (*pcp.per_stick[i]) ++stick_correct[i];
      }

      for (const auto& def : grammar.attributes) {
        auto t = target.find(def.id);
        if (t == target.end()) continue;
        ++judged;
        if (pred.attributes.at(def.id) == t->second) ++correct;
        const auto& by_value = pred.scores.at(def.id);
        for (const auto& value : def.domain) {
          auto& [conf, labels] = ap_data[def.id][value];
          conf.push_back(Margin(by_value, value));
          labels.push_back(t->second == value);
        }
      }
    }

    mr.pcp = pcp_sum / static_cast<double>(cases.size());
    for (std::size_t i = 0; i < sticks.size(); ++i) {
      mr.stick_pcp.push_back(
          stick_total[i] == 0
              ? 0.0
              : static_cast<double>(stick_correct[i]) / stick_total[i]);
    }
    mr.attribute_accuracy =
        judged == 0 ? 0.0 : static_cast<double>(correct) / judged;
    double ap_sum = 0.0;
    for (const auto& def : grammar.attributes) {
      auto it = ap_data.find(def.id);
      if (it == ap_data.end()) continue;
      double sum = 0.0;
      int n = 0;
      for (const auto& value : def.domain) {
        const auto& [conf, labels] = it->second.at(value);
        if (std::find(labels.begin(), labels.end(), true) == labels.end()) {
          continue;
        }
        sum += AveragePrecision(conf, labels);
        ++n;
      }
      if (n == 0) continue;
      mr.attribute_ap[def.id] = sum / n;
      ap_sum += sum / n;
    }
    mr.mean_ap = mr.attribute_ap.empty()
                     ? 0.0
                     : ap_sum / static_cast<double>(mr.attribute_ap.size());
    report.modes.push_back(std::move(mr));
  }
  return report;
}

}  // namespace aaog
