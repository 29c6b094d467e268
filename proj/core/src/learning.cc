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

#include "aaog/learning.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace aaog {

std::map<NodeId, Point> Annotation::VisibleJoints() const {
  std::map<NodeId, Point> out;
  for (const auto& [part, joint] : joints) {
    if (joint.visible) out[part] = joint.position;
  }
  return out;
}

void CheckAnnotation(const Annotation& ann, const AOGrammar& grammar) {
  bool any_visible = false;
  for (const auto& [part, joint] : ann.joints) {
    if (!grammar.HasNode(part) || !grammar.IsTerminal(part)) {
      throw ValidationError("annotation joint for non-atomic part " +
                            std::to_string(part.value));
    }
    any_visible = any_visible || joint.visible;
  }
  if (!any_visible) {
    throw ValidationError("annotation '" + ann.image + "' has no visible joint");
  }
  if (!(ann.person_box.w > 0.0) || !(ann.person_box.h > 0.0)) {
    throw ValidationError("annotation '" + ann.image +
                          "' has an empty person box");
  }
  for (const auto& [attr, value] : ann.attributes) {
    if (!grammar.HasAttribute(attr)) {
      throw ValidationError("annotation has unknown attribute '" + attr + "'");
    }
    const auto& def = grammar.attribute(attr);
    if (value && std::find(def.domain.begin(), def.domain.end(), *value) ==
                     def.domain.end()) {
      throw ValidationError("annotation value '" + *value +
                            "' not in domain of '" + attr + "'");
    }
  }
}

std::vector<LabeledProposal> LabelProposals(
    const Annotation& ann, std::span<const Proposal> proposals,
    const AOGrammar& grammar, const LabelingThresholds& thresholds) {
  const auto joints = ann.VisibleJoints();

  struct Candidate {
    NodeId part;
    Point keypoint;
    std::vector<Point> members;
  };
  std::vector<Candidate> parts;
  for (const auto& node : grammar.nodes) {
    auto kp = PartKeypoint(grammar, node.id, joints);
    if (!kp) continue;
    Candidate c{node.id, *kp, {}};
    if (!grammar.IsTerminal(node.id)) {
      for (NodeId t : grammar.TerminalDescendants(node.id)) {
        auto it = joints.find(t);
        if (it != joints.end()) c.members.push_back(it->second);
      }
    }
    parts.push_back(std::move(c));
  }

  std::vector<LabeledProposal> out;
  for (const auto& p : proposals) {
    const double iou = IntersectionOverUnion(p.box, ann.person_box);
    if (iou < thresholds.negative_iou) {
      out.push_back({p, ProposalLabel::kNegative, NodeId(),
                     0, std::numeric_limits<double>::infinity()});
      continue;
    }
    if (!(iou > thresholds.positive_iou)) continue;

    const Point center = p.box.Center();
    const double scale = std::min(p.box.w, p.box.h);
    const Candidate* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : parts) {
      const bool eligible =
          c.members.empty() ||
          std::all_of(c.members.begin(), c.members.end(),
                      [&](const Point& m) { return p.box.Contains(m); });
      if (!eligible) continue;
      const double dx = center.x - c.keypoint.x;
      const double dy = center.y - c.keypoint.y;
      const double d = (dx * dx + dy * dy) / scale;
      if (d < best) {
        best = d;
        nearest = &c;
      }
    }
    if (nearest != nullptr && best < thresholds.max_distance) {
      out.push_back({p, ProposalLabel::kPart, nearest->part, p.part_type, best});
    }
  }
  return out;
}

PartTypeSample ChoosePartTypes(std::span<const LabeledProposal> labeled) {
  std::map<NodeId, const LabeledProposal*> best;
  for (const auto& l : labeled) {
    if (l.label != ProposalLabel::kPart) continue;
    auto& slot = best[l.part];
    if (slot == nullptr || l.distance < slot->distance ||
        (l.distance == slot->distance && l.proposal.id < slot->proposal.id)) {
      slot = &l;
    }
  }
  PartTypeSample out;
  for (const auto& [part, l] : best) out[part] = l->part_type;
  return out;
}

SyntacticTable FitSyntactic(std::span<const PartTypeSample> samples,
                            const AOGrammar& grammar, double alpha,
                            std::vector<std::string>* warnings) {
  const int t = grammar.part_type_count;
  const auto cells = static_cast<std::size_t>(t * t);
  SyntacticTable table(t);
  for (const auto& e : grammar.psg_edges) {
    std::vector<double> counts(cells, 0.0);
    double total = 0.0;
    for (const auto& sample : samples) {
      auto p = sample.find(e.parent);
      auto c = sample.find(e.child);
      if (p == sample.end() || c == sample.end()) continue;
      if (p->second < 1 || p->second > t || c->second < 1 || c->second > t) {
        throw ValidationError("part type out of range in co-occurrence sample");
      }
      counts[static_cast<std::size_t>((p->second - 1) * t + (c->second - 1))] +=
          1.0;
      total += 1.0;
    }
    if (total == 0.0 && warnings != nullptr) {
      warnings->push_back("no co-occurrence samples for " +
                          grammar.NameOf(e.parent) + "->" +
                          grammar.NameOf(e.child) + "; using uniform table");
    }
    const double denom = total + alpha * static_cast<double>(cells);
    std::vector<double> probs(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      probs[i] = (counts[i] + alpha) / denom;
    }
    table.Set(e, std::move(probs));
  }
  return table;
}

namespace {

// Projects a symmetric 2x2 matrix onto {eigenvalues >= floor}. This is the
// exact maximizer of the Gaussian M-step objective under that constraint.
Covariance2 FloorEigenvalues(const Covariance2& s, double floor) {
  const double mean = 0.5 * (s.xx + s.yy);
  const double half_diff = 0.5 * (s.xx - s.yy);
  const double r = std::sqrt(half_diff * half_diff + s.xy * s.xy);
  const double l1 = mean + r;
  const double l2 = mean - r;
  if (l2 >= floor) return s;
  const double f1 = std::max(l1, floor);
  const double f2 = std::max(l2, floor);
  // Unit eigenvector of l1.
  double vx = 1.0;
  double vy = 0.0;
  if (r > 0.0) {
    if (half_diff >= 0.0) {
      vx = l1 - s.yy;
      vy = s.xy;
    } else {
      vx = s.xy;
      vy = l1 - s.xx;
    }
    const double norm = std::hypot(vx, vy);
    vx /= norm;
    vy /= norm;
  }
  return {f1 * vx * vx + f2 * vy * vy, (f1 - f2) * vx * vy,
          f1 * vy * vy + f2 * vx * vx};
}

std::vector<Point> KMeansPlusPlusSeeds(std::span<const Point> x, int k,
                                       std::mt19937_64& rng) {
  const std::size_t n = x.size();
  std::vector<Point> centers;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  centers.push_back(x[pick(rng)]);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(centers.size()) < k) {
    const Point& last = centers.back();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = x[i].x - last.x;
      const double dy = x[i].y - last.y;
      d2[i] = std::min(d2[i], dx * dx + dy * dy);
      total += d2[i];
    }
    if (!(total > 0.0)) {
      centers.push_back(x[pick(rng)]);
      continue;
    }
    const double target = unit(rng) * total;
    double acc = 0.0;
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      acc += d2[i];
      if (acc >= target && d2[i] > 0.0) {
        chosen = i;
        break;
      }
    }
    centers.push_back(x[chosen]);
  }
  return centers;
}

}  // namespace

double MeanLogLikelihood(const std::vector<GaussianComponent>& mixture,
                         std::span<const Point> samples) {
  double sum = 0.0;
  for (const auto& p : samples) sum += LogMixtureDensity(mixture, p.x, p.y);
  return sum / static_cast<double>(samples.size());
}

MixtureFit FitMixture(std::span<const Point> samples, const EmOptions& options) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw DegenerateDataError("mixture fit needs at least 2 samples, got " +
                              std::to_string(n));
  }
  MixtureFit fit;
  int k = std::max(1, options.n_components);
  if (static_cast<std::size_t>(k) > n) {
    fit.warnings.push_back("only " + std::to_string(n) + " samples; reducing " +
                           std::to_string(k) + " components to " +
                           std::to_string(n));
    k = static_cast<int>(n);
  }

  std::mt19937_64 rng(options.seed);
  Point mean_all;
  for (const auto& p : samples) {
    mean_all.x += p.x;
    mean_all.y += p.y;
  }
  mean_all.x /= static_cast<double>(n);
  mean_all.y /= static_cast<double>(n);
  Covariance2 cov_all{0.0, 0.0, 0.0};
  for (const auto& p : samples) {
    const double dx = p.x - mean_all.x;
    const double dy = p.y - mean_all.y;
    cov_all.xx += dx * dx;
    cov_all.xy += dx * dy;
    cov_all.yy += dy * dy;
  }
  cov_all.xx /= static_cast<double>(n);
  cov_all.xy /= static_cast<double>(n);
  cov_all.yy /= static_cast<double>(n);
  cov_all = FloorEigenvalues(cov_all, options.covariance_floor);

  auto& comps = fit.components;
  for (const auto& c : KMeansPlusPlusSeeds(samples, k, rng)) {
    comps.push_back({1.0 / k, c, cov_all});
  }

  std::vector<double> resp(n * static_cast<std::size_t>(k));
  std::vector<double> log_terms(k);
  for (int iter = 0;; ++iter) {
    // E-step, which also yields the log-likelihood of the current parameters.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        log_terms[j] = comps[j].weight > 0.0
                           ? std::log(comps[j].weight) +
                                 LogGaussianDensity(comps[j], samples[i].x,
                                                    samples[i].y)
                           : -std::numeric_limits<double>::infinity();
        best = std::max(best, log_terms[j]);
      }
      double sum = 0.0;
      for (int j = 0; j < k; ++j) sum += std::exp(log_terms[j] - best);
      const double log_norm = best + std::log(sum);
      ll += log_norm;
      for (int j = 0; j < k; ++j) {
        resp[i * k + j] = std::exp(log_terms[j] - log_norm);
      }
    }
    ll /= static_cast<double>(n);
    fit.log_likelihood_trace.push_back(ll);
    const auto& trace = fit.log_likelihood_trace;
    if (trace.size() >= 2 && trace.back() - trace[trace.size() - 2] < options.tol) {
      fit.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;

    // M-step.
    for (int j = 0; j < k; ++j) {
      double nk = 0.0;
      double mx = 0.0;
      double my = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = resp[i * k + j];
        nk += r;
        mx += r * samples[i].x;
        my += r * samples[i].y;
      }
      if (!(nk > 0.0)) {
        // Collapsed component: it keeps its shape but drops out of the mixture.
        comps[j].weight = 0.0;
        continue;
      }
      mx /= nk;
      my /= nk;
      Covariance2 s{0.0, 0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) {
        const double r = resp[i * k + j];
        const double dx = samples[i].x - mx;
        const double dy = samples[i].y - my;
        s.xx += r * dx * dx;
        s.xy += r * dx * dy;
        s.yy += r * dy * dy;
      }
      s.xx /= nk;
      s.xy /= nk;
      s.yy /= nk;
      comps[j].weight = nk / static_cast<double>(n);
      comps[j].mean = {mx, my};
      comps[j].cov = FloorEigenvalues(s, options.covariance_floor);
    }
    // Renormalize against rounding so weights sum to 1.
    double wsum = 0.0;
    for (const auto& c : comps) wsum += c.weight;
    for (auto& c : comps) c.weight /= wsum;
  }
  return fit;
}

std::map<Edge, std::vector<Point>> CollectDisplacements(
    std::span<const Annotation> annotations, const AOGrammar& grammar) {
  std::map<Edge, std::vector<Point>> out;
  for (const auto& e : grammar.dg_edges) out[e];
  for (const auto& ann : annotations) {
    for (const auto& e : grammar.dg_edges) {
      auto p = ann.joints.find(e.parent);
      auto c = ann.joints.find(e.child);
      if (p == ann.joints.end() || c == ann.joints.end() ||
          !p->second.visible || !c->second.visible) {
        continue;
      }
      out[e].push_back({c->second.position.x - p->second.position.x,
                        c->second.position.y - p->second.position.y});
    }
  }
  return out;
}

KinematicMoG FitKinematic(const std::map<Edge, std::vector<Point>>& samples,
                          const EmOptions& options,
                          std::vector<std::string>* warnings) {
  KinematicMoG mog;
  std::uint64_t edge_index = 0;
  for (const auto& [edge, points] : samples) {
    EmOptions per_edge = options;
    per_edge.seed = options.seed + edge_index++;
    MixtureFit fit = FitMixture(points, per_edge);
    if (warnings != nullptr) {
      for (auto& w : fit.warnings) warnings->push_back(std::move(w));
    }
    mog.Set(edge, std::move(fit.components));
  }
  return mog;
}

double MutualInformation(const std::vector<bool>& a,
                         const std::vector<bool>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("mutual information: length mismatch");
  }
  if (a.empty()) {
    throw std::invalid_argument("mutual information: empty input");
  }
  double joint[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t i = 0; i < a.size(); ++i) joint[a[i]][b[i]] += 1.0;
  const double n = static_cast<double>(a.size());
  const double ma[2] = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
  const double mb[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
  double mi = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (joint[i][j] == 0.0) continue;
      mi += joint[i][j] / n * std::log(joint[i][j] * n / (ma[i] * mb[j]));
    }
  }
  return std::max(0.0, mi);
}

MiTable ComputePartAttributeMi(std::span<const Annotation> annotations,
                               const AOGrammar& grammar) {
  MiTable out;
  for (NodeId part : grammar.TerminalParts()) {
    std::vector<bool> visible;
    for (const auto& ann : annotations) {
      auto it = ann.joints.find(part);
      visible.push_back(it != ann.joints.end() && it->second.visible);
    }
    for (const auto& attr : grammar.attributes) {
      std::vector<bool> known;
      for (const auto& ann : annotations) {
        auto it = ann.attributes.find(attr.id);
        known.push_back(it != ann.attributes.end() && it->second.has_value());
      }
      out[part][attr.id] = MutualInformation(known, visible);
    }
  }
  return out;
}

AttributeAssociation DeriveAssociations(const MiTable& mi,
                                        const AOGrammar& grammar) {
  AttributeAssociation assoc;
  const auto atomic = grammar.TerminalParts();
  for (const auto& attr : grammar.attributes) {
    std::vector<double> values;
    for (NodeId part : atomic) {
      auto p = mi.find(part);
      if (p == mi.end()) {
        throw LookupError("no mutual information for part '" +
                          grammar.NameOf(part) + "'");
      }
      auto a = p->second.find(attr.id);
      if (a == p->second.end()) {
        throw LookupError("no mutual information for part '" +
                          grammar.NameOf(part) + "' and attribute '" +
                          attr.id + "'");
      }
      values.push_back(a->second);
      assoc.mi[part][attr.id] = a->second;
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    // Absorbs rounding in the mean so equal values are never "above" it.
    const double slack = 1e-12 * std::max(1.0, std::abs(mean));
    for (std::size_t i = 0; i < atomic.size(); ++i) {
      if (!(values[i] > mean + slack)) continue;
      assoc.sets[atomic[i]].insert(attr.id);
      for (NodeId anc : grammar.PsgAncestors(atomic[i])) {
        assoc.sets[anc].insert(attr.id);
      }
    }
  }
  return assoc;
}

RelationModels LearnRelationModels(
    std::span<const Annotation> annotations,
    const std::map<std::string, std::vector<Proposal>>& proposals_by_image,
    const AOGrammar& grammar, const LearnOptions& options,
    std::vector<std::string>* warnings) {
  for (const auto& ann : annotations) CheckAnnotation(ann, grammar);

  RelationModels models;
  models.kinematic = FitKinematic(CollectDisplacements(annotations, grammar),
                                  options.em, warnings);

  std::vector<PartTypeSample> type_samples;
  for (const auto& ann : annotations) {
    auto it = proposals_by_image.find(ann.image);
    if (it == proposals_by_image.end() || it->second.empty()) continue;
    const auto labeled =
        LabelProposals(ann, it->second, grammar, options.labeling);
    auto sample = ChoosePartTypes(labeled);
    if (!sample.empty()) type_samples.push_back(std::move(sample));
  }
  models.syntactic = FitSyntactic(type_samples, grammar,
                                  options.syntactic_alpha, warnings);
  models.association =
      DeriveAssociations(ComputePartAttributeMi(annotations, grammar), grammar);
  return models;
}

}  // namespace aaog
