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

#include "aaog/relation_models.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace aaog {

namespace {

std::string EdgeName(const Edge& e) {
  return std::to_string(e.parent.value) + "->" + std::to_string(e.child.value);
}

}  // namespace

void SyntacticTable::Set(const Edge& edge, std::vector<double> probs) {
  const auto n = static_cast<std::size_t>(type_count_);
  if (probs.size() != n * n) {
    throw ValidationError("syntactic table for edge " + EdgeName(edge) +
                          " has " + std::to_string(probs.size()) +
                          " entries, expected " + std::to_string(n * n));
  }
  for (double p : probs) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ValidationError("syntactic table for edge " + EdgeName(edge) +
                            " has a non-positive entry");
    }
  }
  tables_[edge] = std::move(probs);
}

const std::vector<double>& SyntacticTable::Matrix(const Edge& edge) const {
  auto it = tables_.find(edge);
  if (it == tables_.end()) {
    throw LookupError("no syntactic table for edge " + EdgeName(edge));
  }
  return it->second;
}

double SyntacticTable::Probability(const Edge& edge, int parent_type,
                                   int child_type) const {
  const auto& m = Matrix(edge);
  if (parent_type < 1 || parent_type > type_count_ || child_type < 1 ||
      child_type > type_count_) {
    throw std::out_of_range("part type out of range [1, " +
                            std::to_string(type_count_) + "]");
  }
  return m[static_cast<std::size_t>((parent_type - 1) * type_count_ +
                                    (child_type - 1))];
}

SyntacticTable SyntacticTable::Uniform(const AOGrammar& grammar) {
  SyntacticTable t(grammar.part_type_count);
  const auto cells =
      static_cast<std::size_t>(grammar.part_type_count * grammar.part_type_count);
  for (const auto& e : grammar.psg_edges) {
    t.Set(e, std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
  }
  return t;
}

double SyntacticScore(const SyntacticTable& table, const Edge& edge,
                      int parent_type, int child_type) {
  return std::log(table.Probability(edge, parent_type, child_type));
}

double Covariance2::MinEigenvalue() const {
  const double mean = 0.5 * (xx + yy);
  const double half_diff = 0.5 * (xx - yy);
  return mean - std::sqrt(half_diff * half_diff + xy * xy);
}

double LogGaussianDensity(const GaussianComponent& c, double dx, double dy) {
  const double det = c.cov.Determinant();
  const double ux = dx - c.mean.x;
  const double uy = dy - c.mean.y;
  // u^T Sigma^{-1} u with the closed-form 2x2 inverse.
  const double maha = (c.cov.yy * ux * ux - 2.0 * c.cov.xy * ux * uy +
                       c.cov.xx * uy * uy) /
                      det;
  return -std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det) - 0.5 * maha;
}

double LogMixtureDensity(const std::vector<GaussianComponent>& mixture,
                         double dx, double dy) {
  // Streaming log-sum-exp: `sum` is relative to the running maximum.
  double best = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& c : mixture) {
    if (!(c.weight > 0.0)) continue;
    const double t = std::log(c.weight) + LogGaussianDensity(c, dx, dy);
    if (t > best) {
      sum = sum * std::exp(best - t) + 1.0;
      best = t;
    } else {
      sum += std::exp(t - best);
    }
  }
  if (sum == 0.0) return -std::numeric_limits<double>::infinity();
  return best + std::log(sum);
}

void KinematicMoG::Set(const Edge& edge,
                       std::vector<GaussianComponent> components) {
  if (components.empty()) {
    throw ValidationError("kinematic mixture for edge " + EdgeName(edge) +
                          " has no components");
  }
  mixtures_[edge] = std::move(components);
}

const std::vector<GaussianComponent>& KinematicMoG::Mixture(
    const Edge& edge) const {
  auto it = mixtures_.find(edge);
  if (it == mixtures_.end()) {
    throw LookupError("no kinematic mixture for edge " + EdgeName(edge));
  }
  return it->second;
}

double KinematicScore(const KinematicMoG& mog, const Edge& edge, double dx,
                      double dy) {
  return LogMixtureDensity(mog.Mixture(edge), dx, dy);
}

bool AttributeAssociation::Contains(NodeId part, const AttrId& attr) const {
  auto it = sets.find(part);
  return it != sets.end() && it->second.contains(attr);
}

int PartAttributeCompat(const AOGrammar& grammar,
                        const AttributeAssociation& assoc, NodeId part,
                        const AttrId& attr) {
  grammar.node(part);
  grammar.attribute(attr);
  return assoc.Contains(part, attr) ? 1 : 0;
}

std::vector<std::string> ValidateModels(const AOGrammar& grammar,
                                        const RelationModels& models) {
  std::vector<std::string> problems;
  auto edge_name = [&](const Edge& e) {
    return grammar.NameOf(e.parent) + "->" + grammar.NameOf(e.child);
  };
  if (models.syntactic.type_count() != grammar.part_type_count) {
    problems.push_back("syntactic tables use " +
                       std::to_string(models.syntactic.type_count()) +
                       " part types, grammar has " +
                       std::to_string(grammar.part_type_count));
  }
  for (const auto& e : grammar.psg_edges) {
    if (!models.syntactic.Has(e)) {
      problems.push_back("missing syntactic table for " + edge_name(e));
      continue;
    }
    double sum = 0.0;
    for (double p : models.syntactic.Matrix(e)) sum += p;
    if (std::abs(sum - 1.0) > 1e-9) {
      problems.push_back("syntactic table for " + edge_name(e) +
                         " does not sum to 1");
    }
  }
  for (const auto& e : grammar.dg_edges) {
    if (!models.kinematic.Has(e)) {
      problems.push_back("missing kinematic mixture for " + edge_name(e));
      continue;
    }
    double sum = 0.0;
    for (const auto& c : models.kinematic.Mixture(e)) {
      if (c.weight < 0.0) {
        problems.push_back("negative mixture weight on " + edge_name(e));
      }
      if (!(c.cov.MinEigenvalue() > 0.0)) {
        problems.push_back("covariance on " + edge_name(e) +
                           " is not positive definite");
      }
      sum += c.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      problems.push_back("mixture weights on " + edge_name(e) +
                         " do not sum to 1");
    }
  }
  for (const auto& [part, attrs] : models.association.sets) {
    if (!grammar.HasNode(part)) {
      problems.push_back("association references unknown part " +
                         std::to_string(part.value));
      continue;
    }
    for (const auto& a : attrs) {
      if (!grammar.HasAttribute(a)) {
        problems.push_back("association references unknown attribute '" + a +
                           "'");
      }
      for (NodeId anc : grammar.PsgAncestors(part)) {
        if (!models.association.Contains(anc, a)) {
          problems.push_back("association of '" + a + "' with " +
                             grammar.NameOf(part) + " is not propagated to " +
                             grammar.NameOf(anc));
        }
      }
    }
  }
  return problems;
}

RelationModels UninformativeModels(const AOGrammar& grammar,
                                   double displacement_sigma) {
  RelationModels m;
  m.syntactic = SyntacticTable::Uniform(grammar);
  const double var = displacement_sigma * displacement_sigma;
  for (const auto& e : grammar.dg_edges) {
    m.kinematic.Set(e, {GaussianComponent{1.0, {0.0, 0.0}, {var, 0.0, var}}});
  }
  return m;
}

}  // namespace aaog
