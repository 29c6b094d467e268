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

#ifndef AAOG_RELATION_MODELS_H_
#define AAOG_RELATION_MODELS_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "aaog/grammar.h"
#include "aaog/types.h"

namespace aaog {

// Part-type co-occurrence P(t_parent, t_child) for every phrase-structure
// edge, stored row-major over 1-based part types.
class SyntacticTable {
 public:
  SyntacticTable() = default;
  explicit SyntacticTable(int type_count) : type_count_(type_count) {}

  int type_count() const { return type_count_; }

  // `probs` has type_count^2 entries, row index = parent type - 1. Throws
  // ValidationError on a size mismatch or a non-positive entry.
  void Set(const Edge& edge, std::vector<double> probs);
  bool Has(const Edge& edge) const { return tables_.contains(edge); }

  // Throws LookupError for an unknown edge, std::out_of_range for a type
  // outside [1, type_count].
  double Probability(const Edge& edge, int parent_type, int child_type) const;
  const std::vector<double>& Matrix(const Edge& edge) const;

  const std::map<Edge, std::vector<double>>& tables() const { return tables_; }

  static SyntacticTable Uniform(const AOGrammar& grammar);

 private:
  int type_count_ = 0;
  std::map<Edge, std::vector<double>> tables_;
};

// log P(t_i, t_j).
double SyntacticScore(const SyntacticTable& table, const Edge& edge,
                      int parent_type, int child_type);

// Symmetric 2x2 covariance.
struct Covariance2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  double Determinant() const { return xx * yy - xy * xy; }
  double MinEigenvalue() const;
  bool operator==(const Covariance2&) const = default;
};

struct GaussianComponent {
  double weight = 1.0;
  Point mean;
  Covariance2 cov;

  bool operator==(const GaussianComponent&) const = default;
};

double LogGaussianDensity(const GaussianComponent& c, double dx, double dy);

// log sum_k w_k N(d; mu_k, Sigma_k), evaluated with log-sum-exp so it stays
// finite for any finite displacement. Zero-weight components are skipped.
double LogMixtureDensity(const std::vector<GaussianComponent>& mixture,
                         double dx, double dy);

// Mixture of Gaussians over the child-minus-parent displacement of every
// dependency edge.
class KinematicMoG {
 public:
  void Set(const Edge& edge, std::vector<GaussianComponent> components);
  bool Has(const Edge& edge) const { return mixtures_.contains(edge); }
  const std::vector<GaussianComponent>& Mixture(const Edge& edge) const;
  const std::map<Edge, std::vector<GaussianComponent>>& mixtures() const {
    return mixtures_;
  }

 private:
  std::map<Edge, std::vector<GaussianComponent>> mixtures_;
};

// log P(v_i, v_j) for displacement (dx, dy) = child - parent.
double KinematicScore(const KinematicMoG& mog, const Edge& edge, double dx,
                      double dy);

// X(v): the attributes each part is informative about, plus the
// mutual-information values (nats) they were derived from.
struct AttributeAssociation {
  std::map<NodeId, std::set<AttrId>> sets;
  std::map<NodeId, std::map<AttrId, double>> mi;

  bool Contains(NodeId part, const AttrId& attr) const;
};

// The indicator 1(a, X(v)). Throws LookupError for ids the grammar does not
// know.
int PartAttributeCompat(const AOGrammar& grammar,
                        const AttributeAssociation& assoc, NodeId part,
                        const AttrId& attr);

struct RelationModels {
  SyntacticTable syntactic;
  KinematicMoG kinematic;
  AttributeAssociation association;
};

// Checks models against a grammar: every psg edge has a normalized table of
// the right size, every dg edge a normalized mixture with SPD covariances,
// association sets are ancestor-closed. Returns human-readable problems.
std::vector<std::string> ValidateModels(const AOGrammar& grammar,
                                        const RelationModels& models);

// Uniform syntactic tables and a broad single-Gaussian kinematic model
// centred at zero; used when nothing has been learned.
RelationModels UninformativeModels(const AOGrammar& grammar,
                                   double displacement_sigma);

}  // namespace aaog

#endif  // AAOG_RELATION_MODELS_H_
