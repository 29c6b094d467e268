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

#include "aaog/inference.h"

#include <algorithm>
#include <future>
#include <numeric>
#include <set>

namespace aaog {
namespace internal {

// Everything a search needs, resolved up front: per step the candidate
// proposals, their appearance terms under the objective, and for each
// relation edge closed at that step the full pairwise score matrix against
// the earlier endpoint.
class ScoringPlan {
 public:
  struct Link {
    int earlier_step;
    // [earlier_index * current_count + current_index]
    std::vector<double> scores;
  };

  struct Step {
    NodeId part;
    std::vector<const Proposal*> proposals;
    std::vector<double> appearance;
    std::vector<Link> links;
  };

  ScoringPlan(const AOGrammar& grammar, const RelationModels& models,
              const ProposalSet& set, ParseObjective objective,
              const BeamConfig& config)
      : grammar_(grammar),
        objective_(std::move(objective)),
        use_syntactic_(config.use_syntactic) {
    order_ = config.expansion_order.empty() ? DefaultExpansionOrder(grammar)
                                            : config.expansion_order;
    CheckExpansionOrder(grammar, order_);
    if (objective_.constraint) {
      const auto& def = grammar.attribute(objective_.constraint->attr);
      if (std::find(def.domain.begin(), def.domain.end(),
                    objective_.constraint->value) == def.domain.end()) {
        throw LookupError("value '" + objective_.constraint->value +
                          "' is not in the domain of '" + def.id + "'");
      }
    }

    std::vector<int> step_of(grammar.nodes.size(), -1);
    for (std::size_t s = 0; s < order_.size(); ++s) {
      step_of[order_[s].value] = static_cast<int>(s);
    }
    steps_.resize(order_.size());
    for (std::size_t s = 0; s < order_.size(); ++s) {
      Step& step = steps_[s];
      step.part = order_[s];
      const auto& bucket = set.Bucket(step.part);
      if (bucket.empty()) {
        throw InferenceError("no proposals for part '" +
                             grammar.NameOf(step.part) + "'");
      }
      for (const auto& p : bucket) {
        step.proposals.push_back(&p);
        step.appearance.push_back(
            ProposalAppearance(grammar, set, p.id, objective_.constraint));
      }
    }

    // Attach every edge to the step of its later endpoint: psg edges first,
    // then dg edges, each in grammar order.
    auto attach = [&](const Edge& e, auto&& score) {
      const int sp = step_of[e.parent.value];
      const int sc = step_of[e.child.value];
      const bool parent_first = sp < sc;
      Step& later = steps_[parent_first ? sc : sp];
      const Step& earlier = steps_[parent_first ? sp : sc];
      Link link{parent_first ? sp : sc, {}};
      link.scores.reserve(earlier.proposals.size() * later.proposals.size());
      for (const Proposal* pe : earlier.proposals) {
        for (const Proposal* pl : later.proposals) {
          const Proposal& parent = parent_first ? *pe : *pl;
          const Proposal& child = parent_first ? *pl : *pe;
          link.scores.push_back(score(parent, child));
        }
      }
      later.links.push_back(std::move(link));
    };
    if (use_syntactic_) {
      for (const auto& e : grammar.psg_edges) {
        attach(e, [&](const Proposal& parent, const Proposal& child) {
          return SyntacticScore(models.syntactic, e, parent.part_type,
                                child.part_type);
        });
      }
    }
    for (const auto& e : grammar.dg_edges) {
      attach(e, [&](const Proposal& parent, const Proposal& child) {
        return KinematicScore(models.kinematic, e, child.x - parent.x,
                              child.y - parent.y);
      });
    }
  }

  std::size_t size() const { return steps_.size(); }
  const Step& step(std::size_t s) const { return steps_[s]; }

  // Score added when step `s` takes proposal `j` given the bucket indices of
  // the earlier steps. Beam and brute force share this so both accumulate
  // bit-identical totals.
  double Increment(std::size_t s, const int* earlier, int j) const {
    const Step& step = steps_[s];
    const auto n = step.proposals.size();
    double inc = step.appearance[j];
    for (const auto& link : step.links) {
      inc += link.scores[static_cast<std::size_t>(earlier[link.earlier_step]) *
                             n +
                         static_cast<std::size_t>(j)];
    }
    return inc;
  }

  int IdAt(std::size_t s, int j) const {
    return steps_[s].proposals[j]->id.value;
  }

  // True when choice tuple `a` ranks before `b`: lexicographic on proposal
  // ids in expansion order over the first `depth` steps.
  bool IdTupleLess(const int* a, const int* b, std::size_t depth) const {
    for (std::size_t s = 0; s < depth; ++s) {
      const int ia = IdAt(s, a[s]);
      const int ib = IdAt(s, b[s]);
      if (ia != ib) return ia < ib;
    }
    return false;
  }

  ParseGraph Materialize(const int* choice, double score) const {
    ParseGraph pg;
    for (std::size_t s = 0; s < steps_.size(); ++s) {
      const Proposal& p = *steps_[s].proposals[choice[s]];
      pg.states.push_back({p.part, p.x, p.y, p.part_type, p.id});
    }
    std::sort(pg.states.begin(), pg.states.end(),
              [](const PartState& a, const PartState& b) {
                return a.part < b.part;
              });
    if (use_syntactic_) pg.used_psg_edges = grammar_.psg_edges;
    pg.used_dg_edges = grammar_.dg_edges;
    if (objective_.constraint) {
      pg.attribute_assignment[objective_.constraint->attr] =
          objective_.constraint->value;
    }
    pg.total_score = score;
    return pg;
  }

  PartialParse Partial(const int* choice, std::size_t depth,
                       double score) const {
    PartialParse out;
    for (std::size_t s = 0; s < depth; ++s) {
      const Proposal& p = *steps_[s].proposals[choice[s]];
      out.assigned[p.part] = {p.part, p.x, p.y, p.part_type, p.id};
    }
    out.score = score;
    return out;
  }

 private:
  const AOGrammar& grammar_;
  ParseObjective objective_;
  bool use_syntactic_;
  std::vector<NodeId> order_;
  std::vector<Step> steps_;
};

}  // namespace internal

std::vector<NodeId> DefaultExpansionOrder(const AOGrammar& grammar) {
  const std::size_t n = grammar.nodes.size();
  std::vector<NodeId> order;
  std::vector<bool> placed(n, false);
  if (!grammar.HasNode(grammar.root)) {
    throw ValidationError("grammar root does not exist");
  }
  order.push_back(grammar.root);
  placed[grammar.root.value] = true;
  auto ready = [&](NodeId id) {
    const auto psg = grammar.PsgParent(id);
    const auto dg = grammar.DgParent(id);
    return (!psg || placed[psg->value]) && (!dg || placed[dg->value]);
  };
  while (order.size() < n) {
    bool progressed = false;
    for (const auto& node : grammar.nodes) {
      if (!placed[node.id.value] && ready(node.id)) {
        order.push_back(node.id);
        placed[node.id.value] = true;
        progressed = true;
        break;
      }
    }
    if (!progressed) {
      throw ValidationError(
          "grammar has parts that cannot be ordered after their parents");
    }
  }
  return order;
}

void CheckExpansionOrder(const AOGrammar& grammar,
                         const std::vector<NodeId>& order) {
  if (order.size() != grammar.nodes.size()) {
    throw ValidationError("expansion order must list every part exactly once");
  }
  if (order.front() != grammar.root) {
    throw ValidationError("expansion order must start at the root part");
  }
  std::vector<int> position(grammar.nodes.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!grammar.HasNode(order[i]) || position[order[i].value] != -1) {
      throw ValidationError(
          "expansion order must list every part exactly once");
    }
    position[order[i].value] = static_cast<int>(i);
  }
  for (const auto& e : grammar.psg_edges) {
    if (position[e.parent.value] > position[e.child.value]) {
      throw ValidationError("expansion order places '" +
                            grammar.NameOf(e.child) + "' before its parent");
    }
  }
}

BeamSearch::BeamSearch(const AOGrammar& grammar, const RelationModels& models,
                       const ProposalSet& set, ParseObjective objective,
                       BeamConfig config)
    : BeamSearch(std::make_shared<const internal::ScoringPlan>(
                     grammar, models, set, std::move(objective), config),
                 config.beam_width) {}

BeamSearch::BeamSearch(std::shared_ptr<const internal::ScoringPlan> plan,
                       int beam_width)
    : plan_(std::move(plan)), beam_width_(beam_width) {
  if (beam_width_ < 1) throw ValidationError("beam width must be >= 1");
  // First step: one candidate per root proposal, unpruned.
  const auto& root = plan_->step(0);
  const std::size_t width = plan_->size();
  const int count = static_cast<int>(root.proposals.size());
  choices_.assign(static_cast<std::size_t>(count) * width, 0);
  scores_.resize(count);
  for (int j = 0; j < count; ++j) {
    choices_[static_cast<std::size_t>(j) * width] = j;
    scores_[j] = plan_->Increment(0, nullptr, j);
  }
  depth_ = 1;
}

BeamSearch::~BeamSearch() = default;
BeamSearch::BeamSearch(BeamSearch&&) noexcept = default;
BeamSearch& BeamSearch::operator=(BeamSearch&&) noexcept = default;

bool BeamSearch::Done() const { return depth_ == plan_->size(); }

void BeamSearch::Step() {
  if (Done()) return;
  const std::size_t width = plan_->size();
  const std::size_t s = depth_;
  const int count = static_cast<int>(plan_->step(s).proposals.size());
  const std::size_t parents = scores_.size();

  std::vector<int> next_choices(parents * count * width);
  std::vector<double> next_scores(parents * count);
  std::size_t k = 0;
  for (std::size_t c = 0; c < parents; ++c) {
    const int* base = &choices_[c * width];
    for (int j = 0; j < count; ++j, ++k) {
      int* row = &next_choices[k * width];
      std::copy(base, base + s, row);
      row[s] = j;
      next_scores[k] = scores_[c] + plan_->Increment(s, base, j);
    }
  }

  std::vector<std::size_t> idx(next_scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t keep =
      std::min(idx.size(), static_cast<std::size_t>(beam_width_));
  const std::size_t depth = s + 1;
  auto ranks_before = [&](std::size_t a, std::size_t b) {
    if (next_scores[a] != next_scores[b]) return next_scores[a] > next_scores[b];
    return plan_->IdTupleLess(&next_choices[a * width],
                              &next_choices[b * width], depth);
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep),
                    idx.end(), ranks_before);

  choices_.assign(keep * width, 0);
  scores_.resize(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    std::copy_n(&next_choices[idx[i] * width], width, &choices_[i * width]);
    scores_[i] = next_scores[idx[i]];
  }
  depth_ = depth;
}

std::vector<PartialParse> BeamSearch::Partials() const {
  std::vector<PartialParse> out;
  const std::size_t width = plan_->size();
  for (std::size_t c = 0; c < scores_.size(); ++c) {
    out.push_back(plan_->Partial(&choices_[c * width], depth_, scores_[c]));
  }
  return out;
}

ParseGraph BeamSearch::Best() const {
  if (!Done()) throw InferenceError("beam search has not finished");
  const std::size_t width = plan_->size();
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores_.size(); ++c) {
    const bool better =
        scores_[c] > scores_[best] ||
        (scores_[c] == scores_[best] &&
         plan_->IdTupleLess(&choices_[c * width], &choices_[best * width],
                            width));
    if (better) best = c;
  }
  return plan_->Materialize(&choices_[best * width], scores_[best]);
}

ParseGraph BeamSearch::Run() {
  while (!Done()) Step();
  return Best();
}

ParseGraph Parse(const AOGrammar& grammar, const RelationModels& models,
                 const ProposalSet& set, const ParseObjective& objective,
                 const BeamConfig& config) {
  if (config.beam_width < 1) throw ValidationError("beam width must be >= 1");
  auto plan = std::make_shared<const internal::ScoringPlan>(
      grammar, models, set, objective, config);
  std::vector<int> widths;
  if (config.widening) {
    for (int w = 1; w < config.beam_width; w *= 2) widths.push_back(w);
  }
  widths.push_back(config.beam_width);
  std::optional<ParseGraph> best;
  for (int w : widths) {
    ParseGraph pg = BeamSearch(plan, w).Run();
    if (!best || pg.total_score > best->total_score) best = std::move(pg);
  }
  return *std::move(best);
}

ParseGraph ParseConstrained(const AOGrammar& grammar,
                            const RelationModels& models,
                            const ProposalSet& set, const AttributeValue& pair,
                            const BeamConfig& config) {
  return Parse(grammar, models, set,
               ParseObjective::Constrained(pair.attr, pair.value), config);
}

ParseGraph ParseUnconstrained(const AOGrammar& grammar,
                              const RelationModels& models,
                              const ProposalSet& set,
                              const BeamConfig& config) {
  return Parse(grammar, models, set, ParseObjective::Unconstrained(), config);
}

std::vector<AttributeValue> AllAttributeValues(const AOGrammar& grammar) {
  std::vector<AttributeValue> out;
  for (const auto& a : grammar.attributes) {
    for (const auto& v : a.domain) out.push_back({a.id, v});
  }
  return out;
}

std::vector<std::pair<AttributeValue, double>> JointParse::Scores() const {
  std::vector<std::pair<AttributeValue, double>> out;
  for (const auto& [pair, pg] : per_pair) out.emplace_back(pair, pg.total_score);
  return out;
}

JointParse SelectFinal(const AOGrammar& grammar, const RelationModels& models,
                       const ProposalSet& set,
                       const std::vector<AttributeValue>& pairs,
                       const BeamConfig& config) {
  if (pairs.empty()) {
    throw InferenceError("select_final needs at least one attribute value");
  }
  std::vector<std::future<ParseGraph>> futures;
  futures.reserve(pairs.size());
  for (const auto& pair : pairs) {
    futures.push_back(std::async(std::launch::async, [&, pair] {
      return ParseConstrained(grammar, models, set, pair, config);
    }));
  }
  JointParse out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.per_pair.emplace_back(pairs[i], futures[i].get());
  }
  for (std::size_t i = 1; i < out.per_pair.size(); ++i) {
    if (out.per_pair[i].second.total_score >
        out.per_pair[out.best_index].second.total_score) {
      out.best_index = i;
    }
  }
  out.best = out.per_pair[out.best_index].second;
  return out;
}

AttributeScores ComputeAttributeScores(
    const std::vector<std::pair<AttributeValue, ParseGraph>>& per_pair,
    const ProposalSet& set, const AttributeAssociation& assoc) {
  AttributeScores out;
  for (const auto& [pair, pg] : per_pair) {
    double s = 0.0;
    for (const auto& state : pg.states) {
      if (!assoc.Contains(state.part, pair.attr)) continue;
      s += set.scores().Get(state.proposal, pair.attr, pair.value);
    }
    out[pair.attr][pair.value] = s;
  }
  return out;
}

std::map<AttrId, std::string> ClassifyAttributes(const AttributeScores& scores,
                                                 const AOGrammar& grammar) {
  std::map<AttrId, std::string> out;
  for (const auto& def : grammar.attributes) {
    auto it = scores.find(def.id);
    if (it == scores.end()) continue;
    const std::string* best = nullptr;
    double best_score = 0.0;
    for (const auto& value : def.domain) {
      auto v = it->second.find(value);
      if (v == it->second.end()) continue;
      if (best == nullptr || v->second > best_score) {
        best = &value;
        best_score = v->second;
      }
    }
    if (best != nullptr) out[def.id] = *best;
  }
  return out;
}

ParseGraph BruteForceParse(const AOGrammar& grammar,
                           const RelationModels& models, const ProposalSet& set,
                           const ParseObjective& objective,
                           const BeamConfig& config) {
  const internal::ScoringPlan plan(grammar, models, set, objective, config);
  const std::size_t n = plan.size();
  double combos = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    combos *= static_cast<double>(plan.step(s).proposals.size());
  }
  if (combos > kBruteForceLimit) {
    throw InferenceError("brute-force parse refused: " +
                         std::to_string(static_cast<long long>(combos)) +
                         " combinations exceed the limit of 1e7");
  }

  std::vector<int> choice(n, 0);
  std::vector<double> running(n + 1, 0.0);
  std::vector<int> best_choice;
  double best_score = 0.0;

  // Iterative odometer over bucket indices; running[s] is the score of the
  // first s steps.
  std::size_t s = 0;
  choice[0] = -1;
  while (true) {
    ++choice[s];
    if (choice[s] >= static_cast<int>(plan.step(s).proposals.size())) {
      if (s == 0) break;
      --s;
      continue;
    }
    running[s + 1] =
        s == 0 ? plan.Increment(0, nullptr, choice[0])
               : running[s] + plan.Increment(s, choice.data(), choice[s]);
    if (s + 1 < n) {
      ++s;
      choice[s] = -1;
      continue;
    }
    const double score = running[n];
    if (best_choice.empty() || score > best_score ||
        (score == best_score &&
         plan.IdTupleLess(choice.data(), best_choice.data(), n))) {
      best_choice = choice;
      best_score = score;
    }
  }
  return plan.Materialize(best_choice.data(), best_score);
}

}  // namespace aaog
