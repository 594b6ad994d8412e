// Copyright 2026 The tagrefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TAGREFINE_SCORING_HPP_
#define TAGREFINE_SCORING_HPP_

#include <cstddef>
#include <span>

#include "tagrefine/detection.hpp"
#include "tagrefine/knowledge_store.hpp"
#include "tagrefine/relatedness.hpp"

namespace tagrefine {

inline constexpr int kMaxAbstractLabels = 5;
inline constexpr int kDefaultLabelBudget = 5;
inline constexpr std::size_t kDefaultAbstractCap = 25;

enum class BudgetMode {
  kConstraint,  // total label count is an ILP constraint
  kTruncate,    // solve unconstrained, then drop least-contributing labels
};

struct Hyperparameters {
  double alpha = 1.0;  // evidence (vconf + kappa * gconf)
  double beta = 1.0;   // visual-visual coherence
  double gamma = 1.0;  // visual-abstract coherence
  double kappa = 1.0;  // generalization weight inside the alpha term
  double delta = 0.5;  // cosine share of srel
  int budget = kDefaultLabelBudget;
  BudgetMode budget_mode = BudgetMode::kConstraint;
  // Caps labeled boxes at floor(0.8 * boxes).
  bool visir_star = false;
  double tau_s = 0.1;  // vsim threshold for the similar set S(l)
  std::size_t abstract_cap = kDefaultAbstractCap;

  RelatednessConfig relatedness() const { return {delta, ColocNorm::kGlobalMax}; }
};

// Throws ConfigError on negative or non-finite weights, delta outside
// [0, 1], tau_s outside (0, 1], budget < 1 or abstract_cap < 1.
void ValidateHyperparameters(const Hyperparameters& hp);

// Confidence that label belongs to box. For an original candidate this is the
// detector confidence; for a visually similar label it is
// sum over originals l' of conf(l') * vsim(l', label), counting only pairs
// with vsim >= tau_s (outside S(l') the similarity is 0).
// Throws ContractViolation when label is neither original nor similar.
double VisualConfidence(const BoundingBox& box, const Label& label,
                        const VsimTable& vsim, double tau_s);

// Generalization confidence of candidate h in a box whose original and
// similar labels are box_visual_labels: sum of srel(h, l) over those l with
// h among their retained hypernyms. Exactly 0 when h is itself one of
// box_visual_labels.
template <class SrelFn>
double GeneralizationConfidence(std::span<const Label> box_visual_labels,
                                const Label& h, const HypernymIndex& edges,
                                SrelFn&& srel) {
  for (const Label& l : box_visual_labels) {
    if (l == h) return 0.0;
  }
  double sum = 0.0;
  for (const Label& l : box_visual_labels) {
    if (edges.IsParent(l, h)) sum += srel(h, l);
  }
  return sum;
}

// Assertion score times srel(visual, assertion object).
template <class SrelFn>
double AbstractionConfidence(const Label& visual,
                             const AbstractAssertion& assertion,
                             SrelFn&& srel) {
  return assertion.score * srel(visual, assertion.object);
}

}  // namespace tagrefine

#endif  // TAGREFINE_SCORING_HPP_
