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

#ifndef TAGREFINE_ILP_ENGINE_HPP_
#define TAGREFINE_ILP_ENGINE_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagrefine/candidate_gen.hpp"
#include "tagrefine/label.hpp"
#include "tagrefine/relatedness.hpp"
#include "tagrefine/scoring.hpp"

// 0-1 program over
//   X[i][j]  box i takes its visual candidate j
//   Y[k]     the image takes abstract candidate k
//   Z        X[i][j] * X[m][l] for boxes i < m
//   W        X[i][j] * Y[k]
// maximizing  sum unary * X + sum z.coef * Z + sum w.coef * W  subject to
//   sum_j X[i][j] <= 1 per box, sum_k Y[k] <= max_abstract,
//   optional sum X + sum Y <= budget, optional sum X <= visual_cap,
// and the three linearization rows for every Z and W.
//
// All coefficients are nonnegative, so at an optimum Z and W equal the
// products they stand for and the search can run over X and Y alone.

namespace tagrefine {

struct IlpBox {
  std::string box_id;
  std::vector<Label> labels;
  std::vector<LabelSpace> spaces;
  std::vector<double> unary;  // alpha * (vconf + kappa * gconf)
};

struct ZVar {
  int box_a = 0, cand_a = 0, box_b = 0, cand_b = 0;  // box_a < box_b
  double coef = 0.0;                                  // beta * srel
};

struct WVar {
  int box = 0, cand = 0, abstract = 0;
  double coef = 0.0;  // gamma * aconf
};

struct IlpInstance {
  std::vector<IlpBox> boxes;
  std::vector<Label> abstracts;
  // Only positive coefficients are stored. z is sorted by
  // (box_a, cand_a, box_b, cand_b), w by (box, cand, abstract).
  std::vector<ZVar> z;
  std::vector<WVar> w;
  int max_abstract = kMaxAbstractLabels;
  std::optional<int> budget;      // total labels
  std::optional<int> visual_cap;  // labeled boxes

  std::size_t x_count() const;
  bool empty() const { return boxes.empty() && abstracts.empty(); }
};

// Sorts z and w and drops zero coefficients.
void Canonicalize(IlpInstance& inst);

// Throws ContractViolation on out-of-range indices, z with box_a >= box_b,
// unsorted or duplicate variables, or negative / non-finite coefficients.
void ValidateInstance(const IlpInstance& inst);

// floor(0.8 * boxes).
int VisualCapFor(std::size_t box_count);

// Throws ConfigError for an invalid configuration (for example budget < 1).
IlpInstance BuildInstance(const CandidateSets& candidates,
                          const Hyperparameters& hp, const Relatedness& rel);

inline constexpr int kNoLabel = -1;

struct Assignment {
  std::vector<int> visual;     // per box: candidate index or kNoLabel
  std::vector<int> abstracts;  // chosen abstract indices, ascending
  double objective = 0.0;

  int visual_count() const;
  int label_count() const {
    return visual_count() + static_cast<int>(abstracts.size());
  }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Objective of an assignment, summing X, then Z, then W terms in stored
// order.
double Objective(const IlpInstance& inst, const Assignment& a);

// Empty string when feasible, otherwise the first violated constraint.
std::string FeasibilityError(const IlpInstance& inst, const Assignment& a);

// Assignments whose objective is within this relative distance of the
// optimum are treated as ties.
inline constexpr double kTieTolerance = 1e-10;

// Tie-break among (near-)optimal assignments: fewer labels, then the
// lexicographically smaller sorted label list, then the smaller per-box
// choice vector, then the smaller abstract index list.
bool PreferredOnTie(const IlpInstance& inst, const Assignment& a,
                    const Assignment& b);

// Exact branch-and-bound. Returns the preferred assignment among those
// within kTieTolerance of the maximum.
Assignment SolveExact(const IlpInstance& inst);

inline constexpr double kBruteForceLimit = 1e7;

// Exhaustive reference solver with the same selection rule. Throws SizeError
// when prod(1 + |candidates|) * 2^|abstracts| exceeds kBruteForceLimit.
Assignment BruteForce(const IlpInstance& inst);

// Removes labels one at a time, each time the one whose removal keeps the
// objective highest, until at most budget labels remain.
Assignment TruncateToBudget(const IlpInstance& inst, Assignment a, int budget);

inline constexpr std::string_view kGlobalBox = "GLOBAL";

struct RefinedLabel {
  Label label;
  LabelSpace space = LabelSpace::kConcrete;
  std::string box;  // box id, or kGlobalBox for abstract labels

  friend bool operator==(const RefinedLabel&, const RefinedLabel&) = default;
};

// Visual labels in box order, then abstract labels by label text. Throws
// ContractViolation for an infeasible assignment.
std::vector<RefinedLabel> ExtractLabels(const Assignment& a,
                                        const IlpInstance& inst);

// LP-format dump with variables X_i_j, Y_k, Z_i_j_m_k, W_i_j_k.
void WriteLp(const IlpInstance& inst, std::ostream& out);

}  // namespace tagrefine

#endif  // TAGREFINE_ILP_ENGINE_HPP_
