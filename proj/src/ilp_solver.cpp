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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ilp_selection.hpp"
#include "tagrefine/ilp_engine.hpp"

namespace tagrefine {

namespace {

constexpr int kUnbounded = std::numeric_limits<int>::max();
// Extra room on pruning decisions for rounding in the bound arithmetic.
constexpr double kBoundSlack = 1e-12;

// Dense coefficient tables. Boxes are decided in index order, so a pair
// (i, m) with i < m is always looked up after box i is fixed.
class Search {
 public:
  explicit Search(const IlpInstance& inst) : inst_(inst) {
    n_ = static_cast<int>(inst.boxes.size());
    k_ = static_cast<int>(inst.abstracts.size());
    sizes_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      sizes_[i] = static_cast<int>(inst.boxes[i].labels.size());
    }
    pair_.assign(static_cast<std::size_t>(n_) * n_, {});
    for (int i = 0; i < n_; ++i) {
      for (int m = i + 1; m < n_; ++m) {
        pair_[Idx(i, m)].assign(static_cast<std::size_t>(sizes_[i]) * sizes_[m], 0.0);
      }
    }
    for (const ZVar& v : inst.z) {
      pair_[Idx(v.box_a, v.box_b)][v.cand_a * sizes_[v.box_b] + v.cand_b] = v.coef;
    }
    w_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      w_[i].assign(static_cast<std::size_t>(sizes_[i]) * k_, 0.0);
    }
    for (const WVar& v : inst.w) w_[v.box][v.cand * k_ + v.abstract] = v.coef;

    // rowmax_[(i, m)][c] = max over m's options of pair(i, c, m, .).
    rowmax_.assign(static_cast<std::size_t>(n_) * n_, {});
    for (int i = 0; i < n_; ++i) {
      for (int m = i + 1; m < n_; ++m) {
        auto& rm = rowmax_[Idx(i, m)];
        rm.assign(sizes_[i], 0.0);
        for (int c = 0; c < sizes_[i]; ++c) {
          for (int d = 0; d < sizes_[m]; ++d) {
            rm[c] = std::max(rm[c], Pair(i, c, m, d));
          }
        }
      }
    }
    // suffix_w_[d][k] = sum over boxes m >= d of max_c w(m, c, k).
    suffix_w_.assign(n_ + 1, std::vector<double>(k_, 0.0));
    for (int d = n_ - 1; d >= 0; --d) {
      for (int k = 0; k < k_; ++k) {
        double best = 0.0;
        for (int c = 0; c < sizes_[d]; ++c) best = std::max(best, W(d, c, k));
        suffix_w_[d][k] = suffix_w_[d + 1][k] + best;
      }
    }
    // An option with no positive coefficient anywhere scores exactly like
    // leaving the box empty while costing a label, so it never wins.
    dead_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      dead_[i].assign(sizes_[i], true);
      for (int c = 0; c < sizes_[i]; ++c) {
        if (inst.boxes[i].unary[c] > 0.0) dead_[i][c] = false;
      }
    }
    for (const ZVar& v : inst.z) {
      dead_[v.box_a][v.cand_a] = false;
      dead_[v.box_b][v.cand_b] = false;
    }
    for (const WVar& v : inst.w) dead_[v.box][v.cand] = false;

    budget_ = inst.budget.value_or(kUnbounded);
    visual_cap_ = std::min(inst.visual_cap.value_or(kUnbounded), budget_);
    choice_.assign(n_, kNoLabel);
    partial_w_.assign(n_ + 1, std::vector<double>(k_, 0.0));
  }

  Assignment Run() {
    Descend(0, 0.0, 0);
    return pool_.Select(inst_);
  }

 private:
  std::size_t Idx(int i, int m) const {
    return static_cast<std::size_t>(i) * n_ + m;
  }
  double Pair(int i, int c, int m, int d) const {
    return pair_[Idx(i, m)][c * sizes_[m] + d];
  }
  double W(int i, int c, int k) const { return w_[i][c * k_ + k]; }

  bool Prunable(double bound) const {
    if (pool_.empty()) return false;
    const double best = pool_.best();
    return bound < internal::TieFloor(best) - kBoundSlack * std::abs(best);
  }

  int AbstractRoom(int visual_count) const {
    int room = inst_.max_abstract;
    if (budget_ != kUnbounded) room = std::min(room, budget_ - visual_count);
    return std::max(room, 0);
  }

  // Sum of the `room` largest positive entries.
  static double TopSum(std::vector<double>& gains, int room) {
    if (room <= 0) return 0.0;
    if (static_cast<int>(gains.size()) > room) {
      std::nth_element(gains.begin(), gains.begin() + (room - 1), gains.end(),
                       std::greater<>());
      gains.resize(room);
    }
    double s = 0.0;
    for (double g : gains) s += std::max(g, 0.0);
    return s;
  }

  double UpperBound(int depth, double partial, int visual_count) {
    std::vector<double> per_box;
    per_box.reserve(n_ - depth);
    for (int m = depth; m < n_; ++m) {
      double best = 0.0;
      for (int c = 0; c < sizes_[m]; ++c) {
        if (dead_[m][c]) continue;
        double v = inst_.boxes[m].unary[c];
        for (int i = 0; i < depth; ++i) {
          if (choice_[i] != kNoLabel) v += Pair(i, choice_[i], m, c);
        }
        for (int m2 = m + 1; m2 < n_; ++m2) v += rowmax_[Idx(m, m2)][c];
        best = std::max(best, v);
      }
      per_box.push_back(best);
    }
    const int visual_room =
        visual_cap_ == kUnbounded ? n_ : std::max(visual_cap_ - visual_count, 0);
    double bound = partial + TopSum(per_box, visual_room);

    std::vector<double> gains(k_);
    for (int k = 0; k < k_; ++k) {
      gains[k] = partial_w_[depth][k] + suffix_w_[depth][k];
    }
    return bound + TopSum(gains, AbstractRoom(visual_count));
  }

  void Descend(int depth, double partial, int visual_count) {
    if (depth == n_) {
      Leaf(partial, visual_count);
      return;
    }
    if (Prunable(UpperBound(depth, partial, visual_count))) return;

    struct Option {
      int cand;
      double gain;
    };
    std::vector<Option> options;
    options.push_back({kNoLabel, 0.0});
    if (visual_count < visual_cap_) {
      for (int c = 0; c < sizes_[depth]; ++c) {
        if (dead_[depth][c]) continue;
        double g = inst_.boxes[depth].unary[c];
        for (int i = 0; i < depth; ++i) {
          if (choice_[i] != kNoLabel) g += Pair(i, choice_[i], depth, c);
        }
        options.push_back({c, g});
      }
    }
    std::stable_sort(options.begin(), options.end(),
                     [](const Option& a, const Option& b) { return a.gain > b.gain; });

    for (const Option& opt : options) {
      choice_[depth] = opt.cand;
      auto& next_w = partial_w_[depth + 1];
      next_w = partial_w_[depth];
      if (opt.cand != kNoLabel) {
        for (int k = 0; k < k_; ++k) next_w[k] += W(depth, opt.cand, k);
      }
      Descend(depth + 1, partial + opt.gain,
              visual_count + (opt.cand != kNoLabel ? 1 : 0));
    }
    choice_[depth] = kNoLabel;
  }

  // Boxes fixed: enumerate abstract subsets that can reach the tie band.
  void Leaf(double partial, int visual_count) {
    const auto& gains = partial_w_[n_];
    std::vector<int> items;
    for (int k = 0; k < k_; ++k) {
      // A zero-gain abstract adds nothing but a label.
      if (gains[k] > 0.0) items.push_back(k);
    }
    std::stable_sort(items.begin(), items.end(),
                     [&](int a, int b) { return gains[a] > gains[b]; });
    const int room = AbstractRoom(visual_count);
    std::vector<int> chosen;
    Subsets(items, 0, room, partial, chosen, gains);
  }

  void Subsets(const std::vector<int>& items, std::size_t pos, int room,
               double value, std::vector<int>& chosen,
               const std::vector<double>& gains) {
    Offer(chosen);
    if (room == 0) return;
    for (std::size_t q = pos; q < items.size(); ++q) {
      // items are sorted by gain, so the best completion through q takes
      // q and the next room-1 items.
      double bound = value;
      for (std::size_t t = q; t < items.size() && t < q + room; ++t) {
        bound += gains[items[t]];
      }
      if (Prunable(bound)) break;
      chosen.push_back(items[q]);
      Subsets(items, q + 1, room - 1, value + gains[items[q]], chosen, gains);
      chosen.pop_back();
    }
  }

  void Offer(const std::vector<int>& chosen_abstracts) {
    Assignment a;
    a.visual = choice_;
    a.abstracts = chosen_abstracts;
    std::sort(a.abstracts.begin(), a.abstracts.end());
    a.objective = Evaluate(a);
    pool_.Offer(std::move(a));
  }

  // Same summation order as Objective(): X terms, then Z in (i, j, m, k)
  // order, then W in (i, j, k) order. Absent variables contribute +0.0,
  // which leaves the running sum bit-identical.
  double Evaluate(const Assignment& a) const {
    double sum = 0.0;
    for (int i = 0; i < n_; ++i) {
      if (a.visual[i] != kNoLabel) sum += inst_.boxes[i].unary[a.visual[i]];
    }
    for (int i = 0; i < n_; ++i) {
      if (a.visual[i] == kNoLabel) continue;
      for (int m = i + 1; m < n_; ++m) {
        if (a.visual[m] == kNoLabel) continue;
        const double c = Pair(i, a.visual[i], m, a.visual[m]);
        if (c > 0.0) sum += c;
      }
    }
    for (int i = 0; i < n_; ++i) {
      if (a.visual[i] == kNoLabel) continue;
      for (int k : a.abstracts) {
        const double c = W(i, a.visual[i], k);
        if (c > 0.0) sum += c;
      }
    }
    return sum;
  }

  const IlpInstance& inst_;
  int n_ = 0;
  int k_ = 0;
  int budget_ = kUnbounded;
  int visual_cap_ = kUnbounded;
  std::vector<int> sizes_;
  std::vector<std::vector<double>> pair_;
  std::vector<std::vector<double>> rowmax_;
  std::vector<std::vector<double>> w_;
  std::vector<std::vector<double>> suffix_w_;
  std::vector<std::vector<bool>> dead_;
  std::vector<int> choice_;
  std::vector<std::vector<double>> partial_w_;
  internal::NearOptimalPool pool_;
};

}  // namespace

Assignment SolveExact(const IlpInstance& inst) {
  ValidateInstance(inst);
  return Search(inst).Run();
}

}  // namespace tagrefine
