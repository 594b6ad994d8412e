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

#ifndef TAGREFINE_SRC_ILP_SELECTION_HPP_
#define TAGREFINE_SRC_ILP_SELECTION_HPP_

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "tagrefine/ilp_engine.hpp"

namespace tagrefine::internal {

// Lowest objective still counted as a tie with best.
inline double TieFloor(double best) {
  return best - kTieTolerance * std::abs(best);
}

// Collects every offered assignment that may end up within the tie band of
// the final maximum, then applies the tie-break. The result depends only on
// the set of assignments offered, not on their order.
class NearOptimalPool {
 public:
  void Offer(Assignment a) {
    if (!pool_.empty() && a.objective < TieFloor(best_)) return;
    if (pool_.empty() || a.objective > best_) {
      best_ = a.objective;
      if (pool_.size() > 64) Compact();
    }
    pool_.push_back(std::move(a));
  }

  bool empty() const { return pool_.empty(); }
  double best() const {
    return pool_.empty() ? -std::numeric_limits<double>::infinity() : best_;
  }

  Assignment Select(const IlpInstance& inst) const {
    const Assignment* winner = nullptr;
    const double floor = TieFloor(best_);
    for (const Assignment& a : pool_) {
      if (a.objective < floor) continue;
      if (!winner || PreferredOnTie(inst, a, *winner)) winner = &a;
    }
    return *winner;
  }

 private:
  void Compact() {
    const double floor = TieFloor(best_);
    std::erase_if(pool_, [&](const Assignment& a) { return a.objective < floor; });
  }

  std::vector<Assignment> pool_;
  double best_ = 0.0;
};

}  // namespace tagrefine::internal

#endif  // TAGREFINE_SRC_ILP_SELECTION_HPP_
