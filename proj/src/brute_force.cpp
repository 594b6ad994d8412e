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

#include <cmath>

#include "ilp_selection.hpp"
#include "tagrefine/error.hpp"
#include "tagrefine/ilp_engine.hpp"

namespace tagrefine {

// Reference solver: every X choice vector times every Y subset, with Z and
// W taken as the products they linearize. Shares only the objective
// definition and the tie-break with SolveExact.
Assignment BruteForce(const IlpInstance& inst) {
  ValidateInstance(inst);
  const int n = static_cast<int>(inst.boxes.size());
  const int k = static_cast<int>(inst.abstracts.size());

  double space = std::ldexp(1.0, k);
  for (const IlpBox& b : inst.boxes) space *= 1.0 + double(b.labels.size());
  if (space > kBruteForceLimit) {
    throw SizeError("instance has " + std::to_string(space) +
                    " assignments, limit " + std::to_string(kBruteForceLimit));
  }

  internal::NearOptimalPool pool;
  Assignment a;
  a.visual.assign(n, kNoLabel);

  while (true) {
    // X and Z part, then every Y subset on top. W terms come last in the
    // stored order, so adding them after the Z sum is the same summation.
    double xz = 0.0;
    for (int i = 0; i < n; ++i) {
      if (a.visual[i] != kNoLabel) xz += inst.boxes[i].unary[a.visual[i]];
    }
    for (const ZVar& v : inst.z) {
      if (a.visual[v.box_a] == v.cand_a && a.visual[v.box_b] == v.cand_b) {
        xz += v.coef;
      }
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      a.abstracts.clear();
      for (int t = 0; t < k; ++t) {
        if (mask >> t & 1) a.abstracts.push_back(t);
      }
      if (!FeasibilityError(inst, a).empty()) continue;
      double total = xz;
      for (const WVar& v : inst.w) {
        if (a.visual[v.box] == v.cand && (mask >> v.abstract & 1)) total += v.coef;
      }
      a.objective = total;
      pool.Offer(a);
    }

    // Odometer over per-box choices, kNoLabel first.
    int i = 0;
    for (; i < n; ++i) {
      if (++a.visual[i] < static_cast<int>(inst.boxes[i].labels.size())) break;
      a.visual[i] = kNoLabel;
    }
    if (i == n) break;
  }
  return pool.Select(inst);
}

}  // namespace tagrefine
