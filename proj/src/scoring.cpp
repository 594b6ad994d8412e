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

#include "tagrefine/scoring.hpp"

#include <cmath>

#include "tagrefine/error.hpp"

namespace tagrefine {

void ValidateHyperparameters(const Hyperparameters& hp) {
  for (double w : {hp.alpha, hp.beta, hp.gamma, hp.kappa}) {
    if (!std::isfinite(w) || w < 0) {
      throw ConfigError("weights alpha, beta, gamma, kappa must be finite and >= 0");
    }
  }
  ValidateRelatednessConfig(hp.relatedness());
  if (!(hp.tau_s > 0.0 && hp.tau_s <= 1.0)) {
    throw ConfigError("tau_s must lie in (0, 1]");
  }
  if (hp.budget < 1) throw ConfigError("label budget must be >= 1");
  if (hp.abstract_cap < 1) throw ConfigError("abstract cap must be >= 1");
}

double VisualConfidence(const BoundingBox& box, const Label& label,
                        const VsimTable& vsim, double tau_s) {
  for (const Candidate& c : box.candidates) {
    if (c.label == label) return c.conf;
  }
  double sum = 0.0;
  bool similar = false;
  for (const Candidate& c : box.candidates) {
    const double s = vsim.Score(c.label, label);
    if (s >= tau_s && s > 0.0) {
      sum += c.conf * s;
      similar = true;
    }
  }
  if (!similar) {
    throw ContractViolation("'" + label.str() +
                            "' is neither detected in nor similar to box '" +
                            box.box_id + "'");
  }
  return sum;
}

}  // namespace tagrefine
