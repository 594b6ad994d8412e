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

#include <map>
#include <utility>

#include "doctest.h"
#include "tagrefine/error.hpp"

namespace tagrefine {
namespace {

BoundingBox Box(std::initializer_list<std::pair<const char*, double>> c) {
  BoundingBox b{"0", {}};
  for (const auto& [label, conf] : c) b.candidates.push_back({Label(label), conf});
  return b;
}

TEST_CASE("visual confidence of an original is the detector confidence") {
  CHECK(VisualConfidence(Box({{"a", 0.7}}), Label("a"), VsimTable{}, 0.1) ==
        0.7);
}

TEST_CASE("visual confidence of a similar label") {
  VsimTable v;
  v.Set(Label("a"), Label("s"), 0.4);
  v.Set(Label("b"), Label("s"), 0.5);
  CHECK(VisualConfidence(Box({{"a", 0.5}}), Label("s"), v, 0.1) ==
        doctest::Approx(0.2));
  // Hand sum: 0.5 * 0.4 + 0.3 * 0.5.
  const double expected = 0.5 * 0.4 + 0.3 * 0.5;
  CHECK(expected == doctest::Approx(0.35));
  CHECK(VisualConfidence(Box({{"a", 0.5}, {"b", 0.3}}), Label("s"), v, 0.1) ==
        doctest::Approx(expected).epsilon(1e-12));
  // Only originals with s in their similar set contribute.
  CHECK(VisualConfidence(Box({{"a", 0.5}, {"b", 0.3}}), Label("s"), v, 0.45) ==
        doctest::Approx(0.15));
}

TEST_CASE("visual confidence outside original and similar is an error") {
  CHECK_THROWS_AS(
      VisualConfidence(Box({{"a", 0.5}}), Label("z"), VsimTable{}, 0.1),
      ContractViolation);
}

TEST_CASE("generalization confidence") {
  const std::vector<HypernymEdge> raw = {{Label("ant"), Label("insect"), 1},
                                         {Label("bee"), Label("insect"), 1}};
  const HypernymIndex edges = HypernymIndex::Build(raw, nullptr, 0);
  const std::map<std::pair<std::string, std::string>, double> table = {
      {{"insect", "ant"}, 0.6}, {{"insect", "bee"}, 0.3}};
  auto srel = [&](const Label& a, const Label& b) {
    auto it = table.find({a.str(), b.str()});
    return it == table.end() ? 0.0 : it->second;
  };
  const std::vector<Label> one = {Label("ant")};
  const std::vector<Label> two = {Label("ant"), Label("bee")};
  CHECK(GeneralizationConfidence(one, Label("insect"), edges, srel) == 0.6);
  CHECK(GeneralizationConfidence(two, Label("insect"), edges, srel) ==
        doctest::Approx(0.9));
  // An original or similar label has no generalization confidence.
  CHECK(GeneralizationConfidence(two, Label("ant"), edges, srel) == 0.0);
}

TEST_CASE("abstraction confidence") {
  const AbstractAssertion a{Label("baby"), Relation::kHasProperty,
                            Label("newborn"), 10.17};
  auto half = [](const Label&, const Label&) { return 0.5; };
  auto zero = [](const Label&, const Label&) { return 0.0; };
  auto one = [](const Label&, const Label&) { return 1.0; };
  CHECK(AbstractionConfidence(Label("baby"), a, half) ==
        doctest::Approx(5.085));
  CHECK(AbstractionConfidence(Label("baby"), a, zero) == 0.0);
  AbstractAssertion unit = a;
  unit.score = 1.0;
  CHECK(AbstractionConfidence(Label("baby"), unit, one) == 1.0);
}

TEST_CASE("hyperparameter validation") {
  Hyperparameters hp;
  CHECK_NOTHROW(ValidateHyperparameters(hp));
  hp.budget = 0;
  CHECK_THROWS_AS(ValidateHyperparameters(hp), ConfigError);
  hp = {};
  hp.alpha = -1;
  CHECK_THROWS_AS(ValidateHyperparameters(hp), ConfigError);
  hp = {};
  hp.tau_s = 0;
  CHECK_THROWS_AS(ValidateHyperparameters(hp), ConfigError);
  hp = {};
  hp.delta = 2;
  CHECK_THROWS_AS(ValidateHyperparameters(hp), ConfigError);
}

}  // namespace
}  // namespace tagrefine
