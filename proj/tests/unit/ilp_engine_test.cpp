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

#include "tagrefine/ilp_engine.hpp"

#include <sstream>

#include "doctest.h"
#include "tagrefine/error.hpp"

namespace tagrefine {
namespace {

IlpBox MakeBox(const std::string& id,
               std::initializer_list<std::pair<const char*, double>> c) {
  IlpBox b;
  b.box_id = id;
  for (const auto& [label, u] : c) {
    b.labels.emplace_back(label);
    b.spaces.push_back(LabelSpace::kConcrete);
    b.unary.push_back(u);
  }
  return b;
}

// Two boxes {a, b} and {c, d}; only (b, d) is related.
IlpInstance TwoBoxExample() {
  IlpInstance inst;
  inst.boxes = {MakeBox("0", {{"a", 0.5}, {"b", 0.4}}),
                MakeBox("1", {{"c", 0.5}, {"d", 0.4}})};
  inst.z = {{0, 1, 1, 1, 0.9}};
  inst.budget = 5;
  Canonicalize(inst);
  return inst;
}

TEST_CASE("two-box example picks b and d") {
  const IlpInstance inst = TwoBoxExample();
  // Enumerate the nine box-choice combinations by hand.
  const double u[2][2] = {{0.5, 0.4}, {0.5, 0.4}};
  double best = -1;
  int best_i = -2, best_m = -2;
  for (int i = -1; i < 2; ++i) {
    for (int m = -1; m < 2; ++m) {
      double v = (i >= 0 ? u[0][i] : 0) + (m >= 0 ? u[1][m] : 0);
      if (i == 1 && m == 1) v += 0.9;
      if (v > best) best = v, best_i = i, best_m = m;
    }
  }
  CHECK(best == doctest::Approx(1.7));
  const Assignment a = SolveExact(inst);
  CHECK(a.visual == std::vector<int>{best_i, best_m});
  CHECK(a.visual == std::vector<int>{1, 1});
  CHECK(a.objective == doctest::Approx(1.7));
  CHECK(BruteForce(inst) == a);
  const auto labels = ExtractLabels(a, inst);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].label == Label("b"));
  CHECK(labels[1].label == Label("d"));
}

TEST_CASE("empty instance") {
  const IlpInstance inst;
  const Assignment a = SolveExact(inst);
  CHECK(a.visual.empty());
  CHECK(a.abstracts.empty());
  CHECK(a.objective == 0.0);
  CHECK(BruteForce(inst) == a);
  CHECK(ExtractLabels(a, inst).empty());
}

TEST_CASE("single candidate is chosen") {
  IlpInstance inst;
  inst.boxes = {MakeBox("0", {{"a", 0.7}})};
  const Assignment a = SolveExact(inst);
  CHECK(a.visual == std::vector<int>{0});
  CHECK(a.objective == doctest::Approx(0.7));
}

TEST_CASE("zero-value labels are left out") {
  IlpInstance inst;
  inst.boxes = {MakeBox("0", {{"a", 0.0}}), MakeBox("1", {{"b", 0.3}})};
  inst.abstracts = {Label("p")};
  const Assignment a = SolveExact(inst);
  CHECK(a.visual == std::vector<int>{kNoLabel, 0});
  CHECK(a.abstracts.empty());
  CHECK(BruteForce(inst) == a);
}

TEST_CASE("ties prefer the smaller label list") {
  IlpInstance inst;
  inst.boxes = {MakeBox("0", {{"zebra", 0.5}, {"ant", 0.5}})};
  CHECK(SolveExact(inst).visual == std::vector<int>{1});
}

TEST_CASE("budget, abstract and visual caps are respected") {
  IlpInstance inst;
  for (int i = 0; i < 5; ++i) {
    inst.boxes.push_back(MakeBox(std::to_string(i), {{"v", 1.0}}));
  }
  for (const char* p : {"p", "q", "r", "s", "t", "u", "w"}) {
    inst.abstracts.emplace_back(p);
    inst.w.push_back({0, 0, static_cast<int>(inst.abstracts.size()) - 1, 1.0});
  }
  Canonicalize(inst);
  Assignment a = SolveExact(inst);
  CHECK(a.visual_count() == 5);
  CHECK(a.abstracts.size() == 5);

  inst.visual_cap = VisualCapFor(inst.boxes.size());
  CHECK(*inst.visual_cap == 4);
  a = SolveExact(inst);
  CHECK(a.visual_count() == 4);

  inst.budget = 3;
  a = SolveExact(inst);
  CHECK(a.label_count() == 3);
  CHECK(FeasibilityError(inst, a).empty());
  CHECK(BruteForce(inst) == a);
}

TEST_CASE("visual cap is floor of 80 percent") {
  CHECK(VisualCapFor(0) == 0);
  CHECK(VisualCapFor(1) == 0);
  CHECK(VisualCapFor(2) == 1);
  CHECK(VisualCapFor(5) == 4);
  CHECK(VisualCapFor(10) == 8);
  CHECK(VisualCapFor(11) == 8);
}

TEST_CASE("build instance counts") {
  CandidateSets sets;
  for (const char* id : {"0", "1"}) {
    BoxCandidates bc;
    bc.box_id = id;
    bc.candidates.push_back({Label(std::string("x") + id), Origin::kOriginal,
                             0.5, 0.0, {}});
    bc.candidates.push_back({Label(std::string("y") + id), Origin::kOriginal,
                             0.4, 0.0, {}});
    sets.boxes.push_back(bc);
  }
  sets.abstracts.push_back({Label("p"), {}, 1.0, 0.0});
  EmbeddingTable e;
  e.Insert("x0", {1, 0});
  e.Insert("x1", {1, 0});
  e.Insert("y0", {1, 1});
  e.Insert("y1", {0, 1});
  e.Insert("p", {1, 0});
  ColocTable c;
  Hyperparameters hp;
  const Relatedness rel(hp.relatedness(), e, c);
  const IlpInstance inst = BuildInstance(sets, hp, rel);
  CHECK(inst.x_count() + inst.abstracts.size() == 5);
  CHECK(inst.z.size() <= 4);
  CHECK(inst.w.size() <= 4);
  CHECK(inst.budget == 5);
  CHECK_FALSE(inst.visual_cap.has_value());

  CHECK(BuildInstance(CandidateSets{}, hp, rel).empty());

  hp.budget = 0;
  CHECK_THROWS_AS(BuildInstance(sets, hp, rel), ConfigError);
}

TEST_CASE("build instance with the visual cap") {
  CandidateSets sets;
  for (int i = 0; i < 5; ++i) {
    BoxCandidates bc;
    bc.box_id = std::to_string(i);
    bc.candidates.push_back({Label("a"), Origin::kOriginal, 0.5, 0.0, {}});
    sets.boxes.push_back(bc);
  }
  EmbeddingTable e;
  ColocTable c;
  Hyperparameters hp;
  hp.visir_star = true;
  const IlpInstance inst =
      BuildInstance(sets, hp, Relatedness(hp.relatedness(), e, c));
  CHECK(inst.visual_cap == 4);
}

TEST_CASE("extract labels") {
  IlpInstance inst;
  inst.boxes = {MakeBox("b0", {{"dog", 1.0}}), MakeBox("b1", {{"dog", 1.0}})};
  inst.abstracts = {Label("pet")};
  inst.w = {{0, 0, 0, 0.5}};
  Assignment one{{0, kNoLabel}, {0}, 0.0};
  auto labels = ExtractLabels(one, inst);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].box == "b0");
  CHECK(labels[1].label == Label("pet"));
  CHECK(labels[1].space == LabelSpace::kAbstract);
  CHECK(labels[1].box == kGlobalBox);

  Assignment both{{0, 0}, {}, 0.0};
  labels = ExtractLabels(both, inst);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].label == labels[1].label);
  CHECK(labels[0].box != labels[1].box);

  inst.budget = 1;
  CHECK_THROWS_AS(ExtractLabels(both, inst), ContractViolation);
}

TEST_CASE("truncation drops the weakest labels") {
  IlpInstance inst;
  inst.boxes = {MakeBox("0", {{"a", 0.9}}), MakeBox("1", {{"b", 0.1}}),
                MakeBox("2", {{"c", 0.2}})};
  inst.z = {{0, 0, 2, 0, 0.5}};
  Canonicalize(inst);
  Assignment full = SolveExact(inst);
  CHECK(full.visual == std::vector<int>{0, 0, 0});
  const Assignment cut = TruncateToBudget(inst, full, 2);
  CHECK(cut.visual == std::vector<int>{0, kNoLabel, 0});
  CHECK(cut.objective == Objective(inst, cut));
}

TEST_CASE("brute force refuses oversized instances") {
  IlpInstance inst;
  for (int i = 0; i < 12; ++i) {
    inst.boxes.push_back(MakeBox(std::to_string(i),
                                 {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}}));
  }
  CHECK_THROWS_AS(BruteForce(inst), SizeError);
}

TEST_CASE("LP dump names every variable family") {
  IlpInstance inst = TwoBoxExample();
  inst.abstracts = {Label("p")};
  inst.w = {{0, 0, 0, 0.25}};
  std::ostringstream out;
  WriteLp(inst, out);
  const std::string lp = out.str();
  for (const char* v : {"X_0_1", "Y_0", "Z_0_1_1_1", "W_0_0_0", "Maximize",
                        "Subject To", "Binary", "End"}) {
    CHECK(lp.find(v) != std::string::npos);
  }
}

TEST_CASE("instance validation") {
  IlpInstance inst = TwoBoxExample();
  inst.z.push_back({1, 0, 0, 0, 0.5});
  CHECK_THROWS_AS(ValidateInstance(inst), ContractViolation);
  inst = TwoBoxExample();
  inst.boxes[0].unary[0] = -1;
  CHECK_THROWS_AS(SolveExact(inst), ContractViolation);
}

}  // namespace
}  // namespace tagrefine
