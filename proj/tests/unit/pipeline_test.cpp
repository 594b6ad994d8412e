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

#include "tagrefine/pipeline.hpp"

#include <atomic>
#include <stdexcept>

#include "doctest.h"
#include "generators.hpp"
#include "parallel.hpp"
#include "tagrefine/error.hpp"

namespace tagrefine {
namespace {

TEST_CASE("labels are canonical") {
  CHECK(Label("  Green   Mamba ").str() == "green mamba");
  CHECK(Label("a") == Label("A"));
  CHECK_FALSE(Label::Parse("   ").has_value());
  CHECK_THROWS_AS(Label(""), ContractViolation);
  CHECK(ParseLabelSpace("XL") == LabelSpace::kExtended);
  CHECK_FALSE(ParseLabelSpace("ZL").has_value());
}

TEST_CASE("detection records parse and round-trip") {
  const DetectionRecord r = ParseDetectionJson(
      R"({"image":"x","boxes":[{"id":"7","candidates":[{"label":"Dog","conf":0.25}]},)"
      R"({"candidates":[{"label":"cat","conf":0.5}]}]})");
  REQUIRE(r.boxes.size() == 2);
  CHECK(r.boxes[0].box_id == "7");
  CHECK(r.boxes[1].box_id == "1");  // position when the id is missing
  CHECK(r.boxes[0].candidates[0].label == Label("dog"));
  const DetectionRecord back = ParseDetectionJson(DetectionToJson(r));
  CHECK(back.image_id == r.image_id);
  CHECK(back.boxes[1].candidates[0].conf == 0.5);
  CHECK_THROWS_AS(
      ParseDetectionJson(
          R"({"image":"x","boxes":[{"candidates":[{"label":"a","conf":0}]}]})"),
      ContractViolation);
}

TEST_CASE("refined output round-trips") {
  testing::Gen g(11);
  const KnowledgeStore store = testing::LoadFixtureKnowledge();
  for (int i = 0; i < 50; ++i) {
    const DetectionRecord r = testing::RandomRecord(g, "img" + std::to_string(i));
    const RefinedImage img = RefineImage(r, store, Hyperparameters{});
    CHECK(ParseRefinedJson(RefinedToJson(img)) == img);
  }
}

TEST_CASE("snake image keeps snake and drops cucumber") {
  const KnowledgeStore store = testing::LoadFixtureKnowledge();
  const auto records = LoadDetections(testing::FixturePath("detections.jsonl"));
  REQUIRE(records[0].image_id == "snake_scene");
  const RefinedImage img = RefineImage(records[0], store, Hyperparameters{});
  bool snake = false;
  for (const RefinedLabel& l : img.labels) {
    CHECK(l.label != Label("cucumber"));
    if (l.label == Label("snake")) snake = true;
  }
  CHECK(snake);
}

TEST_CASE("visual cap on a five-box image") {
  const KnowledgeStore store = testing::LoadFixtureKnowledge();
  const auto records = LoadDetections(testing::FixturePath("detections.jsonl"));
  const DetectionRecord& five = records[4];
  REQUIRE(five.boxes.size() == 5);
  Hyperparameters hp;
  hp.visir_star = true;
  hp.budget = 10;
  const RefinedImage img = RefineImage(five, store, hp);
  int visual = 0;
  for (const RefinedLabel& l : img.labels) {
    if (l.space != LabelSpace::kAbstract) ++visual;
  }
  CHECK(visual <= 4);
}

TEST_CASE("truncate mode stays within the budget") {
  const KnowledgeStore store = testing::LoadFixtureKnowledge();
  Hyperparameters hp;
  hp.budget_mode = BudgetMode::kTruncate;
  hp.budget = 2;
  for (const auto& r :
       LoadDetections(testing::FixturePath("detections.jsonl"))) {
    CHECK(RefineImage(r, store, hp).labels.size() <= 2);
  }
}

TEST_CASE("refine all keeps input order for any job count") {
  const KnowledgeStore store = testing::LoadFixtureKnowledge();
  testing::Gen g(5);
  std::vector<DetectionRecord> records;
  for (int i = 0; i < 40; ++i) {
    records.push_back(testing::RandomRecord(g, "img" + std::to_string(i)));
  }
  const auto one = RefineAll(records, store, Hyperparameters{}, 1);
  const auto four = RefineAll(records, store, Hyperparameters{}, 4);
  CHECK(one == four);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].image_id == records[i].image_id);
  }
}

TEST_CASE("incoherence filter") {
  const KnowledgeStore store = testing::LoadFixtureKnowledge();
  const auto records = LoadDetections(testing::FixturePath("detections.jsonl"));
  // snake, green mamba and cucumber are on average related above 0.1.
  const Hyperparameters hp;
  CHECK_FALSE(IsIncoherent(records[3], store, hp));  // two boxes
  const DetectionRecord mixed = ParseDetectionJson(
      R"({"image":"m","boxes":[{"candidates":[{"label":"kettle","conf":0.5}]},)"
      R"({"candidates":[{"label":"cucumber","conf":0.5}]},)"
      R"({"candidates":[{"label":"wolf","conf":0.5}]}]})");
  CHECK(IsIncoherent(mixed, store, hp));
  CHECK_FALSE(IsIncoherent(records[0], store, hp));
}

TEST_CASE("parallel for rethrows the lowest failing index") {
  std::atomic<int> ran{0};
  try {
    internal::ParallelFor(20, 4, [&](std::size_t i) {
      ++ran;
      if (i == 3 || i == 11) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "3");
  }
}

}  // namespace
}  // namespace tagrefine
