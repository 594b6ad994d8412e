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

#include "tagrefine/eval_harness.hpp"

#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "tagrefine/error.hpp"

namespace tagrefine {
namespace {

std::vector<Label> Labels(std::initializer_list<const char*> names) {
  std::vector<Label> out;
  for (const char* n : names) out.emplace_back(n);
  return out;
}

std::set<Label> Set(std::initializer_list<const char*> names) {
  const auto v = Labels(names);
  return {v.begin(), v.end()};
}

JudgedPool Pool(const std::string& image, PoolTag tag,
                std::initializer_list<std::pair<const char*, std::vector<int>>>
                    grades) {
  JudgedPool p{image, tag, {}};
  for (const auto& [l, g] : grades) p.grades[Label(l)] = g;
  return p;
}

TEST_CASE("majority rule") {
  const JudgedPool p = Pool("i", PoolTag::kCL,
                            {{"x", {2, 2, 1, 0, 0}},
                             {"y", {2, 2, 2}},
                             {"z", {2, 1, 0, 0}},
                             {"w", {1, 1, 0, 0}}});
  // z and w sit exactly at half, which is not a majority.
  CHECK(GoodLabels(p, AssessmentMode::kRelaxed) == Set({"x", "y"}));
  CHECK(GoodLabels(p, AssessmentMode::kConservative) == Set({"y"}));
}

TEST_CASE("precision") {
  CHECK(Precision(Labels({"a", "b", "c", "d", "e"}), Set({"a", "b", "c"})) ==
        doctest::Approx(0.6));
  CHECK(Precision({}, Set({"a"})) == 1.0);
  CHECK(Precision(Labels({"a", "b"}), Set({"a", "b", "c"})) == 1.0);
  // Repeats count once.
  CHECK(Precision(Labels({"a", "a", "z"}), Set({"a"})) == 0.5);
}

TEST_CASE("recall") {
  const auto five = Labels({"a", "b", "c", "d", "e"});
  const auto eight = Set({"a", "b", "c", "d", "e", "f", "g", "h"});
  CHECK(Recall(five, eight) == 0.625);
  CHECK(Recall(five, eight) == 5.0 / 8.0);
  CHECK(Recall(Labels({"x"}), eight) == 0.0);
  CHECK(Recall(Labels({"x"}), {}) == 1.0);
}

TEST_CASE("f1") {
  CHECK(F1(0.5, 0.5) == 0.5);
  CHECK(F1(0.0, 1.0) == 0.0);
  CHECK(F1(0.0, 0.0) == 0.0);
  const double expected = 2 * 0.51 * 0.86 / (0.51 + 0.86);
  CHECK(F1(0.51, 0.86) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(F1(0.51, 0.86) - 0.64) <= 0.005);
}

RefinedImage Image(const std::string& id,
                   std::initializer_list<std::pair<const char*, LabelSpace>>
                       labels) {
  RefinedImage img{id, {}, 0.0};
  for (const auto& [l, s] : labels) {
    img.labels.push_back({Label(l), s,
                          s == LabelSpace::kAbstract ? std::string(kGlobalBox)
                                                     : "b0"});
  }
  return img;
}

TEST_CASE("evaluate: restricted recall case") {
  const JudgedPool pool = Pool("img", PoolTag::kAggregate,
                               {{"a", {2, 2, 2}},
                                {"b", {2, 2, 2}},
                                {"c", {2, 2, 2}},
                                {"d", {2, 2, 2}},
                                {"e", {2, 2, 2}},
                                {"f", {2, 2, 2}},
                                {"g", {2, 2, 2}},
                                {"h", {2, 2, 2}}});
  const SystemRun run{"sys",
                      {Image("img", {{"a", LabelSpace::kConcrete},
                                     {"b", LabelSpace::kConcrete},
                                     {"c", LabelSpace::kExtended},
                                     {"d", LabelSpace::kExtended},
                                     {"e", LabelSpace::kAbstract}})}};
  const std::vector<JudgedPool> pools = {pool};
  const auto rows = Evaluate(std::span(&run, 1), pools);
  REQUIRE(rows.size() == 2);  // relaxed and conservative
  for (const MetricRow& r : rows) {
    CHECK(r.recall == 0.625);
    CHECK(r.precision == 1.0);
    CHECK(r.images == 1);
  }
}

TEST_CASE("evaluate: pool tags restrict system label spaces") {
  const std::vector<JudgedPool> pools = {
      Pool("img", PoolTag::kCL, {{"a", {2, 2, 2}}}),
      Pool("img", PoolTag::kCLXL, {{"a", {2, 2, 2}}, {"x", {2, 2, 2}}})};
  const SystemRun run{"sys",
                      {Image("img", {{"a", LabelSpace::kConcrete},
                                     {"x", LabelSpace::kExtended},
                                     {"p", LabelSpace::kAbstract}})}};
  const auto rows = Evaluate(std::span(&run, 1), pools);
  REQUIRE(rows.size() == 4);
  for (const MetricRow& r : rows) {
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
  }
}

TEST_CASE("evaluate: two systems give two rows per pool and mode") {
  const std::vector<JudgedPool> pools = {
      Pool("img", PoolTag::kAggregate, {{"a", {2, 2, 2}}})};
  const std::vector<SystemRun> runs = {
      {"one", {Image("img", {{"a", LabelSpace::kConcrete}})}},
      {"two", {Image("img", {})}}};
  const auto rows = Evaluate(runs, pools);
  CHECK(rows.size() == 4);
  std::ostringstream out;
  WriteReport(rows, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "system\tpool\tmode\tprecision\trecall\tf1\timages\tempty_outputs");
}

TEST_CASE("evaluate: image id mismatch lists the ids") {
  const std::vector<JudgedPool> pools = {
      Pool("img1", PoolTag::kAggregate, {{"a", {2, 2, 2}}})};
  const SystemRun run{"sys", {Image("img2", {})}};
  try {
    Evaluate(std::span(&run, 1), pools);
    FAIL("expected MismatchError");
  } catch (const MismatchError& e) {
    const std::string what = e.what();
    CHECK(what.find("img1") != std::string::npos);
    CHECK(what.find("img2") != std::string::npos);
  }
}

TEST_CASE("judgments: unknown pool tag is a load error") {
  testing::TempDir dir;
  CHECK_THROWS_AS(
      LoadJudgments(dir.Write(
          "j.jsonl", R"({"image":"i","pool":"XL","labels":{"a":[2]}})" "\n")),
      LoadError);
  const auto ok = LoadJudgments(testing::FixturePath("judgments.jsonl"));
  CHECK(ok.size() == 14);
}

class TuneFixture {
 protected:
  KnowledgeStore store = testing::LoadFixtureKnowledge();
  std::vector<TrainExample> train =
      LoadTrainSet(testing::FixturePath("train.jsonl"));
};

TEST_CASE_FIXTURE(TuneFixture, "tune: single trial returns the sampled vector") {
  const TuneResult r = Tune(train, store, {}, {}, 1, 7, 1);
  REQUIRE(r.trials.size() == 1);
  CHECK(r.best_trial == 0);
  CHECK(r.best.alpha == r.trials[0].hp.alpha);
  CHECK(r.best.delta == r.trials[0].hp.delta);
}

TEST_CASE_FIXTURE(TuneFixture, "tune: same seed, same result, any job count") {
  const TuneResult a = Tune(train, store, {}, {}, 12, 42, 1);
  const TuneResult b = Tune(train, store, {}, {}, 12, 42, 3);
  std::ostringstream la, lb;
  WriteTrialLog(a.trials, la);
  WriteTrialLog(b.trials, lb);
  CHECK(la.str() == lb.str());
  CHECK(a.best_trial == b.best_trial);
  const TuneResult c = Tune(train, store, {}, {}, 12, 43, 1);
  std::ostringstream lc;
  WriteTrialLog(c.trials, lc);
  CHECK(lc.str() != la.str());
}

TEST_CASE_FIXTURE(TuneFixture, "tune: point ranges return the point") {
  SearchSpace s;
  s.alpha = {0.3, 0.3};
  s.beta = {0.2, 0.2};
  s.gamma = {0.1, 0.1};
  s.kappa = {0.4, 0.4};
  s.delta = {0.6, 0.6};
  const TuneResult r = Tune(train, store, {}, s, 3, 1, 1);
  CHECK(r.best.alpha == 0.3);
  CHECK(r.best.beta == 0.2);
  CHECK(r.best.gamma == 0.1);
  CHECK(r.best.kappa == 0.4);
  CHECK(r.best.delta == 0.6);
}

TEST_CASE_FIXTURE(TuneFixture, "tune: all-zero weights tie, first trial wins") {
  SearchSpace s;
  s.alpha = s.beta = s.gamma = s.kappa = {0.0, 0.0};
  const TuneResult r = Tune(train, store, {}, s, 5, 9, 1);
  CHECK(r.best_trial == 0);
  for (const Trial& t : r.trials) CHECK(t.f1 == r.trials[0].f1);
}

TEST_CASE_FIXTURE(TuneFixture, "tune: bad input") {
  CHECK_THROWS_AS(Tune({}, store, {}, {}, 3, 1, 1), ConfigError);
  CHECK_THROWS_AS(Tune(train, store, {}, {}, 0, 1, 1), ConfigError);
  SearchSpace s;
  s.delta = {0.5, 2.0};
  CHECK_THROWS_AS(Tune(train, store, {}, s, 1, 1, 1), ConfigError);
}

TEST_CASE("gold expansion adds retained hypernyms") {
  const std::vector<HypernymEdge> raw = {{Label("ant"), Label("insect"), 1}};
  const HypernymIndex h = HypernymIndex::Build(raw, nullptr, 0);
  CHECK(ExpandGold(Labels({"ant", "rock"}), h) ==
        Set({"ant", "insect", "rock"}));
}

}  // namespace
}  // namespace tagrefine
