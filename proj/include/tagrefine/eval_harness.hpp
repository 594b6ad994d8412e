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

#ifndef TAGREFINE_EVAL_HARNESS_HPP_
#define TAGREFINE_EVAL_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagrefine/detection.hpp"
#include "tagrefine/knowledge_store.hpp"
#include "tagrefine/pipeline.hpp"
#include "tagrefine/scoring.hpp"

namespace tagrefine {

// Which label spaces a judged pool covers.
enum class PoolTag { kCL, kCLXL, kCLXLAL, kAggregate };

const char* PoolTagName(PoolTag tag);
std::optional<PoolTag> ParsePoolTag(std::string_view name);
bool PoolCovers(PoolTag tag, LabelSpace space);

enum class AssessmentMode { kRelaxed, kConservative };

const char* AssessmentModeName(AssessmentMode mode);

struct JudgedPool {
  std::string image_id;
  PoolTag pool = PoolTag::kAggregate;
  std::map<Label, std::vector<int>> grades;  // each grade in {0, 1, 2}
};

// {"image": "...", "pool": "CL+XL", "labels": {"snake": [2, 2, 1], ...}}.
// Unknown pool tags, grades outside {0, 1, 2}, labels without grades and
// repeated (image, pool) pairs are load errors.
std::vector<JudgedPool> LoadJudgments(const std::string& path);
JudgedPool ParseJudgmentJson(std::string_view line);

// A label is good when strictly more than half of its grades reach the bar:
// >= 1 relaxed, == 2 conservative.
std::set<Label> GoodLabels(const JudgedPool& pool, AssessmentMode mode);

// Over distinct system labels. 1 for an empty system output.
double Precision(std::span<const Label> system, const std::set<Label>& good);
// 1 when there are no good labels.
double Recall(std::span<const Label> system, const std::set<Label>& good);
// 2pr / (p + r), 0 when p + r = 0.
double F1(double precision, double recall);

struct SystemRun {
  std::string name;
  std::vector<RefinedImage> images;
};

struct MetricRow {
  std::string system;
  PoolTag pool = PoolTag::kAggregate;
  AssessmentMode mode = AssessmentMode::kRelaxed;
  double precision = 0.0;  // mean over images
  double recall = 0.0;     // mean over images
  double f1 = 0.0;         // F1 of the two means
  std::size_t images = 0;
  std::size_t empty_outputs = 0;  // images scored with the empty-output rule
};

// One row per system x pool tag x mode. Every system must cover exactly the
// judged images; otherwise throws MismatchError listing the differences.
std::vector<MetricRow> Evaluate(std::span<const SystemRun> systems,
                                std::span<const JudgedPool> pools);

// TSV: system, pool, mode, precision, recall, f1, images, empty_outputs.
void WriteReport(std::span<const MetricRow> rows, std::ostream& out);

// ---------------------------------------------------------------------------
// Hyperparameter search

struct TrainExample {
  DetectionRecord record;
  std::vector<Label> gold;
};

// Detection JSON lines with an extra "gold": ["label", ...] array.
std::vector<TrainExample> LoadTrainSet(const std::string& path);

// Gold labels plus the retained hypernyms of each.
std::set<Label> ExpandGold(std::span<const Label> gold,
                           const HypernymIndex& hypernyms);

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

struct SearchSpace {
  Range alpha, beta, gamma, kappa;
  Range delta;
};

// Throws ConfigError for lo > hi, non-finite ends, negative weights or
// delta outside [0, 1].
void ValidateSearchSpace(const SearchSpace& space);

struct Trial {
  std::size_t index = 0;
  Hyperparameters hp;
  double f1 = 0.0;
};

struct TuneResult {
  Hyperparameters best;
  double best_f1 = 0.0;
  std::size_t best_trial = 0;
  std::vector<Trial> trials;
};

// Draws `trials` weight vectors uniformly from space (seeded), keeps the
// remaining fields of base, and scores each on the train set by the F1 of
// mean precision and mean recall against the hypernym-expanded gold labels.
// The highest score wins; ties go to the lower trial index.
TuneResult Tune(std::span<const TrainExample> train,
                const KnowledgeStore& store, const Hyperparameters& base,
                const SearchSpace& space, int trials, std::uint64_t seed,
                int jobs);

// TSV: trial, alpha, beta, gamma, kappa, delta, f1.
void WriteTrialLog(std::span<const Trial> trials, std::ostream& out);

}  // namespace tagrefine

#endif  // TAGREFINE_EVAL_HARNESS_HPP_
