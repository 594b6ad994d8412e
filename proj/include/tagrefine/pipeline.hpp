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

#ifndef TAGREFINE_PIPELINE_HPP_
#define TAGREFINE_PIPELINE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagrefine/detection.hpp"
#include "tagrefine/ilp_engine.hpp"
#include "tagrefine/knowledge_store.hpp"
#include "tagrefine/scoring.hpp"

namespace tagrefine {

struct RefinedImage {
  std::string image_id;
  std::vector<RefinedLabel> labels;
  double objective = 0.0;

  friend bool operator==(const RefinedImage&, const RefinedImage&) = default;
};

// Candidates -> instance -> exact solve (-> truncation in kTruncate budget
// mode) -> labels. When instance is non-null the solved instance is copied
// out.
RefinedImage RefineImage(const DetectionRecord& record,
                         const KnowledgeStore& store, const Hyperparameters& hp,
                         IlpInstance* instance = nullptr);

// Output order follows input order for any jobs value.
std::vector<RefinedImage> RefineAll(std::span<const DetectionRecord> records,
                                    const KnowledgeStore& store,
                                    const Hyperparameters& hp, int jobs);

inline constexpr std::size_t kIncoherentMinBoxes = 3;
inline constexpr std::size_t kIncoherentMaxBoxes = 7;
inline constexpr double kIncoherenceThreshold = 0.1;

// Test-image filter: 3 to 7 boxes, and the mean srel between the
// top-confidence detections of different boxes is below 0.1.
bool IsIncoherent(const DetectionRecord& record, const KnowledgeStore& store,
                  const Hyperparameters& hp);

// {"image": ..., "labels": [{"label": ..., "space": "CL|XL|AL",
//   "box": "<id>|GLOBAL"}], "objective": <value>}
std::string RefinedToJson(const RefinedImage& image);
// Throws ContractViolation on malformed input.
RefinedImage ParseRefinedJson(std::string_view line);
std::vector<RefinedImage> LoadRefined(const std::string& path);

}  // namespace tagrefine

#endif  // TAGREFINE_PIPELINE_HPP_
