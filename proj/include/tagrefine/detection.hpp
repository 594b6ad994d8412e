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

#ifndef TAGREFINE_DETECTION_HPP_
#define TAGREFINE_DETECTION_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "tagrefine/label.hpp"

namespace tagrefine {

struct Candidate {
  Label label;
  double conf = 0.0;  // detector confidence, > 0
};

struct BoundingBox {
  std::string box_id;
  // Detector order is preserved; labels are distinct.
  std::vector<Candidate> candidates;

  // Confidence of label in this box, 0 when it is not a candidate.
  double ConfidenceOf(const Label& label) const;
  bool HasCandidate(const Label& label) const;
};

struct DetectionRecord {
  std::string image_id;
  std::vector<BoundingBox> boxes;
};

// Checks the per-box invariants: finite positive confidences, distinct
// labels, distinct box ids. Throws ContractViolation.
void ValidateRecord(const DetectionRecord& record);

// Parses one JSON line
//   {"image": "...", "boxes": [{"id": "...", "candidates":
//       [{"label": "...", "conf": 0.6}, ...]}, ...]}
// Throws ContractViolation on schema problems and, when validate is set, on
// invariant violations. A missing box id defaults to the box's index.
DetectionRecord ParseDetectionJson(std::string_view line, bool validate = true);

std::string DetectionToJson(const DetectionRecord& record);

// Reads a whole JSON-lines detection file strictly: any bad line throws
// LoadError naming the line. Image ids must be unique.
std::vector<DetectionRecord> LoadDetections(const std::string& path);

}  // namespace tagrefine

#endif  // TAGREFINE_DETECTION_HPP_
