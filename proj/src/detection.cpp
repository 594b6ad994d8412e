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

#include "tagrefine/detection.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "tagrefine/error.hpp"
#include "text_reader.hpp"

namespace tagrefine {

using nlohmann::json;

double BoundingBox::ConfidenceOf(const Label& label) const {
  for (const Candidate& c : candidates) {
    if (c.label == label) return c.conf;
  }
  return 0.0;
}

bool BoundingBox::HasCandidate(const Label& label) const {
  for (const Candidate& c : candidates) {
    if (c.label == label) return true;
  }
  return false;
}

void ValidateRecord(const DetectionRecord& record) {
  std::unordered_set<std::string> box_ids;
  for (const BoundingBox& box : record.boxes) {
    if (!box_ids.insert(box.box_id).second) {
      throw ContractViolation("duplicate box id '" + box.box_id + "'");
    }
    std::unordered_set<Label> labels;
    for (const Candidate& c : box.candidates) {
      if (!(std::isfinite(c.conf) && c.conf > 0)) {
        throw ContractViolation("non-positive confidence for '" +
                                c.label.str() + "' in box '" + box.box_id +
                                "'");
      }
      if (!labels.insert(c.label).second) {
        throw ContractViolation("duplicate label '" + c.label.str() +
                                "' in box '" + box.box_id + "'");
      }
    }
  }
}

DetectionRecord ParseDetectionJson(std::string_view line, bool validate) {
  json doc = json::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ContractViolation("not a JSON object");
  }
  DetectionRecord record;
  try {
    const json& image = doc.at("image");
    record.image_id = image.is_string() ? image.get<std::string>()
                                        : image.dump();
    if (auto it = doc.find("boxes"); it != doc.end()) {
      if (!it->is_array()) throw ContractViolation("'boxes' is not an array");
      std::size_t index = 0;
      for (const json& jb : *it) {
        BoundingBox box;
        if (auto id = jb.find("id"); id != jb.end()) {
          box.box_id = id->is_string() ? id->get<std::string>() : id->dump();
        } else {
          box.box_id = std::to_string(index);
        }
        for (const json& jc : jb.at("candidates")) {
          auto label = Label::Parse(jc.at("label").get<std::string>());
          if (!label) throw ContractViolation("empty candidate label");
          box.candidates.push_back({*std::move(label),
                                    jc.at("conf").get<double>()});
        }
        record.boxes.push_back(std::move(box));
        ++index;
      }
    }
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("bad detection record: ") + e.what());
  }
  if (validate) ValidateRecord(record);
  return record;
}

std::string DetectionToJson(const DetectionRecord& record) {
  json boxes = json::array();
  for (const BoundingBox& box : record.boxes) {
    json candidates = json::array();
    for (const Candidate& c : box.candidates) {
      candidates.push_back({{"label", c.label.str()}, {"conf", c.conf}});
    }
    boxes.push_back({{"id", box.box_id}, {"candidates", candidates}});
  }
  json doc = {{"image", record.image_id}, {"boxes", boxes}};
  return doc.dump();
}

std::vector<DetectionRecord> LoadDetections(const std::string& path) {
  internal::LineReader reader(path);
  std::vector<DetectionRecord> records;
  std::set<std::string> ids;
  std::string_view line;
  while (reader.Next(&line)) {
    try {
      records.push_back(ParseDetectionJson(line));
    } catch (const ContractViolation& e) {
      throw LoadError(path, reader.line_number(), e.what());
    }
    if (!ids.insert(records.back().image_id).second) {
      throw LoadError(path, reader.line_number(),
                      "duplicate image id '" + records.back().image_id + "'");
    }
  }
  return records;
}

}  // namespace tagrefine
