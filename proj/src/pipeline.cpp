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

#include <algorithm>
#include <set>

#include "json.hpp"
#include "parallel.hpp"
#include "tagrefine/candidate_gen.hpp"
#include "tagrefine/error.hpp"
#include "tagrefine/relatedness.hpp"
#include "text_reader.hpp"

namespace tagrefine {

using nlohmann::json;

RefinedImage RefineImage(const DetectionRecord& record,
                         const KnowledgeStore& store, const Hyperparameters& hp,
                         IlpInstance* instance) {
  ValidateHyperparameters(hp);
  const CandidateSets candidates = GenerateCandidates(record, store, hp);
  const Relatedness rel(hp.relatedness(), store.embeddings, store.coloc);
  IlpInstance inst = BuildInstance(candidates, hp, rel);
  Assignment a = SolveExact(inst);
  if (hp.budget_mode == BudgetMode::kTruncate) {
    a = TruncateToBudget(inst, std::move(a), hp.budget);
  }
  RefinedImage out;
  out.image_id = record.image_id;
  out.labels = ExtractLabels(a, inst);
  out.objective = a.objective;
  if (instance) *instance = std::move(inst);
  return out;
}

std::vector<RefinedImage> RefineAll(std::span<const DetectionRecord> records,
                                    const KnowledgeStore& store,
                                    const Hyperparameters& hp, int jobs) {
  ValidateHyperparameters(hp);
  std::vector<RefinedImage> out(records.size());
  internal::ParallelFor(records.size(), jobs, [&](std::size_t i) {
    out[i] = RefineImage(records[i], store, hp);
  });
  return out;
}

bool IsIncoherent(const DetectionRecord& record, const KnowledgeStore& store,
                  const Hyperparameters& hp) {
  const std::size_t n = record.boxes.size();
  if (n < kIncoherentMinBoxes || n > kIncoherentMaxBoxes) return false;
  std::vector<const Label*> top;
  for (const BoundingBox& box : record.boxes) {
    if (box.candidates.empty()) continue;
    auto it = std::max_element(box.candidates.begin(), box.candidates.end(),
                               [](const Candidate& a, const Candidate& b) {
                                 return a.conf < b.conf;
                               });
    top.push_back(&it->label);
  }
  if (top.size() < 2) return true;
  const Relatedness rel(hp.relatedness(), store.embeddings, store.coloc);
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < top.size(); ++i) {
    for (std::size_t j = i + 1; j < top.size(); ++j) {
      sum += rel.Visual(*top[i], *top[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs) < kIncoherenceThreshold;
}

std::string RefinedToJson(const RefinedImage& image) {
  json labels = json::array();
  for (const RefinedLabel& l : image.labels) {
    labels.push_back({{"label", l.label.str()},
                      {"space", LabelSpaceName(l.space)},
                      {"box", l.box}});
  }
  json doc = {{"image", image.image_id},
              {"labels", std::move(labels)},
              {"objective", image.objective}};
  return doc.dump();
}

RefinedImage ParseRefinedJson(std::string_view line) {
  json doc = json::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ContractViolation("not a JSON object");
  }
  RefinedImage out;
  try {
    out.image_id = doc.at("image").get<std::string>();
    for (const json& jl : doc.at("labels")) {
      auto label = Label::Parse(jl.at("label").get<std::string>());
      if (!label) throw ContractViolation("empty label");
      auto space = ParseLabelSpace(jl.at("space").get<std::string>());
      if (!space) throw ContractViolation("unknown label space");
      out.labels.push_back({*std::move(label), *space,
                            jl.at("box").get<std::string>()});
    }
    if (auto it = doc.find("objective"); it != doc.end()) {
      out.objective = it->get<double>();
    }
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("bad refined record: ") + e.what());
  }
  return out;
}

std::vector<RefinedImage> LoadRefined(const std::string& path) {
  internal::LineReader reader(path);
  std::vector<RefinedImage> out;
  std::set<std::string> ids;
  std::string_view line;
  while (reader.Next(&line)) {
    try {
      out.push_back(ParseRefinedJson(line));
    } catch (const ContractViolation& e) {
      throw LoadError(path, reader.line_number(), e.what());
    }
    if (!ids.insert(out.back().image_id).second) {
      throw LoadError(path, reader.line_number(),
                      "duplicate image id '" + out.back().image_id + "'");
    }
  }
  return out;
}

}  // namespace tagrefine
