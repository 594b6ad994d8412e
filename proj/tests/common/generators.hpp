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

// Random inputs for property and acceptance tests.

#ifndef TAGREFINE_TESTS_GENERATORS_HPP_
#define TAGREFINE_TESTS_GENERATORS_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tagrefine/detection.hpp"
#include "tagrefine/ilp_engine.hpp"
#include "tagrefine/knowledge_store.hpp"
#include "test_util.hpp"

namespace tagrefine::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int Int(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  double Real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool Coin(double p = 0.5) { return Real(0.0, 1.0) < p; }

  template <class T>
  const T& Pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(Int(0, static_cast<int>(v.size()) - 1))];
  }

  // Nonnegative score. A share are exact zeros or coarse multiples of 0.1 so
  // that ties and near-ties (0.1 + 0.2 vs 0.3) come up often.
  double Score() {
    const int kind = Int(0, 9);
    if (kind == 0) return 0.0;
    if (kind <= 3) return 0.1 * Int(1, 10);
    return Real(0.0, 2.0);
  }

 private:
  std::mt19937_64 rng_;
};

struct InstanceShape {
  int max_boxes = 4;
  int max_candidates = 4;
  int max_abstracts = 4;
};

// Labels come from a small vocabulary so the same label shows up in several
// boxes and abstract slots, exercising the label-order tie-break.
inline IlpInstance RandomInstance(Gen& g, const InstanceShape& shape = {}) {
  static const std::vector<std::string> kVisual = {"a", "b", "c", "d", "e",
                                                   "f"};
  static const std::vector<std::string> kAbstract = {"p", "q", "r", "s",
                                                     "t"};
  IlpInstance inst;
  const int n = g.Int(1, shape.max_boxes);
  for (int i = 0; i < n; ++i) {
    IlpBox box;
    box.box_id = "b" + std::to_string(i);
    const int c = g.Int(1, shape.max_candidates);
    for (int j = 0; j < c; ++j) {
      box.labels.emplace_back(g.Pick(kVisual));
      box.spaces.push_back(g.Coin(0.7) ? LabelSpace::kConcrete
                                       : LabelSpace::kExtended);
      box.unary.push_back(g.Score());
    }
    inst.boxes.push_back(std::move(box));
  }
  const int k = g.Int(0, shape.max_abstracts);
  for (int a = 0; a < k; ++a) inst.abstracts.emplace_back(g.Pick(kAbstract));

  const double z_density = g.Real(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int m = i + 1; m < n; ++m) {
      for (std::size_t j = 0; j < inst.boxes[i].labels.size(); ++j) {
        for (std::size_t l = 0; l < inst.boxes[m].labels.size(); ++l) {
          if (g.Coin(z_density)) {
            inst.z.push_back({i, static_cast<int>(j), m, static_cast<int>(l),
                              g.Score()});
          }
        }
      }
    }
  }
  const double w_density = g.Real(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < inst.boxes[i].labels.size(); ++j) {
      for (int a = 0; a < k; ++a) {
        if (g.Coin(w_density)) {
          inst.w.push_back({i, static_cast<int>(j), a, g.Score()});
        }
      }
    }
  }
  inst.max_abstract = g.Int(0, 9) == 0 ? g.Int(0, 2) : kMaxAbstractLabels;
  if (g.Coin(0.6)) inst.budget = g.Int(1, 6);
  if (g.Coin(0.3)) inst.visual_cap = VisualCapFor(inst.boxes.size());
  Canonicalize(inst);
  return inst;
}

// Labels known to the bundled fixture tables plus a few unknown ones.
inline const std::vector<std::string>& FixtureVocabulary() {
  static const std::vector<std::string> kVocab = {
      "snake", "green mamba", "green snake", "cucumber", "tomato", "dog",
      "wolf",  "cat",         "lynx",        "ball",     "zebra",  "kettle"};
  return kVocab;
}

inline DetectionRecord RandomRecord(Gen& g, const std::string& image_id,
                                    int max_boxes = 6) {
  DetectionRecord r;
  r.image_id = image_id;
  const int n = g.Int(0, max_boxes);
  for (int i = 0; i < n; ++i) {
    BoundingBox box;
    box.box_id = "r" + std::to_string(i);
    std::vector<std::string> vocab = FixtureVocabulary();
    const int c = g.Int(1, 3);
    for (int j = 0; j < c && !vocab.empty(); ++j) {
      const int at = g.Int(0, static_cast<int>(vocab.size()) - 1);
      box.candidates.push_back({Label(vocab[at]), g.Real(0.01, 1.0)});
      vocab.erase(vocab.begin() + at);
    }
    r.boxes.push_back(std::move(box));
  }
  return r;
}

inline KnowledgeStore LoadFixtureKnowledge() {
  KnowledgePaths p;
  p.embeddings = FixturePath("embeddings.txt");
  p.hypernyms = FixturePath("hypernyms.tsv");
  p.allowlist = FixturePath("allowlist.tsv");
  p.hypernym_threshold = 0.5;
  p.assertions = FixturePath("assertions.tsv");
  p.coloc = FixturePath("coloc.tsv");
  p.vsim = FixturePath("vsim.tsv");
  return LoadKnowledge(p);
}

}  // namespace tagrefine::testing

#endif  // TAGREFINE_TESTS_GENERATORS_HPP_
