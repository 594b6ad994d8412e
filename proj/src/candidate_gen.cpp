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

#include "tagrefine/candidate_gen.hpp"

#include <algorithm>
#include <set>

#include "tagrefine/error.hpp"

namespace tagrefine {

const char* OriginName(Origin origin) {
  switch (origin) {
    case Origin::kOriginal: return "original";
    case Origin::kSimilar: return "similar";
    case Origin::kHypernym: return "hypernym";
  }
  return "?";
}

LabelSpace SpaceOf(Origin origin) {
  return origin == Origin::kHypernym ? LabelSpace::kExtended
                                     : LabelSpace::kConcrete;
}

std::vector<Label> ExpandSimilar(const BoundingBox& box, const VsimTable& vsim,
                                 double tau_s) {
  std::set<Label> out;
  for (const Candidate& c : box.candidates) {
    for (Label& l : vsim.SimilarSet(c.label, tau_s)) {
      if (!box.HasCandidate(l)) out.insert(std::move(l));
    }
  }
  return {out.begin(), out.end()};
}

std::map<Label, std::vector<Label>> ExpandHypernyms(
    std::span<const Label> visual_labels, const HypernymIndex& edges) {
  std::map<Label, std::set<Label>> grouped;
  for (const Label& l : visual_labels) {
    for (const HypernymEdge& e : edges.ParentsOf(l)) grouped[e.parent].insert(l);
  }
  std::map<Label, std::vector<Label>> out;
  for (auto& [parent, children] : grouped) {
    out.emplace(parent, std::vector<Label>(children.begin(), children.end()));
  }
  return out;
}

namespace internal {

std::vector<AbstractCandidate> RankAbstract(
    std::map<Label, AbstractCandidate> by_label, std::size_t cap) {
  std::vector<AbstractCandidate> out;
  out.reserve(by_label.size());
  for (auto& [label, cand] : by_label) {
    std::sort(cand.supports.begin(), cand.supports.end(),
              [](const AbstractSupport& a, const AbstractSupport& b) {
                return std::tie(a.visual, a.score) < std::tie(b.visual, b.score);
              });
    for (const AbstractSupport& s : cand.supports) {
      cand.score = std::max(cand.score, s.score);
      cand.best_aconf = std::max(cand.best_aconf, s.aconf);
    }
    out.push_back(std::move(cand));
  }
  // by_label iterates in label order, so stability gives the label tie-break.
  std::stable_sort(out.begin(), out.end(),
                   [](const AbstractCandidate& a, const AbstractCandidate& b) {
                     return a.best_aconf > b.best_aconf;
                   });
  if (out.size() > cap) out.erase(out.begin() + static_cast<std::ptrdiff_t>(cap), out.end());
  return out;
}

}  // namespace internal

std::vector<AbstractCandidate> GenerateAbstract(
    std::span<const Label> visual_labels, const AssertionIndex& assertions,
    const Relatedness& rel, std::size_t cap) {
  return GenerateAbstract(visual_labels, assertions, rel, cap,
                          [](const Label&) { return false; });
}

CandidateSets GenerateCandidates(const DetectionRecord& record,
                                 const KnowledgeStore& store,
                                 const Hyperparameters& hp) {
  ValidateHyperparameters(hp);
  const Relatedness rel(hp.relatedness(), store.embeddings, store.coloc);
  CandidateSets sets;
  std::set<Label> image_visual;

  for (const BoundingBox& box : record.boxes) {
    BoxCandidates bc;
    bc.box_id = box.box_id;
    std::vector<Label> box_visual;
    for (const Candidate& c : box.candidates) {
      bc.candidates.push_back({c.label, Origin::kOriginal, c.conf, 0.0, {}});
      box_visual.push_back(c.label);
    }
    for (Label& l : ExpandSimilar(box, store.vsim, hp.tau_s)) {
      const double vconf = VisualConfidence(box, l, store.vsim, hp.tau_s);
      bc.candidates.push_back({l, Origin::kSimilar, vconf, 0.0, {}});
      box_visual.push_back(std::move(l));
    }
    for (auto& [parent, children] : ExpandHypernyms(box_visual, store.hypernyms)) {
      if (std::find(box_visual.begin(), box_visual.end(), parent) !=
          box_visual.end()) {
        continue;
      }
      const double gconf = GeneralizationConfidence(
          box_visual, parent, store.hypernyms,
          [&](const Label& a, const Label& b) { return rel.Visual(a, b); });
      bc.candidates.push_back(
          {parent, Origin::kHypernym, 0.0, gconf, std::move(children)});
    }
    for (const VisualCandidate& vc : bc.candidates) image_visual.insert(vc.label);
    sets.boxes.push_back(std::move(bc));
  }

  const std::vector<Label> visual(image_visual.begin(), image_visual.end());
  sets.abstracts = GenerateAbstract(
      visual, store.assertions, rel, hp.abstract_cap, [&](const Label& l) {
        return image_visual.count(l) > 0 || store.IsKnownVisual(l);
      });
  return sets;
}

}  // namespace tagrefine
