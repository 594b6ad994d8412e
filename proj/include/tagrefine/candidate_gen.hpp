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

#ifndef TAGREFINE_CANDIDATE_GEN_HPP_
#define TAGREFINE_CANDIDATE_GEN_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tagrefine/detection.hpp"
#include "tagrefine/knowledge_store.hpp"
#include "tagrefine/relatedness.hpp"
#include "tagrefine/scoring.hpp"

namespace tagrefine {

// Precedence when a label qualifies twice: original > similar > hypernym.
enum class Origin { kOriginal, kSimilar, kHypernym };

const char* OriginName(Origin origin);
LabelSpace SpaceOf(Origin origin);

struct VisualCandidate {
  Label label;
  Origin origin = Origin::kOriginal;
  double vconf = 0.0;  // 0 for hypernyms
  double gconf = 0.0;  // 0 unless origin is kHypernym
  // For hypernyms: the box labels this one generalizes, ordered.
  std::vector<Label> children;
};

struct BoxCandidates {
  std::string box_id;
  // Originals in detector order, then similar labels, then hypernyms (each
  // group ordered by label).
  std::vector<VisualCandidate> candidates;
};

struct AbstractSupport {
  Label visual;
  double score = 0.0;  // assertion score
  double aconf = 0.0;
};

struct AbstractCandidate {
  Label label;
  // One entry per supporting assertion, ordered by (visual, score).
  std::vector<AbstractSupport> supports;
  // Largest assertion score among supports; used as the assertion weight
  // for every visual label of the image.
  double score = 0.0;
  double best_aconf = 0.0;
};

struct CandidateSets {
  std::vector<BoxCandidates> boxes;  // input box order
  std::vector<AbstractCandidate> abstracts;
};

// Union of S(l) over the box's detections, minus the detections.
std::vector<Label> ExpandSimilar(const BoundingBox& box, const VsimTable& vsim,
                                 double tau_s);

// Retained parents of any input label, each with the input labels it
// generalizes.
std::map<Label, std::vector<Label>> ExpandHypernyms(
    std::span<const Label> visual_labels, const HypernymIndex& edges);

// Objects of assertions whose subject is one of visual_labels, ranked by
// their best aconf (ties by label) and truncated to cap. Objects for which
// is_visual returns true are skipped so that abstract labels stay disjoint
// from visual ones.
template <class IsVisual>
std::vector<AbstractCandidate> GenerateAbstract(
    std::span<const Label> visual_labels, const AssertionIndex& assertions,
    const Relatedness& rel, std::size_t cap, IsVisual&& is_visual);

std::vector<AbstractCandidate> GenerateAbstract(
    std::span<const Label> visual_labels, const AssertionIndex& assertions,
    const Relatedness& rel, std::size_t cap);

// Full candidate space of one image, with vconf and gconf filled in.
CandidateSets GenerateCandidates(const DetectionRecord& record,
                                 const KnowledgeStore& store,
                                 const Hyperparameters& hp);

// ---------------------------------------------------------------------------

namespace internal {
std::vector<AbstractCandidate> RankAbstract(
    std::map<Label, AbstractCandidate> by_label, std::size_t cap);
}  // namespace internal

template <class IsVisual>
std::vector<AbstractCandidate> GenerateAbstract(
    std::span<const Label> visual_labels, const AssertionIndex& assertions,
    const Relatedness& rel, std::size_t cap, IsVisual&& is_visual) {
  std::map<Label, AbstractCandidate> by_label;
  for (const Label& visual : visual_labels) {
    for (const AbstractAssertion& a : assertions.BySubject(visual)) {
      if (is_visual(a.object)) continue;
      auto it = by_label.find(a.object);
      if (it == by_label.end()) {
        it = by_label.emplace(a.object, AbstractCandidate{a.object, {}, 0.0, 0.0})
                 .first;
      }
      AbstractCandidate& cand = it->second;
      const double aconf = AbstractionConfidence(
          visual, a, [&](const Label& l, const Label& al) {
            return rel.WithAbstract(l, al);
          });
      cand.supports.push_back({visual, a.score, aconf});
    }
  }
  return internal::RankAbstract(std::move(by_label), cap);
}

}  // namespace tagrefine

#endif  // TAGREFINE_CANDIDATE_GEN_HPP_
