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

#ifndef TAGREFINE_KNOWLEDGE_STORE_HPP_
#define TAGREFINE_KNOWLEDGE_STORE_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tagrefine/label.hpp"

// Background-knowledge tables. Every table is built once by its loader and
// is read-only afterwards, so a KnowledgeStore can be shared across threads.
//
// All text formats are UTF-8, one record per line; blank lines and lines
// starting with '#' are skipped.

namespace tagrefine {

// Word vectors keyed by single lowercase token.
class EmbeddingTable {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }

  // Number of tokens that were overwritten by a later line (last wins).
  std::size_t duplicates() const { return duplicates_; }

  // nullptr when the token is out of vocabulary.
  const std::vector<double>* Find(std::string_view token) const;

  // Throws ContractViolation on dimension mismatch or non-finite values.
  void Insert(std::string_view token, std::vector<double> vector);

  friend bool operator==(const EmbeddingTable&,
                         const EmbeddingTable&) = default;

 private:
  std::size_t dim_ = 0;
  std::size_t duplicates_ = 0;
  std::map<std::string, std::vector<double>, std::less<>> vectors_;
};

// `token v1 ... vd` per line. A leading word2vec `count dim` header line is
// accepted and skipped.
EmbeddingTable LoadEmbeddings(const std::string& path);

// Popularity scores standing in for web result counts.
class FrequencyAllowlist {
 public:
  void Set(const Label& label, double score);
  std::optional<double> Score(const Label& label) const;
  std::size_t size() const { return scores_.size(); }

 private:
  std::unordered_map<Label, double> scores_;
};

// `label<TAB>score` per line; score must be a finite nonnegative number.
FrequencyAllowlist LoadAllowlist(const std::string& path);

inline constexpr int kMaxHypernymDepth = 3;
inline constexpr std::size_t kMaxHypernymsPerLabel = 3;

struct HypernymEdge {
  Label child;
  Label parent;
  int depth = 1;

  friend bool operator==(const HypernymEdge&, const HypernymEdge&) = default;
};

// Retained child -> ancestor edges.
class HypernymIndex {
 public:
  // Applies the retention rules to raw edges: depth must be in
  // [1, kMaxHypernymDepth] and child != parent; with an allowlist, parents
  // scoring below threshold (or missing) are dropped; each child keeps at
  // most kMaxHypernymsPerLabel parents, highest allowlist score first, ties
  // by parent text. A repeated (child, parent) pair keeps its smallest depth.
  // Without an allowlist nothing is pruned by score.
  static HypernymIndex Build(std::span<const HypernymEdge> raw,
                             const FrequencyAllowlist* allowlist,
                             double threshold);

  // Parents of child in retention order; empty when unknown.
  std::span<const HypernymEdge> ParentsOf(const Label& child) const;
  bool IsParent(const Label& child, const Label& parent) const;
  // True when label is the child or parent of some retained edge.
  bool Contains(const Label& label) const { return labels_.count(label) > 0; }

  // Every retained edge, ordered by (child, parent).
  std::vector<HypernymEdge> Edges() const;
  std::size_t size() const { return edge_count_; }

  // Edges discarded for depth, self-loop or score reasons.
  std::size_t dropped() const { return dropped_; }
  void add_dropped(std::size_t n) { dropped_ += n; }

  friend bool operator==(const HypernymIndex& a, const HypernymIndex& b) {
    return a.by_child_ == b.by_child_;
  }

 private:
  std::map<Label, std::vector<HypernymEdge>> by_child_;
  std::unordered_set<Label> labels_;
  std::size_t edge_count_ = 0;
  std::size_t dropped_ = 0;
};

// `child<TAB>parent<TAB>depth` per line. allowlist may be null.
HypernymIndex LoadHypernyms(const std::string& path,
                            const FrequencyAllowlist* allowlist,
                            double threshold);

enum class Relation { kUsedFor, kHasProperty };

const char* RelationName(Relation relation);
std::optional<Relation> ParseRelation(std::string_view name);

struct AbstractAssertion {
  Label subject;
  Relation relation = Relation::kUsedFor;
  Label object;
  double score = 0.0;  // > 0

  friend bool operator==(const AbstractAssertion&,
                         const AbstractAssertion&) = default;
};

class AssertionIndex {
 public:
  // Throws ContractViolation when score is not a positive finite number.
  void Add(AbstractAssertion assertion);

  std::span<const AbstractAssertion> BySubject(const Label& subject) const;
  std::size_t size() const { return size_; }

  // Rows skipped at load time (relation filter, non-positive score).
  std::size_t dropped() const { return dropped_; }
  void add_dropped(std::size_t n) { dropped_ += n; }

  friend bool operator==(const AssertionIndex& a, const AssertionIndex& b) {
    return a.by_subject_ == b.by_subject_;
  }

 private:
  std::map<Label, std::vector<AbstractAssertion>> by_subject_;
  std::size_t size_ = 0;
  std::size_t dropped_ = 0;
};

// `subject<TAB>relation<TAB>object<TAB>score` per line. Only usedFor and
// hasProperty rows with positive scores are kept.
AssertionIndex LoadAssertions(const std::string& path);

// Symmetric co-location counts.
class ColocTable {
 public:
  // Adds count to the unordered pair. Self pairs are ignored.
  void Add(const Label& a, const Label& b, std::uint64_t count);

  std::uint64_t Count(const Label& a, const Label& b) const;
  // Sum of all pair counts involving label.
  std::uint64_t Total(const Label& label) const;
  std::uint64_t MaxCount() const { return max_count_; }
  bool Contains(const Label& label) const { return totals_.count(label) > 0; }
  std::size_t size() const { return counts_.size(); }

  friend bool operator==(const ColocTable& a, const ColocTable& b) {
    return a.counts_ == b.counts_;
  }

 private:
  std::map<std::pair<Label, Label>, std::uint64_t> counts_;
  std::unordered_map<Label, std::uint64_t> totals_;
  std::uint64_t max_count_ = 0;
};

// `label1<TAB>label2<TAB>count`; repeated pairs (either order) are summed.
ColocTable LoadColoc(const std::string& path);

// Symmetric visual-similarity scores in [0, 1]; absent pairs score 0.
class VsimTable {
 public:
  // Throws ContractViolation for a == b or score outside [0, 1].
  void Set(const Label& a, const Label& b, double score);

  double Score(const Label& a, const Label& b) const;

  // Every label l' != l with Score(l, l') >= tau_s, ordered by label.
  std::vector<Label> SimilarSet(const Label& label, double tau_s) const;

  // (a, b, score) with a < b, ordered.
  std::vector<std::tuple<Label, Label, double>> Pairs() const;
  std::size_t pair_count() const { return pair_count_; }
  std::size_t label_count() const { return neighbors_.size(); }
  bool Contains(const Label& label) const {
    return neighbors_.count(label) > 0;
  }

  friend bool operator==(const VsimTable& a, const VsimTable& b) {
    return a.neighbors_ == b.neighbors_;
  }

 private:
  std::map<Label, std::map<Label, double>> neighbors_;
  std::size_t pair_count_ = 0;
};

// `label1<TAB>label2<TAB>score`. A pair listed twice must agree.
VsimTable LoadVsim(const std::string& path);
// Pairs with label1 < label2, six decimal places.
void WriteVsim(const VsimTable& table, std::ostream& out);

struct KnowledgePaths {
  std::optional<std::string> embeddings;
  std::optional<std::string> hypernyms;
  std::optional<std::string> allowlist;
  std::optional<std::string> assertions;
  std::optional<std::string> coloc;
  std::optional<std::string> vsim;
  double hypernym_threshold = 0.0;
};

struct KnowledgeStore {
  EmbeddingTable embeddings;
  HypernymIndex hypernyms;
  AssertionIndex assertions;
  ColocTable coloc;
  VsimTable vsim;

  // True when the label occurs in a visual table (vsim, co-location, or
  // either end of a hypernym edge).
  bool IsKnownVisual(const Label& label) const;

  std::size_t warnings() const {
    return embeddings.duplicates() + hypernyms.dropped() + assertions.dropped();
  }
};

// Every path is checked for readability before any table is parsed. Absent
// paths yield empty tables.
KnowledgeStore LoadKnowledge(const KnowledgePaths& paths);

}  // namespace tagrefine

#endif  // TAGREFINE_KNOWLEDGE_STORE_HPP_
