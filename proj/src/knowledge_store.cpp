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

#include "tagrefine/knowledge_store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "tagrefine/error.hpp"
#include "text_reader.hpp"

namespace tagrefine {

using internal::LineReader;
using internal::ParseDouble;
using internal::ParseInt;
using internal::SplitTabs;
using internal::SplitWhitespace;

namespace {

// Parses a required label field, reporting blank fields as load errors.
Label LabelField(const LineReader& reader, std::string_view field,
                 const char* what) {
  auto label = Label::Parse(field);
  if (!label) {
    throw LoadError(reader.path(), reader.line_number(),
                    std::string("empty ") + what);
  }
  return *std::move(label);
}

std::vector<std::string_view> TsvFields(const LineReader& reader,
                                        std::string_view line,
                                        std::size_t expected) {
  auto fields = SplitTabs(line);
  if (fields.size() != expected) {
    throw LoadError(reader.path(), reader.line_number(),
                    "expected " + std::to_string(expected) +
                        " tab-separated fields, got " +
                        std::to_string(fields.size()));
  }
  return fields;
}

}  // namespace

// ---------------------------------------------------------------------------
// Embeddings

const std::vector<double>* EmbeddingTable::Find(std::string_view token) const {
  auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

void EmbeddingTable::Insert(std::string_view token, std::vector<double> vector) {
  if (token.empty()) throw ContractViolation("empty embedding token");
  if (vector.empty()) throw ContractViolation("empty embedding vector");
  if (!vectors_.empty() && vector.size() != dim_) {
    throw ContractViolation("embedding dimension " +
                            std::to_string(vector.size()) + " != " +
                            std::to_string(dim_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) throw ContractViolation("non-finite embedding value");
  }
  dim_ = vector.size();
  std::string key = CanonicalLabelText(token);
  auto [it, inserted] = vectors_.try_emplace(std::move(key));
  if (!inserted) ++duplicates_;
  it->second = std::move(vector);
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  LineReader reader(path);
  EmbeddingTable table;
  std::string_view line;
  bool first = true;
  // A leading `count dim` pair is a header only if the next line agrees.
  std::optional<std::pair<std::string, std::int64_t>> header;
  std::size_t header_line = 0;

  auto parse_vector = [&](const std::vector<std::string_view>& fields,
                          std::size_t line_number) {
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = ParseDouble(fields[i]);
      if (!v) {
        throw LoadError(path, line_number,
                        "non-numeric component '" + std::string(fields[i]) +
                            "'");
      }
      if (!std::isfinite(*v)) {
        throw LoadError(path, line_number, "non-finite component");
      }
      values.push_back(*v);
    }
    return values;
  };

  auto insert = [&](std::string_view token, std::vector<double> values,
                    std::size_t line_number) {
    if (!table.empty() && values.size() != table.dim()) {
      throw LoadError(path, line_number,
                      "dimension mismatch: expected " +
                          std::to_string(table.dim()) + ", got " +
                          std::to_string(values.size()));
    }
    table.Insert(token, std::move(values));
  };

  while (reader.Next(&line)) {
    auto fields = SplitWhitespace(line);
    if (fields.size() < 2) {
      throw LoadError(path, reader.line_number(), "token without components");
    }
    if (first) {
      first = false;
      auto count = ParseInt(fields[0]);
      auto dim = fields.size() == 2 ? ParseInt(fields[1]) : std::nullopt;
      if (count && dim && *count >= 0 && *dim > 1) {
        header.emplace(std::string(fields[0]), *dim);
        header_line = reader.line_number();
        continue;
      }
    } else if (header) {
      auto values = parse_vector(fields, reader.line_number());
      if (static_cast<std::int64_t>(values.size()) != header->second) {
        // Not a header after all: the first line was a 1-d vector.
        std::vector<std::string_view> first_fields = {header->first, {}};
        std::string dim_text = std::to_string(header->second);
        first_fields[1] = dim_text;
        insert(header->first, parse_vector(first_fields, header_line),
               header_line);
      }
      header.reset();
      insert(fields[0], std::move(values), reader.line_number());
      continue;
    }
    insert(fields[0], parse_vector(fields, reader.line_number()),
           reader.line_number());
  }
  return table;
}

// ---------------------------------------------------------------------------
// Allowlist

void FrequencyAllowlist::Set(const Label& label, double score) {
  if (!std::isfinite(score) || score < 0) {
    throw ContractViolation("allowlist score must be finite and >= 0");
  }
  scores_[label] = score;
}

std::optional<double> FrequencyAllowlist::Score(const Label& label) const {
  auto it = scores_.find(label);
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

FrequencyAllowlist LoadAllowlist(const std::string& path) {
  LineReader reader(path);
  FrequencyAllowlist allowlist;
  std::string_view line;
  while (reader.Next(&line)) {
    auto fields = TsvFields(reader, line, 2);
    Label label = LabelField(reader, fields[0], "label");
    auto score = ParseDouble(fields[1]);
    if (!score || !std::isfinite(*score) || *score < 0) {
      throw LoadError(path, reader.line_number(),
                      "score must be a nonnegative number");
    }
    allowlist.Set(label, *score);
  }
  return allowlist;
}

// ---------------------------------------------------------------------------
// Hypernyms

HypernymIndex HypernymIndex::Build(std::span<const HypernymEdge> raw,
                                   const FrequencyAllowlist* allowlist,
                                   double threshold) {
  HypernymIndex index;
  std::map<Label, std::map<Label, int>> candidates;
  for (const HypernymEdge& edge : raw) {
    if (edge.depth < 1 || edge.depth > kMaxHypernymDepth ||
        edge.child == edge.parent) {
      ++index.dropped_;
      continue;
    }
    if (allowlist) {
      auto score = allowlist->Score(edge.parent);
      if (!score || *score < threshold) {
        ++index.dropped_;
        continue;
      }
    }
    auto [it, inserted] = candidates[edge.child].try_emplace(edge.parent,
                                                              edge.depth);
    if (!inserted) it->second = std::min(it->second, edge.depth);
  }

  for (auto& [child, parents] : candidates) {
    std::vector<HypernymEdge> kept;
    kept.reserve(parents.size());
    for (const auto& [parent, depth] : parents) {
      kept.push_back({child, parent, depth});
    }
    auto score = [&](const HypernymEdge& e) {
      return allowlist ? allowlist->Score(e.parent).value_or(0.0) : 0.0;
    };
    // parents is ordered by label already, so a stable sort on score alone
    // breaks ties lexicographically.
    std::stable_sort(kept.begin(), kept.end(),
                     [&](const HypernymEdge& a, const HypernymEdge& b) {
                       return score(a) > score(b);
                     });
    if (kept.size() > kMaxHypernymsPerLabel) {
      index.dropped_ += kept.size() - kMaxHypernymsPerLabel;
      kept.erase(kept.begin() + kMaxHypernymsPerLabel, kept.end());
    }
    for (const HypernymEdge& e : kept) {
      index.labels_.insert(e.child);
      index.labels_.insert(e.parent);
    }
    index.edge_count_ += kept.size();
    index.by_child_.emplace(child, std::move(kept));
  }
  return index;
}

std::span<const HypernymEdge> HypernymIndex::ParentsOf(
    const Label& child) const {
  auto it = by_child_.find(child);
  if (it == by_child_.end()) return {};
  return it->second;
}

bool HypernymIndex::IsParent(const Label& child, const Label& parent) const {
  for (const HypernymEdge& e : ParentsOf(child)) {
    if (e.parent == parent) return true;
  }
  return false;
}

std::vector<HypernymEdge> HypernymIndex::Edges() const {
  std::vector<HypernymEdge> out;
  out.reserve(edge_count_);
  for (const auto& [child, edges] : by_child_) {
    out.insert(out.end(), edges.begin(), edges.end());
  }
  std::sort(out.begin(), out.end(),
            [](const HypernymEdge& a, const HypernymEdge& b) {
              return std::tie(a.child, a.parent) < std::tie(b.child, b.parent);
            });
  return out;
}

HypernymIndex LoadHypernyms(const std::string& path,
                            const FrequencyAllowlist* allowlist,
                            double threshold) {
  LineReader reader(path);
  std::vector<HypernymEdge> raw;
  std::string_view line;
  while (reader.Next(&line)) {
    auto fields = TsvFields(reader, line, 3);
    Label child = LabelField(reader, fields[0], "child");
    Label parent = LabelField(reader, fields[1], "parent");
    auto depth = ParseInt(fields[2]);
    if (!depth) {
      throw LoadError(path, reader.line_number(),
                      "depth must be an integer");
    }
    int clamped = static_cast<int>(
        std::clamp<std::int64_t>(*depth, -1, kMaxHypernymDepth + 1));
    raw.push_back({std::move(child), std::move(parent), clamped});
  }
  return HypernymIndex::Build(raw, allowlist, threshold);
}

// ---------------------------------------------------------------------------
// Assertions

const char* RelationName(Relation relation) {
  return relation == Relation::kUsedFor ? "usedFor" : "hasProperty";
}

std::optional<Relation> ParseRelation(std::string_view name) {
  if (name == "usedFor") return Relation::kUsedFor;
  if (name == "hasProperty") return Relation::kHasProperty;
  return std::nullopt;
}

void AssertionIndex::Add(AbstractAssertion assertion) {
  if (!std::isfinite(assertion.score) || assertion.score <= 0) {
    throw ContractViolation("assertion score must be positive");
  }
  by_subject_[assertion.subject].push_back(std::move(assertion));
  ++size_;
}

std::span<const AbstractAssertion> AssertionIndex::BySubject(
    const Label& subject) const {
  auto it = by_subject_.find(subject);
  if (it == by_subject_.end()) return {};
  return it->second;
}

AssertionIndex LoadAssertions(const std::string& path) {
  LineReader reader(path);
  AssertionIndex index;
  std::string_view line;
  while (reader.Next(&line)) {
    auto fields = TsvFields(reader, line, 4);
    Label subject = LabelField(reader, fields[0], "subject");
    Label object = LabelField(reader, fields[2], "object");
    auto score = ParseDouble(fields[3]);
    if (!score || std::isnan(*score)) {
      throw LoadError(path, reader.line_number(),
                      "non-numeric score '" + std::string(fields[3]) + "'");
    }
    auto relation = ParseRelation(internal::Trim(fields[1]));
    if (!relation || !(*score > 0) || !std::isfinite(*score)) {
      index.add_dropped(1);
      continue;
    }
    index.Add({std::move(subject), *relation, std::move(object), *score});
  }
  return index;
}

// ---------------------------------------------------------------------------
// Co-location

namespace {

std::pair<Label, Label> Ordered(const Label& a, const Label& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

void ColocTable::Add(const Label& a, const Label& b, std::uint64_t count) {
  if (a == b) return;
  std::uint64_t& slot = counts_[Ordered(a, b)];
  slot += count;
  max_count_ = std::max(max_count_, slot);
  totals_[a] += count;
  totals_[b] += count;
}

std::uint64_t ColocTable::Count(const Label& a, const Label& b) const {
  if (a == b) return 0;
  auto it = counts_.find(Ordered(a, b));
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t ColocTable::Total(const Label& label) const {
  auto it = totals_.find(label);
  return it == totals_.end() ? 0 : it->second;
}

ColocTable LoadColoc(const std::string& path) {
  LineReader reader(path);
  ColocTable table;
  std::string_view line;
  while (reader.Next(&line)) {
    auto fields = TsvFields(reader, line, 3);
    Label a = LabelField(reader, fields[0], "label1");
    Label b = LabelField(reader, fields[1], "label2");
    auto count = ParseInt(fields[2]);
    if (!count) {
      throw LoadError(path, reader.line_number(), "count must be an integer");
    }
    if (*count < 0) {
      throw LoadError(path, reader.line_number(), "negative count");
    }
    table.Add(a, b, static_cast<std::uint64_t>(*count));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Visual similarity

void VsimTable::Set(const Label& a, const Label& b, double score) {
  if (a == b) throw ContractViolation("vsim of a label with itself");
  if (!(score >= 0.0 && score <= 1.0)) {
    throw ContractViolation("vsim score outside [0, 1]");
  }
  auto [it, inserted] = neighbors_[a].insert_or_assign(b, score);
  neighbors_[b].insert_or_assign(a, score);
  if (inserted) ++pair_count_;
}

double VsimTable::Score(const Label& a, const Label& b) const {
  auto it = neighbors_.find(a);
  if (it == neighbors_.end()) return 0.0;
  auto jt = it->second.find(b);
  return jt == it->second.end() ? 0.0 : jt->second;
}

std::vector<Label> VsimTable::SimilarSet(const Label& label,
                                         double tau_s) const {
  std::vector<Label> out;
  auto it = neighbors_.find(label);
  if (it == neighbors_.end()) return out;
  for (const auto& [other, score] : it->second) {
    if (score >= tau_s) out.push_back(other);
  }
  return out;
}

std::vector<std::tuple<Label, Label, double>> VsimTable::Pairs() const {
  std::vector<std::tuple<Label, Label, double>> out;
  out.reserve(pair_count_);
  for (const auto& [a, row] : neighbors_) {
    for (auto it = row.upper_bound(a); it != row.end(); ++it) {
      out.emplace_back(a, it->first, it->second);
    }
  }
  return out;
}

VsimTable LoadVsim(const std::string& path) {
  LineReader reader(path);
  VsimTable table;
  std::string_view line;
  std::map<std::pair<Label, Label>, double> seen;
  while (reader.Next(&line)) {
    auto fields = TsvFields(reader, line, 3);
    Label a = LabelField(reader, fields[0], "label1");
    Label b = LabelField(reader, fields[1], "label2");
    auto score = ParseDouble(fields[2]);
    if (!score || !(*score >= 0.0 && *score <= 1.0)) {
      throw LoadError(path, reader.line_number(), "score must lie in [0, 1]");
    }
    if (a == b) {
      throw LoadError(path, reader.line_number(), "self pair");
    }
    auto [it, inserted] = seen.try_emplace(Ordered(a, b), *score);
    if (!inserted && it->second != *score) {
      throw LoadError(path, reader.line_number(),
                      "conflicting scores for a repeated pair");
    }
    table.Set(a, b, *score);
  }
  return table;
}

void WriteVsim(const VsimTable& table, std::ostream& out) {
  char buf[32];
  for (const auto& [a, b, score] : table.Pairs()) {
    std::snprintf(buf, sizeof buf, "%.6f", score);
    out << a.str() << '\t' << b.str() << '\t' << buf << '\n';
  }
}

// ---------------------------------------------------------------------------
// Store

bool KnowledgeStore::IsKnownVisual(const Label& label) const {
  return vsim.Contains(label) || coloc.Contains(label) ||
         hypernyms.Contains(label);
}

KnowledgeStore LoadKnowledge(const KnowledgePaths& paths) {
  for (const auto* p : {&paths.embeddings, &paths.hypernyms, &paths.allowlist,
                        &paths.assertions, &paths.coloc, &paths.vsim}) {
    if (*p) internal::RequireReadable(**p);
  }
  if (!std::isfinite(paths.hypernym_threshold)) {
    throw ConfigError("hypernym threshold must be finite");
  }

  KnowledgeStore store;
  if (paths.embeddings) store.embeddings = LoadEmbeddings(*paths.embeddings);
  std::optional<FrequencyAllowlist> allowlist;
  if (paths.allowlist) allowlist = LoadAllowlist(*paths.allowlist);
  if (paths.hypernyms) {
    store.hypernyms =
        LoadHypernyms(*paths.hypernyms, allowlist ? &*allowlist : nullptr,
                      paths.hypernym_threshold);
  }
  if (paths.assertions) store.assertions = LoadAssertions(*paths.assertions);
  if (paths.coloc) store.coloc = LoadColoc(*paths.coloc);
  if (paths.vsim) store.vsim = LoadVsim(*paths.vsim);
  return store;
}

}  // namespace tagrefine
