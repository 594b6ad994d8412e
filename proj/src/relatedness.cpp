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

#include "tagrefine/relatedness.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include "tagrefine/error.hpp"

namespace tagrefine {

void ValidateRelatednessConfig(const RelatednessConfig& cfg) {
  if (!(cfg.delta >= 0.0 && cfg.delta <= 1.0)) {
    throw ConfigError("delta must lie in [0, 1]");
  }
}

std::optional<std::vector<double>> EmbedLabel(const Label& label,
                                              const EmbeddingTable& emb) {
  if (emb.empty()) return std::nullopt;
  std::vector<double> sum(emb.dim(), 0.0);
  std::size_t found = 0;
  std::string_view text = label.str();
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    if (const auto* v = emb.Find(text.substr(start, end - start))) {
      for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += (*v)[d];
      ++found;
    }
    start = end + 1;
  }
  if (found == 0) return std::nullopt;
  if (found > 1) {
    for (double& x : sum) x /= static_cast<double>(found);
  }
  return sum;
}

double Cosine(const Label& a, const Label& b, const EmbeddingTable& emb) {
  auto va = EmbedLabel(a, emb);
  if (!va) return 0.0;
  auto vb = EmbedLabel(b, emb);
  if (!vb) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t d = 0; d < va->size(); ++d) {
    dot += (*va)[d] * (*vb)[d];
    na += (*va)[d] * (*va)[d];
    nb += (*vb)[d] * (*vb)[d];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  double cos = dot / std::sqrt(na * nb);
  return std::clamp(cos, 0.0, 1.0);
}

double Coloc(const Label& a, const Label& b, const ColocTable& table) {
  const std::uint64_t max = table.MaxCount();
  if (max == 0) return 0.0;
  return static_cast<double>(table.Count(a, b)) / static_cast<double>(max);
}

double Srel(const Label& a, const Label& b, const RelatednessConfig& cfg,
            const EmbeddingTable& emb, const ColocTable& table,
            bool abstract_pair) {
  const double cos = Cosine(a, b, emb);
  const double co = abstract_pair ? 0.0 : Coloc(a, b, table);
  return std::clamp(cfg.delta * cos + (1.0 - cfg.delta) * co, 0.0, 1.0);
}

}  // namespace tagrefine
