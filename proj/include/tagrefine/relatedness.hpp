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

#ifndef TAGREFINE_RELATEDNESS_HPP_
#define TAGREFINE_RELATEDNESS_HPP_

#include <optional>
#include <vector>

#include "tagrefine/knowledge_store.hpp"

namespace tagrefine {

enum class ColocNorm {
  kGlobalMax,  // count / largest pair count in the table
};

struct RelatednessConfig {
  double delta = 0.5;  // weight of the embedding cosine, in [0, 1]
  ColocNorm coloc_norm = ColocNorm::kGlobalMax;
};

// Throws ConfigError when delta is outside [0, 1].
void ValidateRelatednessConfig(const RelatednessConfig& cfg);

// Mean of the in-vocabulary token vectors of label; nullopt when no token is
// known.
std::optional<std::vector<double>> EmbedLabel(const Label& label,
                                              const EmbeddingTable& emb);

// Cosine of the label embeddings, clamped below at 0. Labels with no known
// token, or a zero vector, score 0.
double Cosine(const Label& a, const Label& b, const EmbeddingTable& emb);

double Coloc(const Label& a, const Label& b, const ColocTable& table);

// delta * cosine + (1 - delta) * coloc. When abstract_pair is set (either
// side is an abstract label) the co-location term is 0.
double Srel(const Label& a, const Label& b, const RelatednessConfig& cfg,
            const EmbeddingTable& emb, const ColocTable& table,
            bool abstract_pair = false);

// Srel bound to one configuration and one pair of tables.
class Relatedness {
 public:
  Relatedness(RelatednessConfig cfg, const EmbeddingTable& emb,
              const ColocTable& table)
      : cfg_(cfg), emb_(&emb), coloc_(&table) {
    ValidateRelatednessConfig(cfg_);
  }

  double Visual(const Label& a, const Label& b) const {
    return Srel(a, b, cfg_, *emb_, *coloc_, false);
  }
  double WithAbstract(const Label& visual, const Label& abstract) const {
    return Srel(visual, abstract, cfg_, *emb_, *coloc_, true);
  }
  const RelatednessConfig& config() const { return cfg_; }

 private:
  RelatednessConfig cfg_;
  const EmbeddingTable* emb_;
  const ColocTable* coloc_;
};

}  // namespace tagrefine

#endif  // TAGREFINE_RELATEDNESS_HPP_
