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

#include <cmath>

#include "doctest.h"
#include "tagrefine/error.hpp"

namespace tagrefine {
namespace {

EmbeddingTable Embeddings() {
  EmbeddingTable t;
  t.Insert("red", {1, 0, 0});
  t.Insert("apple", {0, 1, 0});
  t.Insert("fruit", {0, 1, 1});
  t.Insert("anti", {-1, 0, 0});
  t.Insert("zero", {0, 0, 0});
  return t;
}

TEST_CASE("cosine") {
  const EmbeddingTable e = Embeddings();
  CHECK(Cosine(Label("apple"), Label("apple"), e) == doctest::Approx(1.0));
  CHECK(Cosine(Label("red"), Label("apple"), e) == 0.0);
  CHECK(Cosine(Label("qwerty"), Label("apple"), e) == 0.0);
  CHECK(Cosine(Label("red"), Label("anti"), e) == 0.0);  // clamped
  CHECK(Cosine(Label("zero"), Label("apple"), e) == 0.0);
  // Multi-token labels use the mean of the known tokens: (0.5, 0.5, 0).
  CHECK(Cosine(Label("red apple"), Label("apple"), e) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(Cosine(Label("red qwerty"), Label("red"), e) == doctest::Approx(1.0));
}

TEST_CASE("coloc normalization") {
  ColocTable t;
  t.Add(Label("a"), Label("b"), 10);
  t.Add(Label("a"), Label("c"), 5);
  CHECK(Coloc(Label("a"), Label("b"), t) == 1.0);
  CHECK(Coloc(Label("c"), Label("a"), t) == 0.5);
  CHECK(Coloc(Label("b"), Label("c"), t) == 0.0);
  CHECK(Coloc(Label("b"), Label("c"), ColocTable{}) == 0.0);
}

TEST_CASE("srel arithmetic") {
  // Embedding pair with cosine exactly 0.5 and a coloc of 0.25.
  EmbeddingTable e;
  e.Insert("x", {1, 0});
  e.Insert("y", {0.5, std::sqrt(3.0) / 2});
  ColocTable c;
  c.Add(Label("x"), Label("y"), 1);
  c.Add(Label("p"), Label("q"), 4);
  const double cos = Cosine(Label("x"), Label("y"), e);
  REQUIRE(cos == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(Srel(Label("x"), Label("y"), {0.6}, e, c) ==
        doctest::Approx(0.6 * 0.5 + 0.4 * 0.25));
  CHECK(Srel(Label("x"), Label("y"), {0.6}, e, c) == doctest::Approx(0.4));
  CHECK(Srel(Label("x"), Label("y"), {1.0}, e, c) == cos);
  CHECK(Srel(Label("x"), Label("zz"), {0.0}, e, c) == 0.0);
  // Abstract pairs ignore the co-location term.
  CHECK(Srel(Label("x"), Label("y"), {0.6}, e, c, true) ==
        doctest::Approx(0.3));
}

TEST_CASE("srel is symmetric") {
  const EmbeddingTable e = Embeddings();
  ColocTable c;
  c.Add(Label("red"), Label("fruit"), 3);
  c.Add(Label("apple"), Label("fruit"), 4);
  const Relatedness rel({0.3}, e, c);
  for (const char* a : {"red", "apple", "fruit", "red apple", "none"}) {
    for (const char* b : {"red", "apple", "fruit", "red apple", "none"}) {
      CHECK(rel.Visual(Label(a), Label(b)) == rel.Visual(Label(b), Label(a)));
    }
  }
}

TEST_CASE("delta outside [0, 1] is rejected") {
  CHECK_THROWS_AS(ValidateRelatednessConfig({1.5}), ConfigError);
  CHECK_THROWS_AS(ValidateRelatednessConfig({-0.1}), ConfigError);
}

}  // namespace
}  // namespace tagrefine
