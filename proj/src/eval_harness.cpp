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

#include "tagrefine/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "json.hpp"
#include "parallel.hpp"
#include "tagrefine/error.hpp"
#include "text_reader.hpp"

namespace tagrefine {

using nlohmann::json;

const char* PoolTagName(PoolTag tag) {
  switch (tag) {
    case PoolTag::kCL: return "CL";
    case PoolTag::kCLXL: return "CL+XL";
    case PoolTag::kCLXLAL: return "CL+XL+AL";
    case PoolTag::kAggregate: return "AGGREGATE";
  }
  return "?";
}

std::optional<PoolTag> ParsePoolTag(std::string_view name) {
  for (PoolTag t : {PoolTag::kCL, PoolTag::kCLXL, PoolTag::kCLXLAL,
                    PoolTag::kAggregate}) {
    if (name == PoolTagName(t)) return t;
  }
  return std::nullopt;
}

bool PoolCovers(PoolTag tag, LabelSpace space) {
  switch (tag) {
    case PoolTag::kCL: return space == LabelSpace::kConcrete;
    case PoolTag::kCLXL: return space != LabelSpace::kAbstract;
    case PoolTag::kCLXLAL:
    case PoolTag::kAggregate: return true;
  }
  return false;
}

const char* AssessmentModeName(AssessmentMode mode) {
  return mode == AssessmentMode::kRelaxed ? "relaxed" : "conservative";
}

JudgedPool ParseJudgmentJson(std::string_view line) {
  json doc = json::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ContractViolation("not a JSON object");
  }
  JudgedPool pool;
  try {
    pool.image_id = doc.at("image").get<std::string>();
    const std::string tag = doc.at("pool").get<std::string>();
    auto parsed = ParsePoolTag(tag);
    if (!parsed) throw ContractViolation("unknown pool tag '" + tag + "'");
    pool.pool = *parsed;
    for (const auto& [text, grades] : doc.at("labels").items()) {
      auto label = Label::Parse(text);
      if (!label) throw ContractViolation("empty label");
      std::vector<int> g;
      for (const json& v : grades) {
        const int grade = v.get<int>();
        if (grade < 0 || grade > 2 || v.get<double>() != grade) {
          throw ContractViolation("grade outside {0, 1, 2} for '" + text + "'");
        }
        g.push_back(grade);
      }
      if (g.empty()) throw ContractViolation("no grades for '" + text + "'");
      if (!pool.grades.emplace(*std::move(label), std::move(g)).second) {
        throw ContractViolation("label '" + text + "' listed twice");
      }
    }
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("bad judgment record: ") + e.what());
  }
  return pool;
}

std::vector<JudgedPool> LoadJudgments(const std::string& path) {
  internal::LineReader reader(path);
  std::vector<JudgedPool> pools;
  std::set<std::pair<std::string, PoolTag>> seen;
  std::string_view line;
  while (reader.Next(&line)) {
    try {
      pools.push_back(ParseJudgmentJson(line));
    } catch (const ContractViolation& e) {
      throw LoadError(path, reader.line_number(), e.what());
    }
    if (!seen.emplace(pools.back().image_id, pools.back().pool).second) {
      throw LoadError(path, reader.line_number(),
                      "repeated pool for image '" + pools.back().image_id + "'");
    }
  }
  return pools;
}

std::set<Label> GoodLabels(const JudgedPool& pool, AssessmentMode mode) {
  const int bar = mode == AssessmentMode::kRelaxed ? 1 : 2;
  std::set<Label> good;
  for (const auto& [label, grades] : pool.grades) {
    const auto hits = std::count_if(grades.begin(), grades.end(),
                                    [&](int g) { return g >= bar; });
    if (2 * static_cast<std::size_t>(hits) > grades.size()) good.insert(label);
  }
  return good;
}

namespace {

std::size_t Hits(const std::set<Label>& distinct, const std::set<Label>& good) {
  std::size_t hits = 0;
  for (const Label& l : distinct) hits += good.count(l);
  return hits;
}

}  // namespace

double Precision(std::span<const Label> system, const std::set<Label>& good) {
  const std::set<Label> distinct(system.begin(), system.end());
  if (distinct.empty()) return 1.0;
  return static_cast<double>(Hits(distinct, good)) /
         static_cast<double>(distinct.size());
}

double Recall(std::span<const Label> system, const std::set<Label>& good) {
  if (good.empty()) return 1.0;
  const std::set<Label> distinct(system.begin(), system.end());
  return static_cast<double>(Hits(distinct, good)) /
         static_cast<double>(good.size());
}

double F1(double precision, double recall) {
  const double sum = precision + recall;
  if (sum <= 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

std::vector<MetricRow> Evaluate(std::span<const SystemRun> systems,
                                std::span<const JudgedPool> pools) {
  std::set<std::string> judged;
  for (const JudgedPool& p : pools) judged.insert(p.image_id);

  std::string mismatch;
  std::vector<std::map<std::string, const RefinedImage*>> by_image(systems.size());
  for (std::size_t s = 0; s < systems.size(); ++s) {
    for (const RefinedImage& img : systems[s].images) {
      by_image[s][img.image_id] = &img;
    }
    for (const std::string& id : judged) {
      if (!by_image[s].count(id)) {
        mismatch += "\n  " + systems[s].name + ": no output for judged image '" +
                    id + "'";
      }
    }
    for (const auto& [id, img] : by_image[s]) {
      if (!judged.count(id)) {
        mismatch += "\n  " + systems[s].name + ": image '" + id +
                    "' has no judgments";
      }
    }
  }
  if (!mismatch.empty()) throw MismatchError("image ids differ:" + mismatch);

  // Sum in image order so the means do not depend on input order.
  std::vector<const JudgedPool*> ordered;
  for (const JudgedPool& p : pools) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const JudgedPool* a, const JudgedPool* b) {
              return std::tie(a->image_id, a->pool) < std::tie(b->image_id, b->pool);
            });

  std::vector<MetricRow> rows;
  for (std::size_t s = 0; s < systems.size(); ++s) {
    for (PoolTag tag : {PoolTag::kCL, PoolTag::kCLXL, PoolTag::kCLXLAL,
                        PoolTag::kAggregate}) {
      for (AssessmentMode mode :
           {AssessmentMode::kRelaxed, AssessmentMode::kConservative}) {
        MetricRow row;
        row.system = systems[s].name;
        row.pool = tag;
        row.mode = mode;
        double p_sum = 0.0, r_sum = 0.0;
        for (const JudgedPool* pool : ordered) {
          if (pool->pool != tag) continue;
          const RefinedImage& img = *by_image[s].at(pool->image_id);
          std::vector<Label> labels;
          for (const RefinedLabel& l : img.labels) {
            if (PoolCovers(tag, l.space)) labels.push_back(l.label);
          }
          const std::set<Label> good = GoodLabels(*pool, mode);
          p_sum += Precision(labels, good);
          r_sum += Recall(labels, good);
          if (labels.empty()) ++row.empty_outputs;
          ++row.images;
        }
        if (row.images == 0) continue;
        row.precision = p_sum / static_cast<double>(row.images);
        row.recall = r_sum / static_cast<double>(row.images);
        row.f1 = F1(row.precision, row.recall);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void WriteReport(std::span<const MetricRow> rows, std::ostream& out) {
  out << "system\tpool\tmode\tprecision\trecall\tf1\timages\tempty_outputs\n";
  char buf[128];
  for (const MetricRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%.6f", r.precision, r.recall,
                  r.f1);
    out << r.system << '\t' << PoolTagName(r.pool) << '\t'
        << AssessmentModeName(r.mode) << '\t' << buf << '\t' << r.images
        << '\t' << r.empty_outputs << '\n';
  }
}

// ---------------------------------------------------------------------------

std::vector<TrainExample> LoadTrainSet(const std::string& path) {
  internal::LineReader reader(path);
  std::vector<TrainExample> out;
  std::string_view line;
  while (reader.Next(&line)) {
    try {
      TrainExample ex;
      ex.record = ParseDetectionJson(line);
      json doc = json::parse(line.begin(), line.end());
      for (const json& g : doc.at("gold")) {
        auto label = Label::Parse(g.get<std::string>());
        if (!label) throw ContractViolation("empty gold label");
        ex.gold.push_back(*std::move(label));
      }
      out.push_back(std::move(ex));
    } catch (const ContractViolation& e) {
      throw LoadError(path, reader.line_number(), e.what());
    } catch (const json::exception& e) {
      throw LoadError(path, reader.line_number(), e.what());
    }
  }
  return out;
}

std::set<Label> ExpandGold(std::span<const Label> gold,
                           const HypernymIndex& hypernyms) {
  std::set<Label> out(gold.begin(), gold.end());
  for (const Label& g : gold) {
    for (const HypernymEdge& e : hypernyms.ParentsOf(g)) out.insert(e.parent);
  }
  return out;
}

void ValidateSearchSpace(const SearchSpace& space) {
  auto check = [](const Range& r, const char* name, double lo, double hi) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi ||
        r.lo < lo || r.hi > hi) {
      throw ConfigError(std::string("invalid range for ") + name);
    }
  };
  const double inf = std::numeric_limits<double>::infinity();
  check(space.alpha, "alpha", 0.0, inf);
  check(space.beta, "beta", 0.0, inf);
  check(space.gamma, "gamma", 0.0, inf);
  check(space.kappa, "kappa", 0.0, inf);
  check(space.delta, "delta", 0.0, 1.0);
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every
// platform, unlike std::uniform_real_distribution.
double Unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double Draw(std::mt19937_64& rng, const Range& r) {
  return r.lo + Unit(rng) * (r.hi - r.lo);
}

}  // namespace

TuneResult Tune(std::span<const TrainExample> train,
                const KnowledgeStore& store, const Hyperparameters& base,
                const SearchSpace& space, int trials, std::uint64_t seed,
                int jobs) {
  if (train.empty()) throw ConfigError("empty training set");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  ValidateSearchSpace(space);
  ValidateHyperparameters(base);

  std::mt19937_64 rng(seed);
  std::vector<Trial> results(static_cast<std::size_t>(trials));
  for (std::size_t t = 0; t < results.size(); ++t) {
    Hyperparameters hp = base;
    hp.alpha = Draw(rng, space.alpha);
    hp.beta = Draw(rng, space.beta);
    hp.gamma = Draw(rng, space.gamma);
    hp.kappa = Draw(rng, space.kappa);
    hp.delta = Draw(rng, space.delta);
    results[t].index = t;
    results[t].hp = hp;
  }

  std::vector<std::set<Label>> gold(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    gold[i] = ExpandGold(train[i].gold, store.hypernyms);
  }

  internal::ParallelFor(results.size(), jobs, [&](std::size_t t) {
    double p_sum = 0.0, r_sum = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const RefinedImage img = RefineImage(train[i].record, store, results[t].hp);
      std::vector<Label> labels;
      for (const RefinedLabel& l : img.labels) labels.push_back(l.label);
      p_sum += Precision(labels, gold[i]);
      r_sum += Recall(labels, gold[i]);
    }
    const double n = static_cast<double>(train.size());
    results[t].f1 = F1(p_sum / n, r_sum / n);
  });

  TuneResult out;
  for (const Trial& t : results) {
    if (t.index == 0 || t.f1 > out.best_f1) {
      out.best = t.hp;
      out.best_f1 = t.f1;
      out.best_trial = t.index;
    }
  }
  out.trials = std::move(results);
  return out;
}

void WriteTrialLog(std::span<const Trial> trials, std::ostream& out) {
  out << "trial\talpha\tbeta\tgamma\tkappa\tdelta\tf1\n";
  char buf[256];
  for (const Trial& t : trials) {
    std::snprintf(buf, sizeof buf, "%zu\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.6f",
                  t.index, t.hp.alpha, t.hp.beta, t.hp.gamma, t.hp.kappa,
                  t.hp.delta, t.f1);
    out << buf << '\n';
  }
}

}  // namespace tagrefine
