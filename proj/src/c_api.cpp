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

#include "tagrefine/tagrefine.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "parallel.hpp"
#include "text_reader.hpp"
#include "tagrefine/error.hpp"
#include "tagrefine/eval_harness.hpp"
#include "tagrefine/knowledge_store.hpp"
#include "tagrefine/pipeline.hpp"
#include "tagrefine/vsim_miner.hpp"

using namespace tagrefine;

struct tr_knowledge {
  KnowledgeStore store;
};

struct tr_result {
  RefinedImage image;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
tr_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return TR_OK;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return TR_ERR_IO;
  } catch (const LoadError& e) {
    g_last_error = e.what();
    return TR_ERR_PARSE;
  } catch (const ConfigError& e) {
    g_last_error = e.what();
    return TR_ERR_CONFIG;
  } catch (const MismatchError& e) {
    g_last_error = e.what();
    return TR_ERR_MISMATCH;
  } catch (const ContractViolation& e) {
    g_last_error = e.what();
    return TR_ERR_CONTRACT;
  } catch (const SizeError& e) {
    g_last_error = e.what();
    return TR_ERR_SIZE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TR_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw ContractViolation(what);
}

Hyperparameters ToHyperparameters(const tr_params& p) {
  Hyperparameters hp;
  hp.alpha = p.alpha;
  hp.beta = p.beta;
  hp.gamma = p.gamma;
  hp.kappa = p.kappa;
  hp.delta = p.delta;
  hp.tau_s = p.tau_s;
  hp.budget = p.budget;
  if (p.budget_mode != TR_BUDGET_CONSTRAINT && p.budget_mode != TR_BUDGET_TRUNCATE) {
    throw ConfigError("unknown budget mode");
  }
  hp.budget_mode = p.budget_mode == TR_BUDGET_TRUNCATE ? BudgetMode::kTruncate
                                                       : BudgetMode::kConstraint;
  hp.visir_star = p.visir_star != 0;
  hp.abstract_cap = p.abstract_cap;
  ValidateHyperparameters(hp);
  return hp;
}

void FromHyperparameters(const Hyperparameters& hp, tr_params* p) {
  p->alpha = hp.alpha;
  p->beta = hp.beta;
  p->gamma = hp.gamma;
  p->kappa = hp.kappa;
  p->delta = hp.delta;
  p->tau_s = hp.tau_s;
  p->budget = hp.budget;
  p->budget_mode = hp.budget_mode == BudgetMode::kTruncate ? TR_BUDGET_TRUNCATE
                                                           : TR_BUDGET_CONSTRAINT;
  p->visir_star = hp.visir_star ? 1 : 0;
  p->abstract_cap = hp.abstract_cap;
}

std::optional<std::string> OptPath(const char* p) {
  if (!p || !*p) return std::nullopt;
  return std::string(p);
}

// "-" writes to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw IoError(path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void Close(const std::string& path) {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw IoError(path);
    } else {
      std::cout.flush();
    }
  }

 private:
  std::ofstream file_;
};

std::string SafeFileName(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

}  // namespace

extern "C" {

const char* tr_last_error(void) { return g_last_error.c_str(); }

const char* tr_status_name(tr_status status) {
  switch (status) {
    case TR_OK: return "ok";
    case TR_ERR_IO: return "io error";
    case TR_ERR_PARSE: return "parse error";
    case TR_ERR_CONFIG: return "configuration error";
    case TR_ERR_MISMATCH: return "image id mismatch";
    case TR_ERR_CONTRACT: return "invalid argument";
    case TR_ERR_SIZE: return "instance too large";
    case TR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tr_version(void) { return "1.0.0"; }

void tr_params_init(tr_params* params) {
  if (params) FromHyperparameters(Hyperparameters{}, params);
}

tr_status tr_params_validate(const tr_params* params) {
  return Guard([&] {
    Require(params != nullptr, "null params");
    ToHyperparameters(*params);
  });
}

tr_status tr_knowledge_load(const tr_knowledge_paths* paths, tr_knowledge** out) {
  return Guard([&] {
    Require(paths != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    KnowledgePaths kp;
    kp.embeddings = OptPath(paths->embeddings);
    kp.hypernyms = OptPath(paths->hypernyms);
    kp.allowlist = OptPath(paths->allowlist);
    kp.assertions = OptPath(paths->assertions);
    kp.coloc = OptPath(paths->coloc);
    kp.vsim = OptPath(paths->vsim);
    kp.hypernym_threshold = paths->hypernym_threshold;
    auto handle = std::make_unique<tr_knowledge>();
    handle->store = LoadKnowledge(kp);
    *out = handle.release();
  });
}

void tr_knowledge_free(tr_knowledge* knowledge) { delete knowledge; }

tr_status tr_knowledge_stats_get(const tr_knowledge* knowledge,
                                 tr_knowledge_stats* out) {
  return Guard([&] {
    Require(knowledge != nullptr && out != nullptr, "null argument");
    const KnowledgeStore& s = knowledge->store;
    out->embeddings = s.embeddings.size();
    out->embedding_dim = s.embeddings.dim();
    out->hypernym_edges = s.hypernyms.size();
    out->assertions = s.assertions.size();
    out->coloc_pairs = s.coloc.size();
    out->vsim_pairs = s.vsim.pair_count();
    out->warnings = s.warnings();
  });
}

tr_status tr_knowledge_srel(const tr_knowledge* knowledge,
                            const tr_params* params, const char* a,
                            const char* b, double* out) {
  return Guard([&] {
    Require(knowledge && params && a && b && out, "null argument");
    const Hyperparameters hp = ToHyperparameters(*params);
    const Relatedness rel(hp.relatedness(), knowledge->store.embeddings,
                          knowledge->store.coloc);
    *out = rel.Visual(Label(a), Label(b));
  });
}

tr_status tr_mine_vsim(const char* corpus_path, const char* out_path,
                       tr_mine_report* report) {
  return Guard([&] {
    Require(corpus_path && out_path, "null path");
    MiningReport mr;
    const MiningAccumulator acc = AccumulateFile(corpus_path, &mr);
    const VsimTable table = Finalize(acc);
    Output out(out_path);
    WriteVsim(table, out.stream());
    out.Close(out_path);
    if (report) {
      report->records = mr.records;
      report->malformed = mr.malformed;
      report->rejected = mr.rejected;
      report->labels = table.label_count();
      report->pairs = table.pair_count();
    }
  });
}

void tr_refine_options_init(tr_refine_options* options) {
  if (!options) return;
  options->jobs = 1;
  options->select_incoherent = 0;
  options->dump_lp_dir = nullptr;
}

tr_status tr_refine_file(const tr_knowledge* knowledge, const tr_params* params,
                         const tr_refine_options* options,
                         const char* detections_path, const char* out_path,
                         tr_refine_report* report) {
  return Guard([&] {
    Require(knowledge && params && detections_path && out_path,
            "null argument");
    tr_refine_options opts;
    tr_refine_options_init(&opts);
    if (options) opts = *options;
    Require(opts.jobs >= 1, "jobs must be >= 1");
    const Hyperparameters hp = ToHyperparameters(*params);
    const KnowledgeStore& store = knowledge->store;

    std::vector<DetectionRecord> records = LoadDetections(detections_path);
    const std::size_t images_in = records.size();
    if (opts.select_incoherent) {
      std::erase_if(records, [&](const DetectionRecord& r) {
        return !IsIncoherent(r, store, hp);
      });
    }
    const std::optional<std::string> lp_dir = OptPath(opts.dump_lp_dir);
    if (lp_dir) std::filesystem::create_directories(*lp_dir);

    std::vector<RefinedImage> refined(records.size());
    internal::ParallelFor(records.size(), opts.jobs, [&](std::size_t i) {
      if (!lp_dir) {
        refined[i] = RefineImage(records[i], store, hp);
        return;
      }
      IlpInstance inst;
      refined[i] = RefineImage(records[i], store, hp, &inst);
      const std::string path =
          (std::filesystem::path(*lp_dir) /
           (std::to_string(i) + "_" + SafeFileName(records[i].image_id) + ".lp"))
              .string();
      std::ofstream lp(path, std::ios::binary | std::ios::trunc);
      if (!lp) throw IoError(path);
      WriteLp(inst, lp);
    });

    Output out(out_path);
    std::size_t labels = 0;
    for (const RefinedImage& img : refined) {
      out.stream() << RefinedToJson(img) << '\n';
      labels += img.labels.size();
    }
    out.Close(out_path);
    if (report) {
      report->images_in = images_in;
      report->images_out = refined.size();
      report->labels = labels;
    }
  });
}

tr_status tr_refine_json(const tr_knowledge* knowledge, const tr_params* params,
                         const char* record_json, tr_result** out) {
  return Guard([&] {
    Require(knowledge && params && record_json && out, "null argument");
    *out = nullptr;
    const Hyperparameters hp = ToHyperparameters(*params);
    DetectionRecord record;
    try {
      record = ParseDetectionJson(record_json);
    } catch (const ContractViolation& e) {
      throw LoadError("<record>", 0, e.what());
    }
    auto result = std::make_unique<tr_result>();
    result->image = RefineImage(record, knowledge->store, hp);
    result->json = RefinedToJson(result->image);
    *out = result.release();
  });
}

void tr_result_free(tr_result* result) { delete result; }

size_t tr_result_label_count(const tr_result* result) {
  return result ? result->image.labels.size() : 0;
}

const char* tr_result_label(const tr_result* result, size_t index) {
  if (!result || index >= result->image.labels.size()) return nullptr;
  return result->image.labels[index].label.str().c_str();
}

const char* tr_result_space(const tr_result* result, size_t index) {
  if (!result || index >= result->image.labels.size()) return nullptr;
  return LabelSpaceName(result->image.labels[index].space);
}

const char* tr_result_box(const tr_result* result, size_t index) {
  if (!result || index >= result->image.labels.size()) return nullptr;
  return result->image.labels[index].box.c_str();
}

double tr_result_objective(const tr_result* result) {
  return result ? result->image.objective : 0.0;
}

const char* tr_result_json(const tr_result* result) {
  return result ? result->json.c_str() : nullptr;
}

tr_status tr_eval_files(const tr_system* systems, size_t system_count,
                        const char* judgments_path, const char* report_path) {
  return Guard([&] {
    Require(judgments_path && report_path, "null path");
    Require(systems != nullptr || system_count == 0, "null systems");
    Require(system_count > 0, "no systems to evaluate");
    for (size_t s = 0; s < system_count; ++s) {
      Require(systems[s].name && systems[s].refined_path, "null system entry");
      internal::RequireReadable(systems[s].refined_path);
    }
    internal::RequireReadable(judgments_path);
    const std::vector<JudgedPool> pools = LoadJudgments(judgments_path);
    std::vector<SystemRun> runs;
    for (size_t s = 0; s < system_count; ++s) {
      runs.push_back({systems[s].name, LoadRefined(systems[s].refined_path)});
    }
    const std::vector<MetricRow> rows = Evaluate(runs, pools);
    Output out(report_path);
    WriteReport(rows, out.stream());
    out.Close(report_path);
  });
}

void tr_search_space_init(tr_search_space* space) {
  if (!space) return;
  space->alpha = space->beta = space->gamma = space->kappa = space->delta =
      tr_range{0.0, 1.0};
}

tr_status tr_tune_file(const tr_knowledge* knowledge, const tr_params* base,
                       const tr_search_space* space, const char* train_path,
                       int trials, uint64_t seed, int jobs,
                       const char* log_path, tr_params* best, double* best_f1) {
  return Guard([&] {
    Require(knowledge && base && space && train_path, "null argument");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    Require(jobs >= 1, "jobs must be >= 1");
    const Hyperparameters hp = ToHyperparameters(*base);
    SearchSpace ss;
    ss.alpha = {space->alpha.lo, space->alpha.hi};
    ss.beta = {space->beta.lo, space->beta.hi};
    ss.gamma = {space->gamma.lo, space->gamma.hi};
    ss.kappa = {space->kappa.lo, space->kappa.hi};
    ss.delta = {space->delta.lo, space->delta.hi};
    if (log_path) {
      // Fail on an unwritable log before spending time on trials.
      Output probe(log_path);
    }
    const std::vector<TrainExample> train = LoadTrainSet(train_path);
    const TuneResult result =
        Tune(train, knowledge->store, hp, ss, trials, seed, jobs);
    if (log_path) {
      Output out(log_path);
      WriteTrialLog(result.trials, out.stream());
      out.Close(log_path);
    }
    if (best) FromHyperparameters(result.best, best);
    if (best_f1) *best_f1 = result.best_f1;
  });
}

}  // extern "C"
