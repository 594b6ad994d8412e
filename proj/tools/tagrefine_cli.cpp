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

// Command-line front end. Talks to the engine only through the C API.

#include <cstdint>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tagrefine/tagrefine.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 2;
constexpr int kExitMismatch = 3;

struct Options {
  // Knowledge tables.
  std::string embeddings, hypernyms, allowlist, assertions, coloc, vsim;
  double hypernym_threshold = 0.0;

  // Shared flags.
  tr_params params{};
  std::string budget = "5";
  std::string budget_mode = "constraint";
  bool visir_star = false;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string config;

  // mine-vsim
  std::string corpus;
  std::string out = "-";

  // refine
  std::string detections;
  bool select_incoherent = false;
  std::string dump_lp;

  // eval
  std::vector<std::string> systems;
  std::string judgments;

  // tune
  std::string train;
  int trials = 50;
  std::string log;
  std::string alpha_range = "0:1", beta_range = "0:1", gamma_range = "0:1",
              kappa_range = "0:1", delta_range = "0:1";
};

int Fail(tr_status status) {
  std::cerr << "tagrefine: " << tr_status_name(status) << ": "
            << tr_last_error() << "\n";
  return status == TR_ERR_MISMATCH ? kExitMismatch : kExitError;
}

void AddSharedFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config,
                  "key=value file of long flag names; flags win")
      ->check(CLI::ExistingFile);
  cmd->add_option("--alpha", o.params.alpha, "weight of visual confidence");
  cmd->add_option("--beta", o.params.beta, "weight of pairwise relatedness");
  cmd->add_option("--gamma", o.params.gamma, "weight of abstract labels");
  cmd->add_option("--kappa", o.params.kappa,
                  "weight of generalization inside the unary term");
  cmd->add_option("--delta", o.params.delta,
                  "mix of embedding cosine and co-location in relatedness");
  cmd->add_option("--budget", o.budget,
                  "total label budget, or 'none' to solve without it and "
                  "truncate to 5 labels");
  cmd->add_option("--budget-mode", o.budget_mode,
                  "where the budget is applied")
      ->check(CLI::IsMember({"constraint", "truncate"}));
  cmd->add_option("--tau-s", o.params.tau_s,
                  "visual similarity threshold for similar labels");
  cmd->add_flag("--visir-star", o.visir_star,
                "cap visual labels at floor(0.8 * boxes)");
  cmd->add_option("--jobs", o.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed");
}

void AddKnowledgeFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--embeddings", o.embeddings, "word vectors (text format)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--hypernyms", o.hypernyms, "child\\tparent\\tdepth TSV")
      ->check(CLI::ExistingFile);
  cmd->add_option("--allowlist", o.allowlist, "label\\tscore TSV")
      ->check(CLI::ExistingFile);
  cmd->add_option("--hypernym-threshold", o.hypernym_threshold,
                  "minimum allowlist score for hypernyms");
  cmd->add_option("--assertions", o.assertions,
                  "subject\\trelation\\tobject\\tscore TSV")
      ->check(CLI::ExistingFile);
  cmd->add_option("--coloc", o.coloc, "a\\tb\\tcount TSV")
      ->check(CLI::ExistingFile);
  cmd->add_option("--vsim", o.vsim, "mined visual similarity TSV")
      ->check(CLI::ExistingFile);
  cmd->add_option("--abstract-cap", o.params.abstract_cap,
                  "abstract candidates kept per image");
}

const char* OrNull(const std::string& s) {
  return s.empty() ? nullptr : s.c_str();
}

// Applies the string-valued flags to o.params. Returns false on bad input.
bool FinishParams(Options& o) {
  o.params.visir_star = o.visir_star ? 1 : 0;
  o.params.budget_mode =
      o.budget_mode == "truncate" ? TR_BUDGET_TRUNCATE : TR_BUDGET_CONSTRAINT;
  if (o.budget == "none") {
    o.params.budget_mode = TR_BUDGET_TRUNCATE;
    o.params.budget = 5;
  } else {
    try {
      std::size_t used = 0;
      o.params.budget = std::stoi(o.budget, &used);
      if (used != o.budget.size()) throw std::invalid_argument(o.budget);
    } catch (const std::exception&) {
      std::cerr << "tagrefine: --budget: expected an integer or 'none', got '"
                << o.budget << "'\n";
      return false;
    }
  }
  return true;
}

class Knowledge {
 public:
  ~Knowledge() { tr_knowledge_free(k_); }
  tr_status Load(const Options& o) {
    tr_knowledge_paths paths{};
    paths.embeddings = OrNull(o.embeddings);
    paths.hypernyms = OrNull(o.hypernyms);
    paths.allowlist = OrNull(o.allowlist);
    paths.hypernym_threshold = o.hypernym_threshold;
    paths.assertions = OrNull(o.assertions);
    paths.coloc = OrNull(o.coloc);
    paths.vsim = OrNull(o.vsim);
    return tr_knowledge_load(&paths, &k_);
  }
  const tr_knowledge* get() const { return k_; }

 private:
  tr_knowledge* k_ = nullptr;
};

std::optional<tr_range> ParseRange(const std::string& flag,
                                   const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
    tr_range r{std::stod(lo, &a), std::stod(hi, &b)};
    if (a != lo.size() || b != hi.size()) throw std::invalid_argument(text);
    return r;
  } catch (const std::exception&) {
    std::cerr << "tagrefine: " << flag << ": expected lo:hi, got '" << text
              << "'\n";
    return std::nullopt;
  }
}

int RunMine(const Options& o) {
  tr_mine_report report{};
  const tr_status st = tr_mine_vsim(o.corpus.c_str(), o.out.c_str(), &report);
  if (st != TR_OK) return Fail(st);
  std::cerr << "pairs=" << report.pairs << " labels=" << report.labels
            << " records=" << report.records << "\n"
            << "warnings=" << report.malformed + report.rejected
            << " (malformed=" << report.malformed
            << " rejected=" << report.rejected << ")\n";
  return kExitOk;
}

int RunRefine(Options& o) {
  if (!FinishParams(o)) return kExitError;
  tr_status st = tr_params_validate(&o.params);
  if (st != TR_OK) return Fail(st);
  Knowledge k;
  if ((st = k.Load(o)) != TR_OK) return Fail(st);
  tr_refine_options opts;
  tr_refine_options_init(&opts);
  opts.jobs = o.jobs;
  opts.select_incoherent = o.select_incoherent ? 1 : 0;
  opts.dump_lp_dir = OrNull(o.dump_lp);
  tr_refine_report report{};
  st = tr_refine_file(k.get(), &o.params, &opts, o.detections.c_str(),
                      o.out.c_str(), &report);
  if (st != TR_OK) return Fail(st);
  std::cerr << "images=" << report.images_out << "/" << report.images_in
            << " labels=" << report.labels << "\n";
  return kExitOk;
}

int RunEval(const Options& o) {
  std::vector<std::string> names, paths;
  for (const std::string& s : o.systems) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      names.push_back(s);
      paths.push_back(s);
    } else {
      names.push_back(s.substr(0, eq));
      paths.push_back(s.substr(eq + 1));
    }
  }
  std::vector<tr_system> systems;
  for (std::size_t i = 0; i < names.size(); ++i) {
    systems.push_back({names[i].c_str(), paths[i].c_str()});
  }
  const tr_status st = tr_eval_files(systems.data(), systems.size(),
                                     o.judgments.c_str(), o.out.c_str());
  return st == TR_OK ? kExitOk : Fail(st);
}

int RunTune(Options& o) {
  if (o.trials < 1) {
    std::cerr << "tagrefine: --trials must be >= 1\n";
    return kExitError;
  }
  if (!FinishParams(o)) return kExitError;
  tr_status st = tr_params_validate(&o.params);
  if (st != TR_OK) return Fail(st);
  tr_search_space space;
  const auto a = ParseRange("--alpha-range", o.alpha_range);
  const auto b = ParseRange("--beta-range", o.beta_range);
  const auto g = ParseRange("--gamma-range", o.gamma_range);
  const auto kp = ParseRange("--kappa-range", o.kappa_range);
  const auto d = ParseRange("--delta-range", o.delta_range);
  if (!a || !b || !g || !kp || !d) return kExitError;
  space.alpha = *a;
  space.beta = *b;
  space.gamma = *g;
  space.kappa = *kp;
  space.delta = *d;
  Knowledge k;
  if ((st = k.Load(o)) != TR_OK) return Fail(st);
  tr_params best;
  double best_f1 = 0.0;
  st = tr_tune_file(k.get(), &o.params, &space, o.train.c_str(), o.trials,
                    o.seed, o.jobs, OrNull(o.log), &best, &best_f1);
  if (st != TR_OK) return Fail(st);
  // Printed as a config snippet that --config accepts.
  std::printf("# best f1 %.6f over %d trials, seed %llu\n", best_f1, o.trials,
              static_cast<unsigned long long>(o.seed));
  std::printf("alpha=%.17g\nbeta=%.17g\ngamma=%.17g\nkappa=%.17g\n"
              "delta=%.17g\n",
              best.alpha, best.beta, best.gamma, best.kappa, best.delta);
  return kExitOk;
}

bool IsFlagToken(const std::string& arg, const std::string& key) {
  const std::string flag = "--" + key;
  return arg == flag || arg.rfind(flag + "=", 0) == 0;
}

// Splices the entries of a --config file into the argument list ahead of the
// command-line flags. Keys are long flag names without dashes, either at top
// level or under a [subcommand] section; keys also given as flags are
// skipped so that flags win.
std::vector<std::string> ExpandConfig(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return args;
  // Leaves --config in place so a missing file is reported by the parser.
  std::ifstream probe(path);
  if (!probe) return args;
  if (rest.size() < 2) return rest;
  const std::string& command = rest[1];
  std::vector<std::string> out = {rest[0], command};
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty() &&
        !(item.parents.size() == 1 && item.parents[0] == command)) {
      continue;
    }
    bool given = false;
    for (std::size_t i = 2; i < rest.size(); ++i) {
      given = given || IsFlagToken(rest[i], item.name);
    }
    if (given || item.inputs.empty()) continue;
    const std::string& value = item.inputs.front();
    if (value == "true" || value == "false") {
      if (value == "true") out.push_back("--" + item.name);
      continue;
    }
    for (const std::string& v : item.inputs) {
      out.push_back("--" + item.name);
      out.push_back(v);
    }
  }
  out.insert(out.end(), rest.begin() + 2, rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  tr_params_init(&o.params);

  CLI::App app{"Label refinement over visual, hypernym and abstract labels",
               "tagrefine"};
  app.set_version_flag("--version", tr_version());
  app.require_subcommand(1);

  CLI::App* mine = app.add_subcommand(
      "mine-vsim", "mine visual similarity from a detection corpus");
  mine->add_option("--corpus", o.corpus, "detections JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  mine->add_option("--out", o.out, "vsim TSV, '-' for stdout");
  AddSharedFlags(mine, o);

  CLI::App* refine = app.add_subcommand("refine", "refine detected labels");
  refine->add_option("--detections", o.detections, "detections JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  refine->add_option("--out", o.out, "refined JSONL, '-' for stdout");
  refine->add_flag("--select-incoherent", o.select_incoherent,
                   "keep only images with 3-7 boxes and low relatedness");
  refine->add_option("--dump-lp", o.dump_lp,
                     "directory receiving one LP file per image");
  AddSharedFlags(refine, o);
  AddKnowledgeFlags(refine, o);

  CLI::App* eval = app.add_subcommand("eval", "score refined labels");
  eval->add_option("--system", o.systems, "name=refined.jsonl, repeatable")
      ->required();
  eval->add_option("--judgments", o.judgments, "judgments JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--out", o.out, "metrics TSV, '-' for stdout");
  AddSharedFlags(eval, o);

  CLI::App* tune = app.add_subcommand("tune", "randomized weight search");
  tune->add_option("--train", o.train, "training JSONL with gold labels")
      ->required()
      ->check(CLI::ExistingFile);
  tune->add_option("--trials", o.trials, "number of sampled configurations");
  tune->add_option("--log", o.log, "trial log TSV");
  tune->add_option("--alpha-range", o.alpha_range, "lo:hi");
  tune->add_option("--beta-range", o.beta_range, "lo:hi");
  tune->add_option("--gamma-range", o.gamma_range, "lo:hi");
  tune->add_option("--kappa-range", o.kappa_range, "lo:hi");
  tune->add_option("--delta-range", o.delta_range, "lo:hi");
  AddSharedFlags(tune, o);
  AddKnowledgeFlags(tune, o);

  try {
    std::vector<std::string> args = ExpandConfig({argv, argv + argc});
    // CLI11 consumes a reversed argument vector without the program name.
    args.erase(args.begin());
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*mine) return RunMine(o);
  if (*refine) return RunRefine(o);
  if (*eval) return RunEval(o);
  return RunTune(o);
}
