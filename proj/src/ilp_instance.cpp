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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string_view>
#include <tuple>

#include "tagrefine/error.hpp"
#include "tagrefine/ilp_engine.hpp"

namespace tagrefine {

namespace {

auto ZKey(const ZVar& v) {
  return std::tie(v.box_a, v.cand_a, v.box_b, v.cand_b);
}
auto WKey(const WVar& v) { return std::tie(v.box, v.cand, v.abstract); }

bool GoodCoef(double c) { return std::isfinite(c) && c >= 0.0; }

}  // namespace

std::size_t IlpInstance::x_count() const {
  std::size_t n = 0;
  for (const IlpBox& b : boxes) n += b.labels.size();
  return n;
}

int Assignment::visual_count() const {
  return static_cast<int>(std::count_if(visual.begin(), visual.end(),
                                        [](int c) { return c != kNoLabel; }));
}

void Canonicalize(IlpInstance& inst) {
  std::erase_if(inst.z, [](const ZVar& v) { return !(v.coef > 0.0); });
  std::erase_if(inst.w, [](const WVar& v) { return !(v.coef > 0.0); });
  std::sort(inst.z.begin(), inst.z.end(),
            [](const ZVar& a, const ZVar& b) { return ZKey(a) < ZKey(b); });
  std::sort(inst.w.begin(), inst.w.end(),
            [](const WVar& a, const WVar& b) { return WKey(a) < WKey(b); });
}

void ValidateInstance(const IlpInstance& inst) {
  const int n = static_cast<int>(inst.boxes.size());
  const int k = static_cast<int>(inst.abstracts.size());
  for (const IlpBox& b : inst.boxes) {
    if (b.labels.size() != b.unary.size() || b.labels.size() != b.spaces.size()) {
      throw ContractViolation("box '" + b.box_id + "' has ragged columns");
    }
    for (double u : b.unary) {
      if (!GoodCoef(u)) throw ContractViolation("bad unary coefficient");
    }
  }
  auto cand_ok = [&](int box, int cand) {
    return box >= 0 && box < n && cand >= 0 &&
           cand < static_cast<int>(inst.boxes[box].labels.size());
  };
  for (std::size_t t = 0; t < inst.z.size(); ++t) {
    const ZVar& v = inst.z[t];
    if (!cand_ok(v.box_a, v.cand_a) || !cand_ok(v.box_b, v.cand_b) ||
        v.box_a >= v.box_b) {
      throw ContractViolation("Z variable indices out of range");
    }
    if (!GoodCoef(v.coef)) throw ContractViolation("bad Z coefficient");
    if (t > 0 && !(ZKey(inst.z[t - 1]) < ZKey(v))) {
      throw ContractViolation("Z variables not sorted or duplicated");
    }
  }
  for (std::size_t t = 0; t < inst.w.size(); ++t) {
    const WVar& v = inst.w[t];
    if (!cand_ok(v.box, v.cand) || v.abstract < 0 || v.abstract >= k) {
      throw ContractViolation("W variable indices out of range");
    }
    if (!GoodCoef(v.coef)) throw ContractViolation("bad W coefficient");
    if (t > 0 && !(WKey(inst.w[t - 1]) < WKey(v))) {
      throw ContractViolation("W variables not sorted or duplicated");
    }
  }
  if (inst.max_abstract < 0) throw ContractViolation("negative abstract bound");
  if (inst.budget && *inst.budget < 0) throw ContractViolation("negative budget");
  if (inst.visual_cap && *inst.visual_cap < 0) {
    throw ContractViolation("negative visual cap");
  }
}

int VisualCapFor(std::size_t box_count) {
  return static_cast<int>((box_count * 4) / 5);
}

IlpInstance BuildInstance(const CandidateSets& candidates,
                          const Hyperparameters& hp, const Relatedness& rel) {
  ValidateHyperparameters(hp);
  IlpInstance inst;
  for (const BoxCandidates& bc : candidates.boxes) {
    IlpBox box;
    box.box_id = bc.box_id;
    for (const VisualCandidate& vc : bc.candidates) {
      box.labels.push_back(vc.label);
      box.spaces.push_back(SpaceOf(vc.origin));
      box.unary.push_back(hp.alpha * (vc.vconf + hp.kappa * vc.gconf));
    }
    inst.boxes.push_back(std::move(box));
  }
  for (const AbstractCandidate& ac : candidates.abstracts) {
    inst.abstracts.push_back(ac.label);
  }

  const int n = static_cast<int>(inst.boxes.size());
  for (int i = 0; i < n; ++i) {
    const auto& li = inst.boxes[i].labels;
    for (int j = 0; j < static_cast<int>(li.size()); ++j) {
      for (int m = i + 1; m < n; ++m) {
        const auto& lm = inst.boxes[m].labels;
        for (int k = 0; k < static_cast<int>(lm.size()); ++k) {
          const double coef = hp.beta * rel.Visual(li[j], lm[k]);
          if (coef > 0.0) inst.z.push_back({i, j, m, k, coef});
        }
      }
      for (int k = 0; k < static_cast<int>(candidates.abstracts.size()); ++k) {
        const AbstractCandidate& ac = candidates.abstracts[k];
        const double coef =
            hp.gamma * ac.score * rel.WithAbstract(li[j], ac.label);
        if (coef > 0.0) inst.w.push_back({i, j, k, coef});
      }
    }
  }

  inst.max_abstract = kMaxAbstractLabels;
  if (hp.budget_mode == BudgetMode::kConstraint) inst.budget = hp.budget;
  if (hp.visir_star) inst.visual_cap = VisualCapFor(inst.boxes.size());
  Canonicalize(inst);
  return inst;
}

double Objective(const IlpInstance& inst, const Assignment& a) {
  auto chosen = [&](int box, int cand) {
    return box < static_cast<int>(a.visual.size()) && a.visual[box] == cand;
  };
  auto has_abstract = [&](int k) {
    return std::binary_search(a.abstracts.begin(), a.abstracts.end(), k);
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < inst.boxes.size() && i < a.visual.size(); ++i) {
    if (a.visual[i] != kNoLabel) sum += inst.boxes[i].unary[a.visual[i]];
  }
  for (const ZVar& v : inst.z) {
    if (chosen(v.box_a, v.cand_a) && chosen(v.box_b, v.cand_b)) sum += v.coef;
  }
  for (const WVar& v : inst.w) {
    if (chosen(v.box, v.cand) && has_abstract(v.abstract)) sum += v.coef;
  }
  return sum;
}

std::string FeasibilityError(const IlpInstance& inst, const Assignment& a) {
  if (a.visual.size() != inst.boxes.size()) {
    return "assignment covers " + std::to_string(a.visual.size()) +
           " boxes, instance has " + std::to_string(inst.boxes.size());
  }
  for (std::size_t i = 0; i < a.visual.size(); ++i) {
    const int c = a.visual[i];
    if (c != kNoLabel &&
        (c < 0 || c >= static_cast<int>(inst.boxes[i].labels.size()))) {
      return "box " + std::to_string(i) + " choice out of range";
    }
  }
  for (std::size_t t = 0; t < a.abstracts.size(); ++t) {
    const int k = a.abstracts[t];
    if (k < 0 || k >= static_cast<int>(inst.abstracts.size())) {
      return "abstract index out of range";
    }
    if (t > 0 && a.abstracts[t - 1] >= k) {
      return "abstract indices not strictly ascending";
    }
  }
  if (static_cast<int>(a.abstracts.size()) > inst.max_abstract) {
    return "more than " + std::to_string(inst.max_abstract) + " abstract labels";
  }
  if (inst.visual_cap && a.visual_count() > *inst.visual_cap) {
    return "more than " + std::to_string(*inst.visual_cap) + " visual labels";
  }
  if (inst.budget && a.label_count() > *inst.budget) {
    return "label budget " + std::to_string(*inst.budget) + " exceeded";
  }
  return {};
}

bool PreferredOnTie(const IlpInstance& inst, const Assignment& a,
                    const Assignment& b) {
  if (a.label_count() != b.label_count()) {
    return a.label_count() < b.label_count();
  }
  auto sorted_labels = [&](const Assignment& x) {
    std::vector<std::string_view> out;
    for (std::size_t i = 0; i < x.visual.size(); ++i) {
      if (x.visual[i] != kNoLabel) {
        out.push_back(inst.boxes[i].labels[x.visual[i]].str());
      }
    }
    for (int k : x.abstracts) out.push_back(inst.abstracts[k].str());
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto la = sorted_labels(a);
  const auto lb = sorted_labels(b);
  if (la != lb) return la < lb;
  if (a.visual != b.visual) return a.visual < b.visual;
  return a.abstracts < b.abstracts;
}

Assignment TruncateToBudget(const IlpInstance& inst, Assignment a, int budget) {
  if (budget < 0) throw ConfigError("negative budget");
  a.objective = Objective(inst, a);
  while (a.label_count() > budget) {
    std::optional<Assignment> best;
    auto consider = [&](Assignment next) {
      next.objective = Objective(inst, next);
      if (!best || next.objective > best->objective ||
          (next.objective == best->objective &&
           PreferredOnTie(inst, next, *best))) {
        best = std::move(next);
      }
    };
    for (std::size_t i = 0; i < a.visual.size(); ++i) {
      if (a.visual[i] == kNoLabel) continue;
      Assignment next = a;
      next.visual[i] = kNoLabel;
      consider(std::move(next));
    }
    for (std::size_t t = 0; t < a.abstracts.size(); ++t) {
      Assignment next = a;
      next.abstracts.erase(next.abstracts.begin() + t);
      consider(std::move(next));
    }
    a = *std::move(best);
  }
  return a;
}

std::vector<RefinedLabel> ExtractLabels(const Assignment& a,
                                        const IlpInstance& inst) {
  if (std::string why = FeasibilityError(inst, a); !why.empty()) {
    throw ContractViolation("infeasible assignment: " + why);
  }
  std::vector<RefinedLabel> out;
  for (std::size_t i = 0; i < a.visual.size(); ++i) {
    if (a.visual[i] == kNoLabel) continue;
    const IlpBox& box = inst.boxes[i];
    out.push_back({box.labels[a.visual[i]], box.spaces[a.visual[i]], box.box_id});
  }
  std::vector<RefinedLabel> abstract;
  for (int k : a.abstracts) {
    abstract.push_back({inst.abstracts[k], LabelSpace::kAbstract,
                        std::string(kGlobalBox)});
  }
  std::sort(abstract.begin(), abstract.end(),
            [](const RefinedLabel& x, const RefinedLabel& y) {
              return x.label < y.label;
            });
  out.insert(out.end(), abstract.begin(), abstract.end());
  return out;
}

void WriteLp(const IlpInstance& inst, std::ostream& out) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto x = [](int i, int j) {
    return "X_" + std::to_string(i) + "_" + std::to_string(j);
  };
  auto y = [](int k) { return "Y_" + std::to_string(k); };
  auto z = [](const ZVar& v) {
    return "Z_" + std::to_string(v.box_a) + "_" + std::to_string(v.cand_a) +
           "_" + std::to_string(v.box_b) + "_" + std::to_string(v.cand_b);
  };
  auto w = [](const WVar& v) {
    return "W_" + std::to_string(v.box) + "_" + std::to_string(v.cand) + "_" +
           std::to_string(v.abstract);
  };

  out << "\\ boxes: " << inst.boxes.size()
      << ", abstract candidates: " << inst.abstracts.size() << "\n";
  for (std::size_t i = 0; i < inst.boxes.size(); ++i) {
    for (std::size_t j = 0; j < inst.boxes[i].labels.size(); ++j) {
      out << "\\ " << x(int(i), int(j)) << " = " << inst.boxes[i].box_id << " "
          << inst.boxes[i].labels[j].str() << "\n";
    }
  }
  for (std::size_t k = 0; k < inst.abstracts.size(); ++k) {
    out << "\\ " << y(int(k)) << " = " << inst.abstracts[k].str() << "\n";
  }

  out << "Maximize\n obj:";
  bool any = false;
  for (std::size_t i = 0; i < inst.boxes.size(); ++i) {
    for (std::size_t j = 0; j < inst.boxes[i].labels.size(); ++j) {
      out << " + " << num(inst.boxes[i].unary[j]) << " " << x(int(i), int(j));
      any = true;
    }
  }
  for (std::size_t k = 0; k < inst.abstracts.size(); ++k) {
    out << " + 0 " << y(int(k));
    any = true;
  }
  for (const ZVar& v : inst.z) out << " + " << num(v.coef) << " " << z(v);
  for (const WVar& v : inst.w) out << " + " << num(v.coef) << " " << w(v);
  if (!any) out << " 0";
  out << "\nSubject To\n";

  int row = 0;
  auto name = [&](const char* prefix) {
    return std::string(" ") + prefix + std::to_string(row++) + ": ";
  };
  for (std::size_t i = 0; i < inst.boxes.size(); ++i) {
    if (inst.boxes[i].labels.empty()) continue;
    out << name("box");
    for (std::size_t j = 0; j < inst.boxes[i].labels.size(); ++j) {
      out << (j ? " + " : "") << x(int(i), int(j));
    }
    out << " <= 1\n";
  }
  auto sum_y = [&]() {
    std::string s;
    for (std::size_t k = 0; k < inst.abstracts.size(); ++k) {
      s += (k ? " + " : "") + y(int(k));
    }
    return s;
  };
  auto sum_x = [&]() {
    std::string s;
    for (std::size_t i = 0; i < inst.boxes.size(); ++i) {
      for (std::size_t j = 0; j < inst.boxes[i].labels.size(); ++j) {
        s += (s.empty() ? "" : " + ") + x(int(i), int(j));
      }
    }
    return s;
  };
  if (!inst.abstracts.empty()) {
    out << name("abstract") << sum_y() << " <= " << inst.max_abstract << "\n";
  }
  if (inst.budget && !inst.empty()) {
    std::string sx = sum_x(), sy = sum_y();
    out << name("budget") << sx << (!sx.empty() && !sy.empty() ? " + " : "")
        << sy << " <= " << *inst.budget << "\n";
  }
  if (inst.visual_cap && inst.x_count() > 0) {
    out << name("visual") << sum_x() << " <= " << *inst.visual_cap << "\n";
  }
  for (const ZVar& v : inst.z) {
    const std::string zv = z(v), xa = x(v.box_a, v.cand_a), xb = x(v.box_b, v.cand_b);
    out << name("zl") << zv << " - " << xa << " - " << xb << " >= -1\n";
    out << name("zu") << zv << " - " << xa << " <= 0\n";
    out << name("zu") << zv << " - " << xb << " <= 0\n";
  }
  for (const WVar& v : inst.w) {
    const std::string wv = w(v), xa = x(v.box, v.cand), yk = y(v.abstract);
    out << name("wl") << wv << " - " << xa << " - " << yk << " >= -1\n";
    out << name("wu") << wv << " - " << xa << " <= 0\n";
    out << name("wu") << wv << " - " << yk << " <= 0\n";
  }
  out << "Binary\n";
  for (std::size_t i = 0; i < inst.boxes.size(); ++i) {
    for (std::size_t j = 0; j < inst.boxes[i].labels.size(); ++j) {
      out << " " << x(int(i), int(j)) << "\n";
    }
  }
  for (std::size_t k = 0; k < inst.abstracts.size(); ++k) out << " " << y(int(k)) << "\n";
  for (const ZVar& v : inst.z) out << " " << z(v) << "\n";
  for (const WVar& v : inst.w) out << " " << w(v) << "\n";
  out << "End\n";
}

}  // namespace tagrefine
