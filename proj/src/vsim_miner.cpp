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

#include "tagrefine/vsim_miner.hpp"

#include <algorithm>
#include <cmath>

#include "tagrefine/error.hpp"
#include "text_reader.hpp"

namespace tagrefine {

namespace {

constexpr double kUnitsPerOne = 1099511627776.0;  // 2^40
constexpr double kMaxAddend = 1.0e6;

}  // namespace

void ExactSum::Add(double value) {
  if (!std::isfinite(value) || value < 0 || value > kMaxAddend) {
    throw ContractViolation("confidence outside the accumulable range");
  }
  units_ += static_cast<__int128>(std::llround(value * kUnitsPerOne));
}

double ExactSum::value() const {
  return static_cast<double>(units_) / kUnitsPerOne;
}

double Ratio(const ExactSum& num, const ExactSum& den) {
  if (den.units_ == 0) return 0.0;
  if (num.units_ == den.units_) return 1.0;
  return static_cast<double>(num.units_) / static_cast<double>(den.units_);
}

void MiningAccumulator::Add(const DetectionRecord& record) {
  ValidateRecord(record);
  for (const BoundingBox& box : record.boxes) {
    if (std::any_of(box.candidates.begin(), box.candidates.end(),
                    [](const Candidate& c) { return c.conf > kMaxAddend; })) {
      throw ContractViolation("confidence too large in box '" + box.box_id +
                              "'");
    }
  }
  for (const BoundingBox& box : record.boxes) {
    const auto& cands = box.candidates;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      totals_[cands[i].label].Add(cands[i].conf);
      for (std::size_t j = i + 1; j < cands.size(); ++j) {
        const Candidate* a = &cands[i];
        const Candidate* b = &cands[j];
        if (b->label < a->label) std::swap(a, b);
        ExactSum& sum = pairs_[{a->label, b->label}];
        sum.Add(a->conf);
        sum.Add(b->conf);
      }
    }
    ++boxes_;
  }
  ++records_;
}

void MiningAccumulator::Merge(const MiningAccumulator& other) {
  for (const auto& [label, sum] : other.totals_) totals_[label].Merge(sum);
  for (const auto& [pair, sum] : other.pairs_) pairs_[pair].Merge(sum);
  records_ += other.records_;
  boxes_ += other.boxes_;
}

double MiningAccumulator::PairSum(const Label& a, const Label& b) const {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = pairs_.find(key);
  return it == pairs_.end() ? 0.0 : it->second.value();
}

double MiningAccumulator::Total(const Label& label) const {
  auto it = totals_.find(label);
  return it == totals_.end() ? 0.0 : it->second.value();
}

VsimTable Finalize(const MiningAccumulator& acc) {
  VsimTable table;
  for (const auto& [pair, num] : acc.pairs_) {
    if (num.is_zero()) continue;
    const ExactSum den = acc.totals_.at(pair.first) + acc.totals_.at(pair.second);
    table.Set(pair.first, pair.second, std::min(1.0, Ratio(num, den)));
  }
  return table;
}

MiningAccumulator AccumulateFile(const std::string& path,
                                 MiningReport* report) {
  internal::LineReader reader(path);
  MiningAccumulator acc;
  MiningReport local;
  std::string_view line;
  while (reader.Next(&line)) {
    DetectionRecord record;
    try {
      record = ParseDetectionJson(line, /*validate=*/false);
    } catch (const ContractViolation&) {
      ++local.malformed;
      continue;
    }
    try {
      acc.Add(record);
      ++local.records;
    } catch (const ContractViolation&) {
      ++local.rejected;
    }
  }
  if (report) *report = local;
  return acc;
}

}  // namespace tagrefine
