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

#ifndef TAGREFINE_VSIM_MINER_HPP_
#define TAGREFINE_VSIM_MINER_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "tagrefine/detection.hpp"
#include "tagrefine/knowledge_store.hpp"

// Mines "confusability" scores from raw detector output:
//
//   vsim(a, b) = sum over boxes holding both a and b of (conf(a) + conf(b))
//                ---------------------------------------------------------
//                sum over boxes holding a of conf(a) + same for b
//
// Labels that only ever appear together score 1, labels that never share a
// box score 0.

namespace tagrefine {

// Confidence sum kept in 2^-40 fixed point so that accumulation is exactly
// associative: shards merged in any order give bit-identical tables.
class ExactSum {
 public:
  // Throws ContractViolation for negative, non-finite or huge values.
  void Add(double value);
  void Merge(const ExactSum& other) { units_ += other.units_; }
  double value() const;
  bool is_zero() const { return units_ == 0; }

  friend bool operator==(const ExactSum&, const ExactSum&) = default;
  friend double Ratio(const ExactSum& num, const ExactSum& den);
  friend ExactSum operator+(ExactSum a, const ExactSum& b) {
    a.units_ += b.units_;
    return a;
  }

 private:
  __int128 units_ = 0;
};

class MiningAccumulator {
 public:
  // Adds every box of a record. The record is validated first and rejected
  // as a whole (ContractViolation, accumulator untouched) when a box holds a
  // non-positive confidence or a repeated label.
  void Add(const DetectionRecord& record);

  // Monoid merge: Accumulate(A) + Accumulate(B) == Accumulate(A ++ B).
  void Merge(const MiningAccumulator& other);

  // Sum over shared boxes of conf(a) + conf(b); 0 when never co-candidates.
  double PairSum(const Label& a, const Label& b) const;
  // Sum over boxes containing label of its confidence.
  double Total(const Label& label) const;

  bool empty() const { return totals_.empty(); }
  std::size_t records() const { return records_; }
  std::size_t boxes() const { return boxes_; }
  std::size_t label_count() const { return totals_.size(); }
  std::size_t pair_count() const { return pairs_.size(); }

  friend bool operator==(const MiningAccumulator& a,
                         const MiningAccumulator& b) {
    return a.totals_ == b.totals_ && a.pairs_ == b.pairs_;
  }

 private:
  friend VsimTable Finalize(const MiningAccumulator& acc);

  std::map<Label, ExactSum> totals_;
  std::map<std::pair<Label, Label>, ExactSum> pairs_;
  std::size_t records_ = 0;
  std::size_t boxes_ = 0;
};

// Pairs never seen together are omitted (score 0).
VsimTable Finalize(const MiningAccumulator& acc);

struct MiningReport {
  std::size_t records = 0;    // accepted
  std::size_t malformed = 0;  // unparsable JSON or schema errors
  std::size_t rejected = 0;   // parsed but failed box invariants
  std::size_t warnings() const { return malformed + rejected; }
};

// Streams a JSON-lines corpus. Bad lines are skipped and counted; only an
// unreadable file throws (IoError).
MiningAccumulator AccumulateFile(const std::string& path, MiningReport* report);

}  // namespace tagrefine

#endif  // TAGREFINE_VSIM_MINER_HPP_
