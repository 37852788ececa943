// Copyright 2026 The Declutter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECLUTTER_EVAL_HPP_
#define DECLUTTER_EVAL_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "declutter/corpus.hpp"
#include "declutter/textspan.hpp"

namespace declutter {

// Token-level comparison of one abstract's predicted and gold removals.
struct AbstractOutcome {
  std::string id;
  std::size_t gold_tokens = 0;
  std::size_t pred_tokens = 0;
  std::size_t excess_tokens = 0;   // predicted, not gold
  std::size_t missing_tokens = 0;  // gold, not predicted
  bool correct = true;
  bool labeled = false;  // the gold span set is non-empty

  std::size_t true_positive_tokens() const { return pred_tokens - excess_tokens; }
};

// Throws when a predicted span falls outside the text or the predicted set
// is not finalized. Gold spans are assumed validated by the loader.
AbstractOutcome score_abstract(const LabeledAbstract& record, std::span<const Span> predicted);

struct Prf {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

// Pooled over tokens. P = 1 when nothing is predicted, R = 1 when nothing
// is gold; F1 = 0 when P + R = 0.
Prf token_prf(std::span<const AbstractOutcome> outcomes);

// One row in the layout of the excess/missing tables. Percentages are kept
// unrounded; averages are absent when their share is zero.
struct EvalReport {
  std::string group_key;
  std::size_t count = 0;
  double share_correct = 0.0;
  double excess_share = 0.0;
  std::optional<double> excess_avg;
  double missing_share = 0.0;
  std::optional<double> missing_avg;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

// Strata for aggregate(). 'none' gives a single "all" row; 'has_labels'
// gives "no"/"yes" rows; 'category' keys rows by a per-id category, sorted
// by name, with unmapped ids under "(none)". Empty strata are omitted.
class Grouping {
 public:
  enum class Kind { none, has_labels, category };

  static Grouping none() { return Grouping(Kind::none, {}); }
  static Grouping has_labels() { return Grouping(Kind::has_labels, {}); }
  static Grouping category(std::map<std::string, std::string> by_id) {
    return Grouping(Kind::category, std::move(by_id));
  }

  Kind kind() const { return kind_; }
  std::string key_for(const AbstractOutcome& outcome) const;

 private:
  Grouping(Kind kind, std::map<std::string, std::string> by_id)
      : kind_(kind), by_id_(std::move(by_id)) {}

  Kind kind_;
  std::map<std::string, std::string> by_id_;
};

inline constexpr const char* kUncategorized = "(none)";

std::vector<EvalReport> aggregate(std::span<const AbstractOutcome> outcomes,
                                  const Grouping& grouping);

struct LengthBucketRow {
  std::size_t lo = 0;  // shortest and longest member, inclusive
  std::size_t hi = 0;
  std::size_t count = 0;
  double excess_share = 0.0;
  std::optional<double> excess_avg;
  double missing_share = 0.0;
  std::optional<double> missing_avg;
};

// Equal-frequency buckets over abstract token length. Bucket b (1-based)
// closes at the length of the ceil(b*N/n)-th shortest abstract and every
// abstract joins the first bucket whose closing length reaches it, so ties
// at a boundary stay in the lower bucket. Buckets that end up empty are
// dropped. Throws when an outcome id has no length or n_buckets is 0.
std::vector<LengthBucketRow> length_buckets(std::span<const AbstractOutcome> outcomes,
                                            const std::map<std::string, std::size_t>& token_lengths,
                                            std::size_t n_buckets);

// Human-readable tables; percentages to two decimals.
std::string format_eval_table(std::span<const EvalReport> rows);
std::string format_bucket_table(std::span<const LengthBucketRow> rows);

// Machine report: one JSON object per line, unrounded values.
void write_eval_report(std::span<const EvalReport> rows,
                       std::span<const LengthBucketRow> buckets, std::ostream& out);

}  // namespace declutter

#endif  // DECLUTTER_EVAL_HPP_
