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

#include "declutter/eval.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "declutter/error.hpp"
#include "declutter/unicode.hpp"

namespace declutter {
namespace {

// Column arithmetic shared by the strata rows and the length buckets.
struct Tally {
  std::size_t count = 0;
  std::size_t correct = 0;
  std::size_t with_excess = 0;
  std::size_t excess_tokens = 0;
  std::size_t with_missing = 0;
  std::size_t missing_tokens = 0;

  void add(const AbstractOutcome& o) {
    ++count;
    if (o.correct) ++correct;
    if (o.excess_tokens > 0) {
      ++with_excess;
      excess_tokens += o.excess_tokens;
    }
    if (o.missing_tokens > 0) {
      ++with_missing;
      missing_tokens += o.missing_tokens;
    }
  }

  double percent(std::size_t n) const {
    return count == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(count);
  }
  static std::optional<double> mean(std::size_t total, std::size_t n) {
    if (n == 0) return std::nullopt;
    return static_cast<double>(total) / static_cast<double>(n);
  }
};

std::string percent_cell(double v) { return fmt::format("{:.2f}%", v); }
std::string avg_cell(const std::optional<double>& v) {
  return v ? fmt::format("{:.2f}", *v) : std::string();
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

AbstractOutcome score_abstract(const LabeledAbstract& record, std::span<const Span> predicted) {
  const TokenMap map = tokenize(std::string_view(record.text));
  if (!is_finalized(predicted)) {
    throw Error("record '" + record.id + "': predicted spans are not a finalized set");
  }
  if (!predicted.empty() && predicted.back().end > map.source_length) {
    throw Error("record '" + record.id + "': predicted span out of bounds [" +
                std::to_string(predicted.back().start) + ", " +
                std::to_string(predicted.back().end) + ") over text of length " +
                std::to_string(map.source_length));
  }
  const auto gold = tokens_under(record.spans, map);
  const auto pred = tokens_under(predicted, map);

  std::vector<std::size_t> excess;
  std::vector<std::size_t> missing;
  std::set_difference(pred.begin(), pred.end(), gold.begin(), gold.end(), std::back_inserter(excess));
  std::set_difference(gold.begin(), gold.end(), pred.begin(), pred.end(), std::back_inserter(missing));

  AbstractOutcome o;
  o.id = record.id;
  o.gold_tokens = gold.size();
  o.pred_tokens = pred.size();
  o.excess_tokens = excess.size();
  o.missing_tokens = missing.size();
  o.correct = excess.empty() && missing.empty();
  o.labeled = !record.spans.empty();
  return o;
}

Prf token_prf(std::span<const AbstractOutcome> outcomes) {
  std::size_t tp = 0, pred = 0, gold = 0;
  for (const auto& o : outcomes) {
    tp += o.true_positive_tokens();
    pred += o.pred_tokens;
    gold += o.gold_tokens;
  }
  Prf prf;
  prf.precision = pred == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(pred);
  prf.recall = gold == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(gold);
  const double sum = prf.precision + prf.recall;
  prf.f1 = sum > 0.0 ? 2.0 * prf.precision * prf.recall / sum : 0.0;
  return prf;
}

std::string Grouping::key_for(const AbstractOutcome& outcome) const {
  switch (kind_) {
    case Kind::none:
      return "all";
    case Kind::has_labels:
      return outcome.labeled ? "yes" : "no";
    case Kind::category: {
      auto it = by_id_.find(outcome.id);
      return it == by_id_.end() ? std::string(kUncategorized) : it->second;
    }
  }
  return "all";
}

std::vector<EvalReport> aggregate(std::span<const AbstractOutcome> outcomes,
                                  const Grouping& grouping) {
  std::vector<const AbstractOutcome*> sorted;
  sorted.reserve(outcomes.size());
  for (const auto& o : outcomes) sorted.push_back(&o);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const AbstractOutcome* a, const AbstractOutcome* b) { return a->id < b->id; });

  std::map<std::string, std::vector<AbstractOutcome>> strata;
  for (const auto* o : sorted) strata[grouping.key_for(*o)].push_back(*o);

  std::vector<EvalReport> rows;
  for (const auto& [key, members] : strata) {
    Tally t;
    for (const auto& o : members) t.add(o);
    const Prf prf = token_prf(members);
    EvalReport row;
    row.group_key = key;
    row.count = t.count;
    row.share_correct = t.percent(t.correct);
    row.excess_share = t.percent(t.with_excess);
    row.excess_avg = Tally::mean(t.excess_tokens, t.with_excess);
    row.missing_share = t.percent(t.with_missing);
    row.missing_avg = Tally::mean(t.missing_tokens, t.with_missing);
    row.precision = prf.precision;
    row.recall = prf.recall;
    row.f1 = prf.f1;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<LengthBucketRow> length_buckets(std::span<const AbstractOutcome> outcomes,
                                            const std::map<std::string, std::size_t>& token_lengths,
                                            std::size_t n_buckets) {
  if (n_buckets == 0) throw Error("length_buckets: n_buckets must be at least 1");
  struct Entry {
    std::size_t length;
    const AbstractOutcome* outcome;
  };
  std::vector<Entry> entries;
  entries.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    auto it = token_lengths.find(o.id);
    if (it == token_lengths.end()) throw Error("length_buckets: no token length for id '" + o.id + "'");
    entries.push_back(Entry{it->second, &o});
  }
  if (entries.empty()) return {};
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.outcome->id < b.outcome->id;
  });

  const std::size_t n = entries.size();
  std::vector<std::size_t> edges;
  for (std::size_t b = 1; b <= n_buckets; ++b) {
    const std::size_t rank = (b * n + n_buckets - 1) / n_buckets;  // ceil(b*n/k)
    const std::size_t edge = entries[rank - 1].length;
    if (edges.empty() || edge > edges.back()) edges.push_back(edge);
  }

  std::vector<LengthBucketRow> rows;
  std::size_t next = 0;
  for (std::size_t b = 0; b < edges.size(); ++b) {
    Tally t;
    const std::size_t first = next;
    while (next < n && entries[next].length <= edges[b]) t.add(*entries[next++].outcome);
    if (t.count == 0) continue;
    LengthBucketRow row;
    row.lo = entries[first].length;
    row.hi = edges[b];
    row.count = t.count;
    row.excess_share = t.percent(t.with_excess);
    row.excess_avg = Tally::mean(t.excess_tokens, t.with_excess);
    row.missing_share = t.percent(t.with_missing);
    row.missing_avg = Tally::mean(t.missing_tokens, t.with_missing);
    rows.push_back(row);
  }
  return rows;
}

std::string format_eval_table(std::span<const EvalReport> rows) {
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, unicode::length(r.group_key));
  std::string out;
  out += fmt::format("{:<{}}  {:>7}  {:>13}  {:>12}  {:>13}  {:>13}  {:>14}  {:>9}  {:>9}  {:>9}\n",
                     "group", width, "count", "share_correct", "excess_share", "excess_tokens",
                     "missing_share", "missing_tokens", "precision", "recall", "f1");
  for (const auto& r : rows) {
    out += r.group_key + std::string(width - unicode::length(r.group_key), ' ');
    out += fmt::format("  {:>7}  {:>13}  {:>12}  {:>13}  {:>13}  {:>14}  {:>9.4f}  {:>9.4f}  {:>9.4f}\n",
                       r.count, percent_cell(r.share_correct), percent_cell(r.excess_share),
                       avg_cell(r.excess_avg), percent_cell(r.missing_share),
                       avg_cell(r.missing_avg), r.precision, r.recall, r.f1);
  }
  return out;
}

std::string format_bucket_table(std::span<const LengthBucketRow> rows) {
  std::string out;
  out += fmt::format("{:>13}  {:>7}  {:>12}  {:>13}  {:>13}  {:>14}\n", "tokens", "count",
                     "excess_share", "excess_tokens", "missing_share", "missing_tokens");
  for (const auto& r : rows) {
    out += fmt::format("{:>13}  {:>7}  {:>12}  {:>13}  {:>13}  {:>14}\n",
                       fmt::format("{}-{}", r.lo, r.hi), r.count, percent_cell(r.excess_share),
                       avg_cell(r.excess_avg), percent_cell(r.missing_share),
                       avg_cell(r.missing_avg));
  }
  return out;
}

void write_eval_report(std::span<const EvalReport> rows,
                       std::span<const LengthBucketRow> buckets, std::ostream& out) {
  using Json = nlohmann::ordered_json;
  for (const auto& r : rows) {
    Json j;
    j["kind"] = "stratum";
    j["group_key"] = r.group_key;
    j["count"] = r.count;
    j["share_correct"] = r.share_correct;
    j["excess_share"] = r.excess_share;
    j["excess_avg"] = optional_json(r.excess_avg);
    j["missing_share"] = r.missing_share;
    j["missing_avg"] = optional_json(r.missing_avg);
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    out << j.dump() << '\n';
  }
  for (const auto& b : buckets) {
    Json j;
    j["kind"] = "length_bucket";
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["count"] = b.count;
    j["excess_share"] = b.excess_share;
    j["excess_avg"] = optional_json(b.excess_avg);
    j["missing_share"] = b.missing_share;
    j["missing_avg"] = optional_json(b.missing_avg);
    out << j.dump() << '\n';
  }
}

}  // namespace declutter
