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

#ifndef DECLUTTER_CORPUS_HPP_
#define DECLUTTER_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "declutter/textspan.hpp"

namespace declutter {

struct AbstractMeta {
  std::optional<int> year;                        // publication year
  std::optional<std::vector<std::string>> fields;  // top-level subject fields
  std::optional<std::string> source;               // free form; eval strata key

  friend bool operator==(const AbstractMeta&, const AbstractMeta&) = default;
};

// One line of a corpus file. In gold corpora 'spans' are the annotated REM
// spans; in prediction files and clean outputs they are a cleaner's removals.
struct LabeledAbstract {
  std::string id;
  std::string text;  // UTF-8, offsets count scalar values
  SpanList spans;
  AbstractMeta meta;

  friend bool operator==(const LabeledAbstract&, const LabeledAbstract&) = default;
};

// gold: offsets bounded by the text, spans sorted and non-overlapping.
// predictions: bounds are checked only when joined with a text (scoring),
// overlaps are allowed.
enum class Schema { gold, predictions };

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

// Throws declutter::Error naming the record on any invariant violation.
void validate_record(const LabeledAbstract& record, Schema schema);

LabeledAbstract parse_record(std::string_view line, Schema schema);
std::string serialize_record(const LabeledAbstract& record);

// Blank lines are skipped. Errors carry "<source>:<line>". Nothing is
// returned on error.
std::vector<LabeledAbstract> read_corpus(std::istream& in, Schema schema,
                                         std::string_view source_name = "<stream>");
std::vector<LabeledAbstract> load_corpus(const std::filesystem::path& path,
                                         Schema schema = Schema::gold);

void write_corpus(std::span<const LabeledAbstract> records, std::ostream& out);
void save_corpus(std::span<const LabeledAbstract> records,
                 const std::filesystem::path& path);

struct FieldCount {
  std::string field;
  std::size_t count = 0;
  double share = 0.0;  // percent, unrounded
};

struct YearCount {
  int year = 0;
  std::size_t count = 0;
  double share = 0.0;  // percent, unrounded
};

struct CorpusStats {
  std::size_t total = 0;
  std::size_t labeled_count = 0;    // records with at least one span
  std::vector<FieldCount> by_field;  // count descending, then name
  std::vector<YearCount> by_year;    // year ascending; undated records omitted
};

CorpusStats compute_stats(std::span<const LabeledAbstract> records);

// Count/Share tables with shares shown to one decimal.
std::string format_stats(const CorpusStats& stats);

}  // namespace declutter

#endif  // DECLUTTER_CORPUS_HPP_
