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

#ifndef DECLUTTER_DETECTORS_HPP_
#define DECLUTTER_DETECTORS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "declutter/textspan.hpp"

namespace declutter {

// Registry order is also the tie-break order of detect() output.
enum class Category {
  copyright,
  order_info,
  section_heading,
  keywords_codes,
  registration,
  translation,
  funding,
  internal_ref,
  citation,
};

inline constexpr std::array<std::string_view, 9> kCategoryNames = {
    "copyright",    "order_info", "section_heading", "keywords_codes", "registration",
    "translation",  "funding",    "internal_ref",    "citation",
};

std::string_view to_string(Category category);
std::optional<Category> parse_category(std::string_view name);
std::vector<Category> all_categories();

// "REM" or a registry category name.
bool is_known_label(std::string_view label);

// How far a rule match is widened before it becomes a detection.
//   sentence: to the enclosing sentence, or enclosing parentheses when the
//             match sits inside an unclosed "(" of its sentence
//   heading:  the match itself, and only at a segment start
//   token:    the match itself
enum class Scope { sentence, heading, token };
Scope scope_of(Category category);

struct Rule {
  std::string id;
  Category category = Category::copyright;
  std::string pattern;  // UTF-8, engine-neutral subset
};

// Throws declutter::Error when the pattern leaves the supported subset:
// literals, escapes of metacharacters, \d \D \w \W \s \S \b \B \t \n \r,
// classes, groups (plain or "(?:"), alternation, ? * + {m} {m,} {m,n} with
// optional lazy "?", ^ and $ (string anchors). A single leading "(?i)"
// makes the rule case-insensitive.
void validate_pattern(std::string_view pattern);

// Ordered collection of rules from rule-pack files: one rule per line,
// "rule_id<TAB>category<TAB>pattern", '#' starts a comment line.
class RuleSet {
 public:
  RuleSet() = default;

  static RuleSet parse(std::istream& in, std::string_view source_name = "<stream>");
  static RuleSet load_file(const std::filesystem::path& path);
  // Every "*.rules" file in the directory, in filename order.
  static RuleSet load_directory(const std::filesystem::path& dir);
  static RuleSet load_default();

  void add(Rule rule);
  void append(const RuleSet& other);

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }

 private:
  std::vector<Rule> rules_;
};

// $DECLUTTER_RULES_DIR if set, otherwise the directory compiled in.
std::filesystem::path default_rules_dir();

struct DetectorConfig {
  std::vector<std::string> enabled_categories;
  std::vector<std::pair<std::string, std::string>> custom_rules;  // (category, pattern)

  static DetectorConfig all();
};

struct Detection {
  Span span;  // label == category name
  Category category = Category::copyright;
  std::string rule_id;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Compiled, immutable view of a rule set restricted to the enabled
// categories. Copies share the compiled patterns; detect() is reentrant.
class Detector {
 public:
  Detector(const RuleSet& rules, const DetectorConfig& config);

  // All raw matches, overlaps included, ordered by start, registry order,
  // end, then rule order. A match lying inside a wider match of the same
  // category is folded into it.
  std::vector<Detection> detect(std::u32string_view text) const;
  std::vector<Detection> detect(std::string_view utf8) const;

  const std::vector<Category>& enabled() const { return enabled_; }

 private:
  struct Compiled;
  std::shared_ptr<const std::vector<Compiled>> compiled_;
  std::vector<Category> enabled_;
};

std::vector<Detection> detect(std::string_view utf8, const DetectorConfig& config,
                              const RuleSet& rules);

// filter_spans over the detection spans; duplicates keep the first in input
// order, so labels stay attached to their category.
std::vector<Detection> filter_detections(std::span<const Detection> detections);

// Relabel to REM, then filter_spans.
SpanList to_rem_spans(std::span<const Detection> detections);

// Per-id finalized span sets read from a corpus-format predictions file.
std::map<std::string, SpanList> load_predictions(const std::filesystem::path& path);
std::map<std::string, SpanList> read_predictions(std::istream& in,
                                                 std::string_view source_name = "<stream>");

}  // namespace declutter

#endif  // DECLUTTER_DETECTORS_HPP_
