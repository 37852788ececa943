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

#include "declutter/detectors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <boost/regex/icu.hpp>
#include <unicode/uchar.h>
#include <fmt/format.h>

#include "declutter/corpus.hpp"
#include "declutter/error.hpp"
#include "declutter/unicode.hpp"

#ifndef DECLUTTER_DEFAULT_RULES_DIR
#define DECLUTTER_DEFAULT_RULES_DIR "rules"
#endif

namespace declutter {

std::string_view to_string(Category category) {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

std::optional<Category> parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::vector<Category> all_categories() {
  std::vector<Category> out;
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) out.push_back(static_cast<Category>(i));
  return out;
}

bool is_known_label(std::string_view label) {
  return label == kRemoveLabel || parse_category(label).has_value();
}

Scope scope_of(Category category) {
  switch (category) {
    case Category::copyright:
    case Category::order_info:
    case Category::translation:
    case Category::funding:
      return Scope::sentence;
    case Category::section_heading:
      return Scope::heading;
    default:
      return Scope::token;
  }
}

// ---------------------------------------------------------------------------
// Pattern subset

namespace {

[[noreturn]] void reject(std::string_view pattern, std::size_t at, std::string_view why) {
  throw Error(fmt::format("pattern '{}' at offset {}: {}", pattern, at, why));
}

// True when p[i] starts "{m}", "{m,}" or "{m,n}"; sets 'next' past the '}'.
bool parse_braces(std::string_view p, std::size_t i, std::size_t& next) {
  std::size_t j = i + 1;
  auto digits = [&] {
    std::size_t begin = j;
    while (j < p.size() && std::isdigit(static_cast<unsigned char>(p[j]))) ++j;
    return j > begin;
  };
  if (!digits()) return false;
  if (j < p.size() && p[j] == ',') {
    ++j;
    digits();
  }
  if (j >= p.size() || p[j] != '}') return false;
  next = j + 1;
  return true;
}

}  // namespace

void validate_pattern(std::string_view pattern) {
  std::string_view p = pattern;
  std::size_t i = p.starts_with("(?i)") ? 4 : 0;
  if (i == p.size()) reject(pattern, i, "empty pattern");

  int depth = 0;
  bool can_repeat = false;
  while (i < p.size()) {
    const char c = p[i];
    if (c == '\\') {
      if (i + 1 >= p.size()) reject(pattern, i, "trailing backslash");
      const auto e = static_cast<unsigned char>(p[i + 1]);
      if (e >= 0x80) reject(pattern, i, "escape of a non-ASCII character");
      if (std::isalnum(e) && std::string_view("dDwWsSbBtnr").find(static_cast<char>(e)) ==
                                 std::string_view::npos) {
        reject(pattern, i, "unsupported escape (backreference, property or engine-specific class)");
      }
      can_repeat = !(e == 'b' || e == 'B');
      i += 2;
      continue;
    }
    switch (c) {
      case '[': {
        std::size_t j = i + 1;
        if (j < p.size() && p[j] == '^') ++j;
        if (j < p.size() && p[j] == ']') ++j;  // leading ']' is a literal
        bool closed = false;
        while (j < p.size()) {
          if (p[j] == '\\') {
            if (j + 1 >= p.size()) reject(pattern, j, "trailing backslash");
            const auto e = static_cast<unsigned char>(p[j + 1]);
            if (std::isalnum(e) && std::string_view("dDwWsStnr").find(static_cast<char>(e)) ==
                                       std::string_view::npos) {
              reject(pattern, j, "unsupported escape inside class");
            }
            j += 2;
            continue;
          }
          if (p[j] == '[' && j + 1 < p.size() &&
              (p[j + 1] == ':' || p[j + 1] == '=' || p[j + 1] == '.')) {
            reject(pattern, j, "POSIX bracket expressions are not supported");
          }
          if (p[j] == ']') {
            closed = true;
            break;
          }
          ++j;
        }
        if (!closed) reject(pattern, i, "unterminated character class");
        i = j + 1;
        can_repeat = true;
        continue;
      }
      case '(':
        if (i + 1 < p.size() && p[i + 1] == '?') {
          if (i + 2 < p.size() && p[i + 2] == ':') {
            i += 3;
          } else {
            reject(pattern, i, "only (?:...) groups are supported (no lookaround, named groups or inline flags)");
          }
        } else {
          ++i;
        }
        ++depth;
        can_repeat = false;
        continue;
      case ')':
        if (--depth < 0) reject(pattern, i, "unbalanced ')'");
        ++i;
        can_repeat = true;
        continue;
      case '|':
      case '^':
      case '$':
        ++i;
        can_repeat = false;
        continue;
      case '*':
      case '+':
      case '?':
      case '{': {
        std::size_t next = i + 1;
        if (c == '{' && !parse_braces(p, i, next)) {
          reject(pattern, i, "malformed repetition (escape a literal '{')");
        }
        if (!can_repeat) reject(pattern, i, "nothing to repeat");
        if (next < p.size() && p[next] == '+') reject(pattern, next, "possessive quantifiers are not supported");
        if (next < p.size() && p[next] == '?') ++next;
        i = next;
        can_repeat = false;
        continue;
      }
      default:
        ++i;
        can_repeat = true;
    }
  }
  if (depth != 0) reject(pattern, p.size(), "unbalanced '('");
}

// ---------------------------------------------------------------------------
// Rule sets

void RuleSet::add(Rule rule) {
  if (rule.id.empty()) throw Error("rule id must be non-empty");
  for (const auto& r : rules_) {
    if (r.id == rule.id) throw Error("duplicate rule id '" + rule.id + "'");
  }
  validate_pattern(rule.pattern);
  rules_.push_back(std::move(rule));
}

void RuleSet::append(const RuleSet& other) {
  for (const auto& r : other.rules_) add(r);
}

RuleSet RuleSet::parse(std::istream& in, std::string_view source_name) {
  RuleSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      const auto tab1 = line.find('\t');
      const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
      if (tab2 == std::string::npos) {
        throw Error("expected 'rule_id<TAB>category<TAB>pattern'");
      }
      Rule rule;
      rule.id = line.substr(0, tab1);
      const std::string category = line.substr(tab1 + 1, tab2 - tab1 - 1);
      auto parsed = parse_category(category);
      if (!parsed) throw Error("unknown category '" + category + "'");
      rule.category = *parsed;
      rule.pattern = line.substr(tab2 + 1);
      set.add(std::move(rule));
    } catch (const Error& e) {
      throw Error(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
    }
  }
  return set;
}

RuleSet RuleSet::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open rule pack '" + path.string() + "'");
  return parse(in, path.string());
}

RuleSet RuleSet::load_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error("rules directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rules") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  RuleSet set;
  for (const auto& f : files) set.append(load_file(f));
  return set;
}

RuleSet RuleSet::load_default() { return load_directory(default_rules_dir()); }

std::filesystem::path default_rules_dir() {
  if (const char* env = std::getenv("DECLUTTER_RULES_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return DECLUTTER_DEFAULT_RULES_DIR;
}

DetectorConfig DetectorConfig::all() {
  DetectorConfig config;
  for (auto name : kCategoryNames) config.enabled_categories.emplace_back(name);
  return config;
}

// ---------------------------------------------------------------------------
// Matching

struct Detector::Compiled {
  std::string rule_id;
  Category category;
  boost::u32regex regex;
};

namespace {

bool is_terminal_punct(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_ascii_letter(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

// Words whose trailing '.' does not end a sentence.
bool is_abbreviation(std::u32string_view word) {
  static const std::set<std::u32string, std::less<>> kWords = {
      U"al",   U"approx", U"ca",   U"cf",  U"dept", U"dr",  U"ed",  U"eds",
      U"eq",   U"eqs",    U"fig",  U"figs", U"mr",  U"mrs", U"ms",  U"no",
      U"nos",  U"p",      U"pp",   U"prof", U"ref", U"refs", U"resp", U"st",
      U"tab",  U"univ",   U"vol",  U"vols", U"vs",
  };
  std::u32string lower;
  for (char32_t c : word) lower.push_back(unicode::to_lower(c));
  return kWords.contains(lower);
}

enum class Direction { backward, forward };

// '.', '!' or '?' followed by whitespace or the end of text, excluding
// abbreviation dots. Scanning forward also treats single-capital initials
// ("J. Smith") as non-terminal so clutter sentences are not cut short;
// scanning backward does not, so preceding content is never swallowed.
bool is_terminator(std::u32string_view text, std::size_t i, Direction dir) {
  if (!is_terminal_punct(text[i])) return false;
  if (i + 1 < text.size() && !unicode::is_space(text[i + 1])) return false;
  if (text[i] != U'.') return true;
  // "Z. Soz. 2019", "approx. ten": a sentence does not open with a digit or
  // a lowercase letter.
  std::size_t k = i + 1;
  while (k < text.size() && unicode::is_space(text[k]) && text[k] != U'\n') ++k;
  if (k < text.size() && k > i + 1 && (u_isdigit(static_cast<UChar32>(text[k])) ||
                                       u_islower(static_cast<UChar32>(text[k])))) {
    return false;
  }
  std::size_t j = i;
  while (j > 0 && is_ascii_letter(text[j - 1])) --j;
  const std::u32string_view word = text.substr(j, i - j);
  if (word.empty()) return true;
  if (word.size() == 1 && j > 0 && text[j - 1] == U'.') return false;  // B.V., e.g.
  if (dir == Direction::forward && word.size() == 1 && word[0] >= U'A' && word[0] <= U'Z') {
    return false;
  }
  return !is_abbreviation(word);
}

std::size_t sentence_start(std::u32string_view text, std::size_t pos) {
  std::size_t start = 0;
  for (std::size_t i = pos; i > 0; --i) {
    if (text[i - 1] == U'\n' || is_terminator(text, i - 1, Direction::backward)) {
      start = i;
      break;
    }
  }
  while (start < pos && unicode::is_space(text[start])) ++start;
  return start;
}

std::size_t sentence_end(std::u32string_view text, std::size_t pos) {
  if (pos > 0 && is_terminator(text, pos - 1, Direction::forward)) return pos;
  for (std::size_t j = pos; j < text.size(); ++j) {
    if (text[j] == U'\n') return j;
    if (is_terminator(text, j, Direction::forward)) return j + 1;
  }
  return text.size();
}

// Widens [start, end) to its sentence, or to the parentheses enclosing it
// when an unclosed '(' precedes the match within the sentence.
std::pair<std::size_t, std::size_t> extend_to_sentence(std::u32string_view text,
                                                       std::size_t start, std::size_t end) {
  const std::size_t ss = sentence_start(text, start);
  int depth = 0;
  for (std::size_t i = start; i > ss; --i) {
    const char32_t c = text[i - 1];
    if (c == U')') {
      ++depth;
    } else if (c == U'(') {
      if (depth == 0) {
        int inner = 0;
        for (std::size_t j = i; j < text.size() && text[j] != U'\n'; ++j) {
          if (text[j] == U'(') {
            ++inner;
          } else if (text[j] == U')') {
            if (inner == 0) {
              if (j + 1 >= end) return {i - 1, j + 1};
              break;  // closes before the match ends; not an enclosure
            }
            --inner;
          }
        }
        break;
      }
      --depth;
    }
  }
  std::size_t se = sentence_end(text, end);
  while (se > ss && unicode::is_space(text[se - 1])) --se;
  return {ss, se};
}

// Text start, a newline, or . ! ? : ; before the position (whitespace aside).
bool at_segment_start(std::u32string_view text, std::size_t pos) {
  std::size_t j = pos;
  while (j > 0 && unicode::is_space(text[j - 1])) {
    if (text[j - 1] == U'\n') return true;
    --j;
  }
  if (j == 0) return true;
  const char32_t c = text[j - 1];
  return c == U'.' || c == U'!' || c == U'?' || c == U':' || c == U';';
}

}  // namespace

Detector::Detector(const RuleSet& rules, const DetectorConfig& config) {
  std::vector<bool> on(kCategoryNames.size(), false);
  for (const auto& name : config.enabled_categories) {
    auto c = parse_category(name);
    if (!c) throw Error("unknown category '" + name + "'");
    if (!on[static_cast<std::size_t>(*c)]) enabled_.push_back(*c);
    on[static_cast<std::size_t>(*c)] = true;
  }

  RuleSet merged = rules;
  for (std::size_t k = 0; k < config.custom_rules.size(); ++k) {
    const auto& [category, pattern] = config.custom_rules[k];
    auto c = parse_category(category);
    if (!c) throw Error("unknown category '" + category + "' in custom rule");
    merged.add(Rule{"custom-" + std::to_string(k + 1), *c, pattern});
  }

  auto compiled = std::make_shared<std::vector<Compiled>>();
  for (const auto& rule : merged.rules()) {
    if (!on[static_cast<std::size_t>(rule.category)]) continue;
    auto flags = boost::regex_constants::perl | boost::regex_constants::no_mod_m;
    std::string_view body = rule.pattern;
    if (body.starts_with("(?i)")) {
      body.remove_prefix(4);
      flags |= boost::regex_constants::icase;
    }
    try {
      compiled->push_back(Compiled{rule.id, rule.category,
                                   boost::make_u32regex(std::string(body), flags)});
    } catch (const std::exception& e) {
      throw Error("rule '" + rule.id + "': invalid pattern: " + e.what());
    }
  }
  compiled_ = std::move(compiled);
}

std::vector<Detection> Detector::detect(std::u32string_view text) const {
  struct Keyed {
    std::size_t start, category, end, rule;
    Detection detection;
  };
  std::vector<Keyed> found;
  const char32_t* begin = text.data();
  const char32_t* end = text.data() + text.size();

  for (std::size_t r = 0; r < compiled_->size(); ++r) {
    const Compiled& rule = (*compiled_)[r];
    const Scope scope = scope_of(rule.category);
    boost::u32regex_iterator<const char32_t*> it(begin, end, rule.regex), last;
    for (; it != last; ++it) {
      auto s = static_cast<std::size_t>((*it)[0].first - begin);
      auto e = static_cast<std::size_t>((*it)[0].second - begin);
      while (s < e && unicode::is_space(text[s])) ++s;
      while (e > s && unicode::is_space(text[e - 1])) --e;
      if (s == e) continue;
      if (scope == Scope::heading && !at_segment_start(text, s)) continue;
      if (scope == Scope::sentence) std::tie(s, e) = extend_to_sentence(text, s, e);
      // A token match that fills a whole segment takes its terminator along.
      if (scope == Scope::token && e < text.size() && (text[e] == U'.' || text[e] == U';') &&
          (e + 1 == text.size() || unicode::is_space(text[e + 1])) && at_segment_start(text, s)) {
        ++e;
      }
      while (s > 0 && unicode::is_space(text[s - 1])) --s;
      found.push_back(Keyed{s, static_cast<std::size_t>(rule.category), e, r,
                            Detection{Span{s, e, std::string(to_string(rule.category))},
                                      rule.category, rule.rule_id}});
    }
  }

  std::sort(found.begin(), found.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.start, a.category, a.end, a.rule) <
           std::tie(b.start, b.category, b.end, b.rule);
  });
  // A match nested in a wider match of its own category adds nothing; for
  // equal spans the earlier rule keeps it.
  auto covered = [&](std::size_t i) {
    const Keyed& a = found[i];
    for (std::size_t j = 0; j < found.size(); ++j) {
      const Keyed& b = found[j];
      if (j == i || b.category != a.category || b.start > a.start || b.end < a.end) continue;
      if (b.start != a.start || b.end != a.end || b.rule < a.rule || (b.rule == a.rule && j < i)) {
        return true;
      }
    }
    return false;
  };
  std::vector<Detection> out;
  out.reserve(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (!covered(i)) out.push_back(std::move(found[i].detection));
  }
  return out;
}

std::vector<Detection> Detector::detect(std::string_view utf8) const {
  return detect(std::u32string_view(unicode::decode(utf8)));
}

std::vector<Detection> detect(std::string_view utf8, const DetectorConfig& config,
                              const RuleSet& rules) {
  return Detector(rules, config).detect(utf8);
}

std::vector<Detection> filter_detections(std::span<const Detection> detections) {
  SpanList spans;
  spans.reserve(detections.size());
  for (const auto& d : detections) spans.push_back(d.span);
  std::vector<Detection> out;
  for (std::size_t idx : filter_span_indices(spans)) out.push_back(detections[idx]);
  return out;
}

SpanList to_rem_spans(std::span<const Detection> detections) {
  SpanList spans;
  spans.reserve(detections.size());
  for (const auto& d : detections) spans.push_back(Span{d.span.start, d.span.end, std::string(kRemoveLabel)});
  return filter_spans(spans);
}

std::map<std::string, SpanList> read_predictions(std::istream& in, std::string_view source_name) {
  std::map<std::string, SpanList> out;
  for (auto& record : read_corpus(in, Schema::predictions, source_name)) {
    out.emplace(record.id, filter_spans(record.spans));
  }
  return out;
}

std::map<std::string, SpanList> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return read_predictions(in, path.string());
}

}  // namespace declutter
