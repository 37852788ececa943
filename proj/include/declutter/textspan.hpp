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

#ifndef DECLUTTER_TEXTSPAN_HPP_
#define DECLUTTER_TEXTSPAN_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace declutter {

inline constexpr std::string_view kRemoveLabel = "REM";

// Half-open [start, end) interval of scalar-value offsets.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label{kRemoveLabel};

  std::size_t length() const { return end - start; }
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

using SpanList = std::vector<Span>;

// A finalized span set is sorted by start and pairwise non-overlapping.
bool is_finalized(std::span<const Span> spans);

// Longest-first greedy overlap removal. Candidates are visited by length
// descending, then start ascending; a span survives iff it overlaps nothing
// already kept. Result is sorted by start.
SpanList filter_spans(std::span<const Span> spans);
// Same selection, returned as indices into the input, ordered by start.
std::vector<std::size_t> filter_span_indices(std::span<const Span> spans);

// Drops the spans from the text, joins the remaining slices and trims the
// result. Falls back to the untouched original when nothing would remain.
// Spans must form a finalized set inside the text; otherwise throws.
std::u32string clean_text(std::u32string_view text, std::span<const Span> spans);
std::string clean_text(std::string_view utf8, std::span<const Span> spans);

struct Token {
  std::string text;  // UTF-8 slice of the source
  std::size_t start = 0;
  std::size_t end = 0;
};

struct TokenMap {
  std::vector<Token> tokens;
  std::size_t source_length = 0;

  std::size_t size() const { return tokens.size(); }
};

// Whitespace split, then each leading and trailing punctuation character of
// a chunk becomes its own token: "Fig. 1)" -> Fig . 1 )
TokenMap tokenize(std::u32string_view text);
TokenMap tokenize(std::string_view utf8);

// Sorted indices of tokens sharing at least one position with any span.
std::vector<std::size_t> tokens_under(std::span<const Span> spans,
                                      const TokenMap& map);

}  // namespace declutter

#endif  // DECLUTTER_TEXTSPAN_HPP_
