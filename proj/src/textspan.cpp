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

#include "declutter/textspan.hpp"

#include <algorithm>
#include <numeric>

#include "declutter/error.hpp"
#include "declutter/unicode.hpp"

namespace declutter {

bool is_finalized(std::span<const Span> spans) {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].start >= spans[i].end) return false;
    if (i > 0 && spans[i - 1].end > spans[i].start) return false;
  }
  return true;
}

std::vector<std::size_t> filter_span_indices(std::span<const Span> spans) {
  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (spans[a].length() != spans[b].length()) {
      return spans[a].length() > spans[b].length();
    }
    return spans[a].start < spans[b].start;
  });

  // kept stays sorted by start so each candidate needs one neighbour check
  // on either side of its insertion point.
  std::vector<std::size_t> kept;
  auto span_at = [&](std::size_t k) -> const Span& { return spans[k]; };
  for (std::size_t idx : order) {
    const Span& candidate = spans[idx];
    auto pos = std::lower_bound(
        kept.begin(), kept.end(), candidate.start,
        [&](std::size_t k, std::size_t start) { return span_at(k).start < start; });
    if (pos != kept.end() && span_at(*pos).overlaps(candidate)) continue;
    if (pos != kept.begin() && span_at(*std::prev(pos)).overlaps(candidate)) continue;
    kept.insert(pos, idx);
  }
  return kept;
}

SpanList filter_spans(std::span<const Span> spans) {
  SpanList out;
  for (std::size_t idx : filter_span_indices(spans)) out.push_back(spans[idx]);
  return out;
}

std::u32string clean_text(std::u32string_view text, std::span<const Span> spans) {
  if (!is_finalized(spans)) {
    throw Error("clean_text: spans are not a finalized (sorted, non-overlapping) set");
  }
  if (!spans.empty() && spans.back().end > text.size()) {
    throw Error("span out of bounds: [" + std::to_string(spans.back().start) + ", " +
                std::to_string(spans.back().end) + ") over text of length " +
                std::to_string(text.size()));
  }
  if (spans.empty()) return std::u32string(unicode::trim(text));

  std::u32string joined;
  joined.reserve(text.size());
  std::size_t last = 0;
  for (const Span& s : spans) {
    joined.append(text.substr(last, s.start - last));
    last = s.end;
  }
  joined.append(text.substr(last));

  std::u32string_view cleaned = unicode::trim(joined);
  if (cleaned.empty()) return std::u32string(text);
  return std::u32string(cleaned);
}

std::string clean_text(std::string_view utf8, std::span<const Span> spans) {
  if (spans.empty()) {
    // Fast path: trimming needs no offset arithmetic.
    return unicode::encode(unicode::trim(unicode::decode(utf8)));
  }
  return unicode::encode(clean_text(std::u32string_view(unicode::decode(utf8)), spans));
}

TokenMap tokenize(std::u32string_view text) {
  TokenMap map;
  map.source_length = text.size();
  auto emit = [&](std::size_t start, std::size_t end) {
    map.tokens.push_back(
        Token{unicode::encode(text.substr(start, end - start)), start, end});
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && unicode::is_space(text[i])) ++i;
    std::size_t begin = i;
    while (i < n && !unicode::is_space(text[i])) ++i;
    std::size_t end = i;
    if (begin == end) break;

    while (begin < end && unicode::is_punct(text[begin])) {
      emit(begin, begin + 1);
      ++begin;
    }
    std::size_t core_end = end;
    while (core_end > begin && unicode::is_punct(text[core_end - 1])) --core_end;
    if (core_end > begin) emit(begin, core_end);
    for (std::size_t p = core_end; p < end; ++p) emit(p, p + 1);
  }
  return map;
}

TokenMap tokenize(std::string_view utf8) {
  return tokenize(std::u32string_view(unicode::decode(utf8)));
}

std::vector<std::size_t> tokens_under(std::span<const Span> spans, const TokenMap& map) {
  std::vector<bool> hit(map.tokens.size(), false);
  for (const Span& s : spans) {
    auto first = std::partition_point(
        map.tokens.begin(), map.tokens.end(),
        [&](const Token& t) { return t.end <= s.start; });
    for (auto it = first; it != map.tokens.end() && it->start < s.end; ++it) {
      hit[static_cast<std::size_t>(it - map.tokens.begin())] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(i);
  }
  return out;
}

}  // namespace declutter
