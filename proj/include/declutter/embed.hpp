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

#ifndef DECLUTTER_EMBED_HPP_
#define DECLUTTER_EMBED_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "declutter/corpus.hpp"
#include "declutter/textspan.hpp"

namespace declutter {

inline constexpr std::size_t kDefaultDimension = 768;

class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double norm() const { return norm_; }

  // Same direction, every component multiplied by factor.
  EmbeddingVector scaled(double factor) const;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
  double norm_ = 0.0;
};

// dot(a, b) / (|a| |b|), clamped to [-1, 1]. Throws on a zero-norm input or
// mismatched dimensions.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

enum class TextVariant { original, cleaned };

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbeddingVector embed(std::string_view id, std::string_view text,
                                TextVariant variant) const = 0;
  virtual std::size_t dimension() const = 0;
};

// Feature-hashed bag of words.
//   tokens: tokenize(text), each lowercased code point by code point
//   hash:   FNV-1a 64 over the token's UTF-8 bytes
//   bucket: hash mod D;  sign: -1 if bit 63 of the hash is set, else +1
//   weight: 1 + ln(term frequency), summed with its sign into the bucket
// The result is L2-normalized; a text without tokens maps to the zero vector.
class HashedBowProvider final : public EmbeddingProvider {
 public:
  explicit HashedBowProvider(std::size_t dimension = kDefaultDimension);

  EmbeddingVector embed_text(std::string_view text) const;
  EmbeddingVector embed(std::string_view id, std::string_view text,
                        TextVariant variant) const override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::size_t dimension_;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Precomputed vectors, one per line: {"id": ..., "values": [...],
// "variant": "original"|"cleaned"}; variant defaults to "original".
class ExternalVectorProvider final : public EmbeddingProvider {
 public:
  static ExternalVectorProvider load(const std::filesystem::path& path);
  static ExternalVectorProvider read(std::istream& in, std::string_view source_name = "<stream>");

  void add(std::string id, TextVariant variant, EmbeddingVector vector);
  bool contains(std::string_view id, TextVariant variant) const;

  // Ignores the text; throws when no vector was ingested for (id, variant).
  EmbeddingVector embed(std::string_view id, std::string_view text,
                        TextVariant variant) const override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::map<std::pair<std::string, TextVariant>, EmbeddingVector, std::less<>> vectors_;
  std::size_t dimension_ = 0;
};

struct RefSimilarity {
  std::string id;
  double before = 0.0;
  double after = 0.0;
};

struct RankingDelta {
  std::string focal_id;
  std::vector<std::string> order_before;  // descending cosine, ties by id
  std::vector<std::string> order_after;
  std::vector<RefSimilarity> similarities;  // in reference input order
  bool changed = false;
  bool top1_changed = false;
  std::size_t displacement = 0;  // sum of |rank_before - rank_after|
};

// Ranks the references by cosine to the focal abstract, once on original
// texts and once after clean_text with spans_for (ids without an entry are
// left uncleaned). Documents whose text cleaning leaves unchanged (up to
// trimming) reuse their original vector. Requires at least two distinct
// references that differ from the focal id.
RankingDelta rank_references(const LabeledAbstract& focal,
                             std::span<const LabeledAbstract> refs,
                             const std::map<std::string, SpanList>& spans_for,
                             const EmbeddingProvider& provider);

std::string rank_report_json(const RankingDelta& delta);
std::string format_ranking(const RankingDelta& delta);

}  // namespace declutter

#endif  // DECLUTTER_EMBED_HPP_
