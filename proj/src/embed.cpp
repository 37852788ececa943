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

#include "declutter/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "declutter/error.hpp"
#include "declutter/unicode.hpp"

namespace declutter {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  norm_ = std::sqrt(sum);
}

EmbeddingVector EmbeddingVector::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return EmbeddingVector(std::move(out));
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw Error(fmt::format("cosine: dimension mismatch ({} vs {})", a.dimension(), b.dimension()));
  }
  if (a.norm() == 0.0 || b.norm() == 0.0) throw Error("cosine: zero-norm embedding");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) dot += a.values()[i] * b.values()[i];
  return std::clamp(dot / (a.norm() * b.norm()), -1.0, 1.0);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

HashedBowProvider::HashedBowProvider(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw Error("embedding dimension must be positive");
}

EmbeddingVector HashedBowProvider::embed_text(std::string_view text) const {
  const std::u32string decoded = unicode::decode(text);
  const TokenMap map = tokenize(std::u32string_view(decoded));

  // Ordered so that bucket sums accumulate in the same order on every run.
  std::map<std::string, std::size_t> tf;
  for (const Token& t : map.tokens) {
    std::u32string lower;
    for (std::size_t i = t.start; i < t.end; ++i) lower.push_back(unicode::to_lower(decoded[i]));
    ++tf[unicode::encode(lower)];
  }

  std::vector<double> values(dimension_, 0.0);
  for (const auto& [term, count] : tf) {
    const std::uint64_t h = fnv1a64(term);
    const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
    values[h % dimension_] += sign * (1.0 + std::log(static_cast<double>(count)));
  }
  EmbeddingVector raw(std::move(values));
  if (raw.norm() == 0.0) return raw;
  return raw.scaled(1.0 / raw.norm());
}

EmbeddingVector HashedBowProvider::embed(std::string_view, std::string_view text, TextVariant) const {
  return embed_text(text);
}

void ExternalVectorProvider::add(std::string id, TextVariant variant, EmbeddingVector vector) {
  if (vector.dimension() == 0) throw Error("vector for '" + id + "' is empty");
  if (dimension_ == 0) dimension_ = vector.dimension();
  if (vector.dimension() != dimension_) {
    throw Error(fmt::format("vector for '{}' has dimension {}, expected {}", id,
                            vector.dimension(), dimension_));
  }
  auto key = std::make_pair(std::move(id), variant);
  if (vectors_.contains(key)) throw Error("duplicate vector for '" + key.first + "'");
  vectors_.emplace(std::move(key), std::move(vector));
}

bool ExternalVectorProvider::contains(std::string_view id, TextVariant variant) const {
  return vectors_.contains(std::make_pair(std::string(id), variant));
}

EmbeddingVector ExternalVectorProvider::embed(std::string_view id, std::string_view,
                                              TextVariant variant) const {
  auto it = vectors_.find(std::make_pair(std::string(id), variant));
  if (it == vectors_.end()) {
    throw Error(fmt::format("no {} vector ingested for id '{}'",
                            variant == TextVariant::original ? "original" : "cleaned", id));
  }
  return it->second;
}

ExternalVectorProvider ExternalVectorProvider::read(std::istream& in, std::string_view source_name) {
  using Json = nlohmann::json;
  ExternalVectorProvider provider;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      if (!j.is_object() || !j.contains("id") || !j.at("id").is_string()) {
        throw Error("vector record requires string id");
      }
      if (!j.contains("values") || !j.at("values").is_array()) {
        throw Error("vector record requires a values array");
      }
      std::vector<double> values;
      for (const auto& v : j.at("values")) {
        if (!v.is_number()) throw Error("values must be numbers");
        values.push_back(v.get<double>());
      }
      TextVariant variant = TextVariant::original;
      if (auto it = j.find("variant"); it != j.end()) {
        const auto name = it->get<std::string>();
        if (name == "cleaned") {
          variant = TextVariant::cleaned;
        } else if (name != "original") {
          throw Error("variant must be 'original' or 'cleaned'");
        }
      }
      provider.add(j.at("id").get<std::string>(), variant, EmbeddingVector(std::move(values)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
    } catch (const Error& e) {
      throw Error(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
    }
  }
  return provider;
}

ExternalVectorProvider ExternalVectorProvider::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return read(in, path.string());
}

namespace {

struct Embedded {
  EmbeddingVector before;
  EmbeddingVector after;
};

Embedded embed_both(const LabeledAbstract& doc, const std::map<std::string, SpanList>& spans_for,
                    const EmbeddingProvider& provider) {
  Embedded e;
  e.before = provider.embed(doc.id, doc.text, TextVariant::original);
  auto it = spans_for.find(doc.id);
  const std::span<const Span> spans =
      it == spans_for.end() ? std::span<const Span>() : std::span<const Span>(it->second);
  const std::u32string original = unicode::decode(doc.text);
  const std::u32string cleaned = clean_text(std::u32string_view(original), spans);
  if (cleaned == unicode::trim(original)) {
    e.after = e.before;
  } else {
    e.after = provider.embed(doc.id, unicode::encode(cleaned), TextVariant::cleaned);
  }
  for (const auto* v : {&e.before, &e.after}) {
    if (v->norm() == 0.0) throw Error("zero-norm embedding for '" + doc.id + "'");
  }
  return e;
}

std::vector<std::string> order_by(const std::vector<std::pair<std::string, double>>& scored) {
  auto sorted = scored;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> ids;
  for (const auto& [id, _] : sorted) ids.push_back(id);
  return ids;
}

}  // namespace

RankingDelta rank_references(const LabeledAbstract& focal, std::span<const LabeledAbstract> refs,
                             const std::map<std::string, SpanList>& spans_for,
                             const EmbeddingProvider& provider) {
  if (refs.size() < 2) throw Error("rank_references: at least two references required");
  std::set<std::string> ids;
  for (const auto& r : refs) {
    if (r.id == focal.id) throw Error("rank_references: focal '" + focal.id + "' listed as a reference");
    if (!ids.insert(r.id).second) throw Error("rank_references: duplicate reference '" + r.id + "'");
  }

  const Embedded f = embed_both(focal, spans_for, provider);
  RankingDelta delta;
  delta.focal_id = focal.id;
  std::vector<std::pair<std::string, double>> before, after;
  for (const auto& r : refs) {
    const Embedded e = embed_both(r, spans_for, provider);
    RefSimilarity sim{r.id, cosine(f.before, e.before), cosine(f.after, e.after)};
    before.emplace_back(r.id, sim.before);
    after.emplace_back(r.id, sim.after);
    delta.similarities.push_back(std::move(sim));
  }
  delta.order_before = order_by(before);
  delta.order_after = order_by(after);
  delta.changed = delta.order_before != delta.order_after;
  delta.top1_changed = delta.order_before.front() != delta.order_after.front();

  std::unordered_map<std::string, std::size_t> rank_after;
  for (std::size_t i = 0; i < delta.order_after.size(); ++i) rank_after[delta.order_after[i]] = i;
  for (std::size_t i = 0; i < delta.order_before.size(); ++i) {
    const std::size_t j = rank_after.at(delta.order_before[i]);
    delta.displacement += i > j ? i - j : j - i;
  }
  return delta;
}

std::string rank_report_json(const RankingDelta& delta) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["focal_id"] = delta.focal_id;
  j["order_before"] = delta.order_before;
  j["order_after"] = delta.order_after;
  Json sims = Json::array();
  for (const auto& s : delta.similarities) {
    sims.push_back(Json{{"id", s.id}, {"cosine_before", s.before}, {"cosine_after", s.after}});
  }
  j["similarities"] = std::move(sims);
  j["changed"] = delta.changed;
  j["top1_changed"] = delta.top1_changed;
  j["displacement"] = delta.displacement;
  return j.dump();
}

std::string format_ranking(const RankingDelta& delta) {
  std::string out = fmt::format("focal: {}\n", delta.focal_id);
  out += fmt::format("{:>4}  {:<24}  {:<24}\n", "rank", "before", "after");
  for (std::size_t i = 0; i < delta.order_before.size(); ++i) {
    out += fmt::format("{:>4}  {:<24}  {:<24}\n", i + 1, delta.order_before[i], delta.order_after[i]);
  }
  out += fmt::format("displacement: {}\n", delta.displacement);
  out += fmt::format("changed: {}, top1_changed: {}\n", delta.changed ? "yes" : "no",
                     delta.top1_changed ? "yes" : "no");
  return out;
}

}  // namespace declutter
