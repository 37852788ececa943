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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "declutter/error.hpp"
#include "declutter/unicode.hpp"

namespace declutter {
namespace {

using ::testing::HasSubstr;

// Frozen from tests/oracles/rank_oracle.py.
const std::string kFocal =
    "Graphene sheets conduct heat efficiently at room temperature. © 2021 Elsevier Ltd. All rights reserved.";
const std::string kRefA = "Thermal conductivity of graphene sheets measured at room temperature.";
const std::string kRefB =
    "Ceramic coatings resist corrosion in marine environments. © 2021 Elsevier Ltd. All rights reserved.";
const std::string kRefC = "Heat transport in carbon nanotubes at low temperature.";

// The copyright sentence and the space before it.
Span tail_sentence(const std::string& text) {
  const std::size_t start = text.find(" ©");  // ASCII prefix: byte index == scalar index
  return {start, unicode::length(text)};
}

TEST(Fnv, KnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(HashedBow, SingleTokenBucketAndSign) {
  // fnv1a64("a") mod 8 == 4, bit 63 set.
  const EmbeddingVector v = HashedBowProvider(8).embed_text("A");
  EXPECT_EQ(v.values(), (std::vector<double>{0, 0, 0, 0, -1, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(v.norm(), 1.0);
}

TEST(HashedBow, Deterministic) {
  const HashedBowProvider p(64);
  EXPECT_EQ(p.embed_text("We study cats."), p.embed_text("We study cats."));
}

TEST(HashedBow, OrderIndependent) {
  const HashedBowProvider p;
  EXPECT_EQ(p.embed_text("a a b"), p.embed_text("b a a"));
}

TEST(HashedBow, LogWeightedFrequency) {
  const HashedBowProvider p(8);
  // Only "a": one bucket with weight 1 + ln 3, normalized back to unit length.
  const EmbeddingVector v = p.embed_text("a a a");
  EXPECT_EQ(v.values()[4], -1.0);
}

TEST(HashedBow, EmptyTextIsZeroVector) {
  const HashedBowProvider p(16);
  const EmbeddingVector z = p.embed_text("   ");
  EXPECT_EQ(z.dimension(), 16u);
  EXPECT_EQ(z.norm(), 0.0);
  EXPECT_THROW(cosine(z, p.embed_text("x")), Error);
}

TEST(Cosine, HandValues) {
  const EmbeddingVector a({1.0, 0.0});
  const EmbeddingVector b({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  EXPECT_NEAR(cosine(a, b), std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_EQ(cosine(EmbeddingVector({0.0, 1.0}), a), 0.0);
  EXPECT_DOUBLE_EQ(cosine(a, a), 1.0);
  EXPECT_THROW(cosine(a, EmbeddingVector({1.0, 0.0, 0.0})), Error);
}

TEST(Cosine, ScaleInvariant) {
  const HashedBowProvider p(32);
  const EmbeddingVector a = p.embed_text("graphene sheets conduct heat");
  const EmbeddingVector b = p.embed_text("heat transport in nanotubes");
  EXPECT_NEAR(cosine(a.scaled(7.5), b), cosine(a, b), 1e-12);
  EXPECT_NEAR(cosine(a, b.scaled(0.01)), cosine(a, b), 1e-12);
}

TEST(Cosine, SelfSimilarityIsOne) {
  const HashedBowProvider p(8);
  for (const char* t : {"graphene sheets", "© 2021 Elsevier Ltd.", "μ-opioid receptor binding", "a b c d e f"}) {
    const EmbeddingVector v = p.embed_text(t);
    if (v.norm() == 0.0) continue;  // signed buckets can cancel exactly at small D
    EXPECT_NEAR(cosine(v, v), 1.0, 1e-12) << t;
  }
}

class RankFixture : public ::testing::Test {
 protected:
  LabeledAbstract focal{"f", kFocal, {}, {}};
  std::vector<LabeledAbstract> refs = {{"ref-a", kRefA, {}, {}},
                                       {"ref-b", kRefB, {}, {}},
                                       {"ref-c", kRefC, {}, {}}};
  std::map<std::string, SpanList> spans = {{"f", {tail_sentence(kFocal)}},
                                           {"ref-b", {tail_sentence(kRefB)}}};
};

TEST_F(RankFixture, MatchesOracle) {
  const RankingDelta d = rank_references(focal, refs, spans, HashedBowProvider(8));
  EXPECT_EQ(d.order_before, (std::vector<std::string>{"ref-c", "ref-b", "ref-a"}));
  EXPECT_EQ(d.order_after, (std::vector<std::string>{"ref-c", "ref-a", "ref-b"}));
  ASSERT_EQ(d.similarities.size(), 3u);
  EXPECT_EQ(d.similarities[0].id, "ref-a");
  EXPECT_NEAR(d.similarities[0].before, 0.26305086220657653, 1e-12);
  EXPECT_NEAR(d.similarities[0].after, 0.5345224838248488, 1e-12);
  EXPECT_NEAR(d.similarities[1].before, 0.34012292885568973, 1e-12);
  EXPECT_NEAR(d.similarities[1].after, -0.23904572186687875, 1e-12);
  EXPECT_NEAR(d.similarities[2].before, 0.6880899330716715, 1e-12);
  EXPECT_NEAR(d.similarities[2].after, 0.6761234037828133, 1e-12);
  EXPECT_TRUE(d.changed);
  EXPECT_FALSE(d.top1_changed);
  EXPECT_EQ(d.displacement, 2u);
  EXPECT_THAT(format_ranking(d), HasSubstr("changed: yes, top1_changed: no"));
}

TEST_F(RankFixture, NoSpansMeansNoChange) {
  const RankingDelta d = rank_references(focal, refs, {}, HashedBowProvider(8));
  EXPECT_FALSE(d.changed);
  EXPECT_EQ(d.displacement, 0u);
  EXPECT_EQ(d.order_before, d.order_after);
  for (const auto& s : d.similarities) EXPECT_EQ(s.before, s.after);
}

TEST_F(RankFixture, BitIdenticalAcrossRuns) {
  const HashedBowProvider p(8);
  EXPECT_EQ(rank_report_json(rank_references(focal, refs, spans, p)),
            rank_report_json(rank_references(focal, refs, spans, p)));
}

TEST(Rank, TiesOrderedById) {
  const LabeledAbstract focal{"f", "alpha beta gamma", {}, {}};
  const std::vector<LabeledAbstract> refs = {{"z", "alpha beta", {}, {}}, {"m", "beta alpha", {}, {}}};
  const RankingDelta d = rank_references(focal, refs, {}, HashedBowProvider(64));
  EXPECT_EQ(d.order_before, (std::vector<std::string>{"m", "z"}));
}

TEST(Rank, InputErrors) {
  const HashedBowProvider p(8);
  const LabeledAbstract focal{"f", "alpha", {}, {}};
  EXPECT_THROW(rank_references(focal, std::vector<LabeledAbstract>{{"a", "x", {}, {}}}, {}, p), Error);
  EXPECT_THROW(rank_references(focal, std::vector<LabeledAbstract>{{"a", "x", {}, {}}, {"a", "y", {}, {}}}, {}, p),
               Error);
  EXPECT_THROW(rank_references(focal, std::vector<LabeledAbstract>{{"a", "x", {}, {}}, {"f", "y", {}, {}}}, {}, p),
               Error);
  EXPECT_THROW(rank_references(focal, std::vector<LabeledAbstract>{{"a", "x", {}, {}}, {"b", "  ", {}, {}}}, {}, p),
               Error);
}

TEST(ExternalVectors, ReadAndServe) {
  std::istringstream in(
      R"({"id":"f","values":[1,0]})" "\n"
      R"({"id":"a","values":[1,1]})" "\n"
      R"({"id":"b","values":[0,1]})" "\n"
      R"({"id":"f","values":[0,1],"variant":"cleaned"})" "\n");
  const ExternalVectorProvider p = ExternalVectorProvider::read(in, "mem");
  EXPECT_EQ(p.dimension(), 2u);
  EXPECT_TRUE(p.contains("f", TextVariant::cleaned));
  EXPECT_FALSE(p.contains("a", TextVariant::cleaned));
  EXPECT_THROW(p.embed("zz", "", TextVariant::original), Error);

  const LabeledAbstract focal{"f", "focal © 2020 X.", {}, {}};
  const std::vector<LabeledAbstract> refs = {{"a", "a", {}, {}}, {"b", "b", {}, {}}};
  // Focal is cleaned, refs are untouched and reuse their original vectors.
  const RankingDelta d = rank_references(focal, refs, {{"f", {{5, 15}}}}, p);
  EXPECT_EQ(d.order_before, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.order_after, (std::vector<std::string>{"b", "a"}));
  EXPECT_TRUE(d.top1_changed);
}

TEST(ExternalVectors, RejectsMismatchedDimensions) {
  std::istringstream in(R"({"id":"f","values":[1,0]})" "\n" R"({"id":"a","values":[1,1,1]})" "\n");
  EXPECT_THROW(ExternalVectorProvider::read(in), Error);
}

}  // namespace
}  // namespace declutter
