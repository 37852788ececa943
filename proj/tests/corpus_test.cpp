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

#include "declutter/corpus.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "declutter/error.hpp"
#include "test_support.hpp"

namespace declutter {
namespace {

using ::testing::HasSubstr;

std::vector<LabeledAbstract> read(const std::string& body, Schema schema = Schema::gold) {
  std::istringstream in(body);
  return read_corpus(in, schema, "mem");
}

std::string error_of(const std::string& body, Schema schema = Schema::gold) {
  try {
    read(body, schema);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(ReadCorpus, EmptySpanRecord) {
  const auto r = read(R"({"id":"a1","text":"Hi.","spans":[]})" "\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].id, "a1");
  EXPECT_EQ(r[0].text, "Hi.");
  EXPECT_TRUE(r[0].spans.empty());
}

TEST(ReadCorpus, SpanOutOfBounds) {
  EXPECT_THAT(error_of(R"({"id":"a1","text":"Hi.","spans":[{"start":0,"end":4}]})"),
              HasSubstr("span out of bounds"));
}

TEST(ReadCorpus, DuplicateId) {
  const std::string msg = error_of(R"({"id":"x","text":"a"})" "\n" R"({"id":"x","text":"b"})" "\n");
  EXPECT_THAT(msg, HasSubstr("duplicate id"));
  EXPECT_THAT(msg, HasSubstr("mem:2"));
}

TEST(ReadCorpus, GoldInvariants) {
  EXPECT_THAT(error_of(R"({"id":"a","text":"abcdef","spans":[{"start":0,"end":4},{"start":3,"end":5}]})"),
              HasSubstr("overlapping"));
  EXPECT_THAT(error_of(R"({"id":"a","text":"abcdef","spans":[{"start":3,"end":5},{"start":0,"end":2}]})"),
              HasSubstr("not sorted"));
  EXPECT_THAT(error_of(R"({"id":"a","text":"abc","spans":[{"start":2,"end":2}]})"),
              HasSubstr("empty or inverted"));
  EXPECT_THAT(error_of(R"({"id":"a","text":"abc","spans":[{"start":0,"end":2,"label":"XYZ"}]})"),
              HasSubstr("unknown span label"));
  EXPECT_THAT(error_of(R"({"id":"a","text":"abc","meta":{"year":1850}})"), HasSubstr("year"));
  EXPECT_THAT(error_of(R"({"id":"a","text":"abc","spans":[{"start":-1,"end":2}]})"),
              HasSubstr("non-negative"));
  EXPECT_THAT(error_of(R"({"id":"a"})"), HasSubstr("text"));
  EXPECT_THAT(error_of("{not json"), HasSubstr("malformed JSON"));
  EXPECT_THAT(error_of("{\"id\":\"a\",\"text\":\"\xC3\"}"), HasSubstr("mem:1"));
}

TEST(ReadCorpus, PredictionsAllowOverlapsButCheckShape) {
  const auto r = read(R"({"id":"a","text":"abcdef","spans":[{"start":0,"end":5},{"start":3,"end":10,"label":"citation"}]})",
                      Schema::predictions);
  ASSERT_EQ(r[0].spans.size(), 2u);
  EXPECT_EQ(r[0].spans[1].label, "citation");
  EXPECT_THAT(error_of(R"({"id":"a","text":"abc","spans":[{"start":3,"end":1}]})", Schema::predictions),
              HasSubstr("empty or inverted"));
}

TEST(ReadCorpus, SkipsBlankLinesAndReadsMeta) {
  const auto r = read("\n" R"({"id":"a","text":"t","meta":{"year":2019,"fields":["Medicine"],"source":"pubmed"}})" "\n\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].meta.year, 2019);
  EXPECT_EQ(r[0].meta.fields, std::vector<std::string>{"Medicine"});
  EXPECT_EQ(r[0].meta.source, "pubmed");
}

TEST(SaveLoad, RoundTripThreeRecords) {
  testing::TempDir dir;
  std::vector<LabeledAbstract> records = {
      {"r1", "© 2020 Pub. We study X.", {{0, 12}}, {2020, std::vector<std::string>{"Medicine"}, std::nullopt}},
      {"r2", "Clean text.", {}, {}},
      {"r3", "Große Daten [1].", {{11, 15}}, {std::nullopt, std::nullopt, "wos"}},
  };
  save_corpus(records, dir / "c.jsonl");
  EXPECT_EQ(load_corpus(dir / "c.jsonl"), records);
}

TEST(SaveLoad, EmptyCorpus) {
  testing::TempDir dir;
  save_corpus(std::vector<LabeledAbstract>{}, dir / "e.jsonl");
  EXPECT_EQ(testing::read_file(dir / "e.jsonl"), "");
  EXPECT_TRUE(load_corpus(dir / "e.jsonl").empty());
}

TEST(SaveLoad, NonAsciiOffsetsAreScalarIndices) {
  // "μ-opioid" is eight scalar values (nine bytes).
  testing::TempDir dir;
  std::vector<LabeledAbstract> records = {{"m", "μ-opioid agonists", {{0, 8}}, {}}};
  save_corpus(records, dir / "m.jsonl");
  const auto back = load_corpus(dir / "m.jsonl");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].spans, (SpanList{{0, 8}}));
  EXPECT_EQ(clean_text(back[0].text, back[0].spans), "agonists");
  EXPECT_THAT(testing::read_file(dir / "m.jsonl"), HasSubstr("\"μ-opioid agonists\""));
}

TEST(SaveLoad, SerializedKeyOrder) {
  LabeledAbstract r{"a", "xy", {{0, 1}}, {2001, std::nullopt, std::nullopt}};
  EXPECT_EQ(serialize_record(r),
            R"({"id":"a","text":"xy","spans":[{"start":0,"end":1,"label":"REM"}],"meta":{"year":2001}})");
}

TEST(SaveLoad, MissingFileIsAnError) {
  EXPECT_THROW(load_corpus("/nonexistent/dir/none.jsonl"), Error);
}

TEST(Stats, MedicineShare) {
  std::vector<LabeledAbstract> records(9000);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].id = std::to_string(i);
    records[i].meta.fields = std::vector<std::string>{i < 2171 ? "Medicine" : "Physics"};
  }
  const CorpusStats s = compute_stats(records);
  EXPECT_EQ(s.total, 9000u);
  ASSERT_EQ(s.by_field.size(), 2u);
  EXPECT_EQ(s.by_field[1].field, "Medicine");
  EXPECT_EQ(s.by_field[1].count, 2171u);
  EXPECT_NEAR(s.by_field[1].share, 24.122222, 1e-6);
  EXPECT_THAT(format_stats(s), HasSubstr("Medicine     2171    24.1\n"));
}

TEST(Stats, EmptyCorpus) {
  const CorpusStats s = compute_stats(std::vector<LabeledAbstract>{});
  EXPECT_EQ(s.total, 0u);
  EXPECT_TRUE(s.by_field.empty());
  EXPECT_TRUE(s.by_year.empty());
  EXPECT_EQ(format_stats(s), "total 0\nlabeled 0\n");
}

TEST(Stats, YearsOverTotal) {
  std::vector<LabeledAbstract> records = {
      {"a", "t", {{0, 1}}, {2018, {}, {}}},
      {"b", "t", {}, {2018, {}, {}}},
      {"c", "t", {}, {2019, {}, {}}},
      {"d", "t", {}, {}},
  };
  const CorpusStats s = compute_stats(records);
  EXPECT_EQ(s.total, 4u);
  EXPECT_EQ(s.labeled_count, 1u);
  ASSERT_EQ(s.by_year.size(), 2u);
  EXPECT_EQ(s.by_year[0].year, 2018);
  EXPECT_EQ(s.by_year[0].count, 2u);
  EXPECT_DOUBLE_EQ(s.by_year[0].share, 50.0);
  EXPECT_EQ(s.by_year[1].year, 2019);
  EXPECT_EQ(s.by_year[1].count, 1u);
  EXPECT_DOUBLE_EQ(s.by_year[1].share, 25.0);
}

TEST(Stats, FieldsCountedOncePerRecord) {
  std::vector<LabeledAbstract> records = {
      {"a", "t", {}, {std::nullopt, std::vector<std::string>{"Biology", "Biology", "Chemistry"}, {}}},
      {"b", "t", {}, {std::nullopt, std::vector<std::string>{"Chemistry"}, {}}},
  };
  const CorpusStats s = compute_stats(records);
  ASSERT_EQ(s.by_field.size(), 2u);
  EXPECT_EQ(s.by_field[0].field, "Chemistry");
  EXPECT_EQ(s.by_field[0].count, 2u);
  EXPECT_DOUBLE_EQ(s.by_field[0].share, 100.0);
  EXPECT_EQ(s.by_field[1].count, 1u);
}

}  // namespace
}  // namespace declutter
