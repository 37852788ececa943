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

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "declutter/detectors.hpp"
#include "declutter/error.hpp"
#include "declutter/unicode.hpp"

namespace declutter {
namespace {

using Json = nlohmann::ordered_json;

std::string describe(const LabeledAbstract& r) {
  return r.id.empty() ? std::string("record <no id>") : "record '" + r.id + "'";
}

std::size_t read_offset(const Json& value, const char* name) {
  if (!value.is_number_unsigned()) {
    throw Error(std::string("span ") + name + " must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

Span parse_span(const Json& j) {
  if (!j.is_object()) throw Error("span must be an object");
  if (!j.contains("start") || !j.contains("end")) {
    throw Error("span requires start and end");
  }
  Span s;
  s.start = read_offset(j.at("start"), "start");
  s.end = read_offset(j.at("end"), "end");
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw Error("span label must be a string");
    s.label = j.at("label").get<std::string>();
  }
  return s;
}

AbstractMeta parse_meta(const Json& j) {
  if (!j.is_object()) throw Error("meta must be an object");
  AbstractMeta meta;
  if (auto it = j.find("year"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw Error("meta.year must be an integer");
    meta.year = it->get<int>();
  }
  if (auto it = j.find("fields"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw Error("meta.fields must be an array of strings");
    std::vector<std::string> fields;
    for (const auto& f : *it) {
      if (!f.is_string()) throw Error("meta.fields must be an array of strings");
      fields.push_back(f.get<std::string>());
    }
    meta.fields = std::move(fields);
  }
  if (auto it = j.find("source"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw Error("meta.source must be a string");
    meta.source = it->get<std::string>();
  }
  return meta;
}

}  // namespace

void validate_record(const LabeledAbstract& record, Schema schema) {
  if (record.id.empty()) throw Error("record id must be non-empty");
  const std::size_t length = unicode::length(record.text);
  for (std::size_t i = 0; i < record.spans.size(); ++i) {
    const Span& s = record.spans[i];
    if (s.start >= s.end) {
      throw Error(describe(record) + ": empty or inverted span [" +
                  std::to_string(s.start) + ", " + std::to_string(s.end) + ")");
    }
    if (!is_known_label(s.label)) {
      throw Error(describe(record) + ": unknown span label '" + s.label + "'");
    }
    if (schema == Schema::predictions) continue;
    if (s.end > length) {
      throw Error(describe(record) + ": span out of bounds [" + std::to_string(s.start) +
                  ", " + std::to_string(s.end) + ") over text of length " +
                  std::to_string(length));
    }
    if (i > 0) {
      const Span& prev = record.spans[i - 1];
      if (prev.start > s.start) throw Error(describe(record) + ": spans not sorted by start");
      if (prev.end > s.start) throw Error(describe(record) + ": overlapping gold spans");
    }
  }
  if (record.meta.year && (*record.meta.year < kMinYear || *record.meta.year > kMaxYear)) {
    throw Error(describe(record) + ": year " + std::to_string(*record.meta.year) +
                " outside [" + std::to_string(kMinYear) + ", " + std::to_string(kMaxYear) + "]");
  }
}

LabeledAbstract parse_record(std::string_view line, Schema schema) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("record must be a JSON object");

  LabeledAbstract record;
  if (!j.contains("id") || !j.at("id").is_string()) throw Error("record requires string id");
  record.id = j.at("id").get<std::string>();
  if (!j.contains("text") || !j.at("text").is_string()) {
    throw Error(describe(record) + ": requires string text");
  }
  record.text = j.at("text").get<std::string>();
  // Offsets are only meaningful over well-formed text.
  try {
    unicode::decode(record.text);
  } catch (const Error& e) {
    throw Error(describe(record) + ": " + e.what());
  }
  if (auto it = j.find("spans"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(describe(record) + ": spans must be an array");
    try {
      for (const auto& s : *it) record.spans.push_back(parse_span(s));
    } catch (const Error& e) {
      throw Error(describe(record) + ": " + e.what());
    }
  }
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    try {
      record.meta = parse_meta(*it);
    } catch (const Error& e) {
      throw Error(describe(record) + ": " + e.what());
    }
  }
  validate_record(record, schema);
  return record;
}

std::string serialize_record(const LabeledAbstract& record) {
  Json j;
  j["id"] = record.id;
  j["text"] = record.text;
  Json spans = Json::array();
  for (const Span& s : record.spans) {
    spans.push_back(Json{{"start", s.start}, {"end", s.end}, {"label", s.label}});
  }
  j["spans"] = std::move(spans);
  Json meta = Json::object();
  if (record.meta.year) meta["year"] = *record.meta.year;
  if (record.meta.fields) meta["fields"] = *record.meta.fields;
  if (record.meta.source) meta["source"] = *record.meta.source;
  j["meta"] = std::move(meta);
  return j.dump();
}

std::vector<LabeledAbstract> read_corpus(std::istream& in, Schema schema,
                                         std::string_view source_name) {
  std::vector<LabeledAbstract> records;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    LabeledAbstract record;
    try {
      record = parse_record(line, schema);
    } catch (const Error& e) {
      throw Error(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
    }
    if (!seen.insert(record.id).second) {
      throw Error(fmt::format("{}:{}: duplicate id '{}'", source_name, line_no, record.id));
    }
    records.push_back(std::move(record));
  }
  if (in.bad()) throw Error(fmt::format("{}: read error", source_name));
  return records;
}

std::vector<LabeledAbstract> load_corpus(const std::filesystem::path& path, Schema schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return read_corpus(in, schema, path.string());
}

void write_corpus(std::span<const LabeledAbstract> records, std::ostream& out) {
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

void save_corpus(std::span<const LabeledAbstract> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_corpus(records, out);
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

CorpusStats compute_stats(std::span<const LabeledAbstract> records) {
  CorpusStats stats;
  stats.total = records.size();
  std::map<std::string, std::size_t> fields;
  std::map<int, std::size_t> years;
  for (const auto& r : records) {
    if (!r.spans.empty()) ++stats.labeled_count;
    if (r.meta.year) ++years[*r.meta.year];
    if (r.meta.fields) {
      // A record listing a field twice still counts once for it.
      std::set<std::string> distinct(r.meta.fields->begin(), r.meta.fields->end());
      for (const auto& f : distinct) ++fields[f];
    }
  }
  auto share = [&](std::size_t count) {
    return stats.total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(stats.total);
  };
  for (const auto& [name, count] : fields) {
    stats.by_field.push_back(FieldCount{name, count, share(count)});
  }
  std::stable_sort(stats.by_field.begin(), stats.by_field.end(),
                   [](const FieldCount& a, const FieldCount& b) { return a.count > b.count; });
  for (const auto& [year, count] : years) {
    stats.by_year.push_back(YearCount{year, count, share(count)});
  }
  return stats;
}

std::string format_stats(const CorpusStats& stats) {
  std::string out;
  out += fmt::format("total {}\n", stats.total);
  out += fmt::format("labeled {}\n", stats.labeled_count);
  if (!stats.by_field.empty()) {
    std::size_t width = 5;
    for (const auto& f : stats.by_field) width = std::max(width, unicode::length(f.field));
    out += fmt::format("\n{:<{}}  {:>7}  {:>6}\n", "Field", width, "Count", "Share");
    for (const auto& f : stats.by_field) {
      // Pad by scalar count so non-ASCII field names stay aligned.
      out += f.field + std::string(width - unicode::length(f.field), ' ');
      out += fmt::format("  {:>7}  {:>6.1f}\n", f.count, f.share);
    }
  }
  if (!stats.by_year.empty()) {
    out += fmt::format("\n{:<5}  {:>7}  {:>6}\n", "Year", "Count", "Share");
    for (const auto& y : stats.by_year) {
      out += fmt::format("{:<5}  {:>7}  {:>6.1f}\n", y.year, y.count, y.share);
    }
  }
  return out;
}

}  // namespace declutter
