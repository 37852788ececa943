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

#include "declutter/cli.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "declutter/corpus.hpp"
#include "declutter/detectors.hpp"
#include "declutter/error.hpp"
#include "declutter/eval.hpp"
#include "declutter/unicode.hpp"

namespace declutter {
namespace {

Detector make_detector(const RunConfig& config) {
  const RuleSet rules = config.rules_dir ? RuleSet::load_directory(*config.rules_dir)
                                         : RuleSet::load_default();
  DetectorConfig dc = DetectorConfig::all();
  if (config.categories) dc.enabled_categories = *config.categories;
  return Detector(rules, dc);
}

bool is_cleaning_history(const SpanList& spans) {
  for (const auto& s : spans) {
    if (!parse_category(s.label)) return false;
  }
  return true;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// Output spans are offsets into the text this pass read, so a clean output
// can be scored as a predictions file against its input. A record that the
// pass leaves untouched is copied verbatim when its spans already are a
// cleaning record; a second pass over clean output is then a no-op.
int cmd_clean(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Detector detector = make_detector(config);
    const auto records = load_corpus(config.input, Schema::predictions);

    std::vector<LabeledAbstract> cleaned_records;
    cleaned_records.reserve(records.size());
    std::vector<std::size_t> removed(kCategoryNames.size(), 0);
    std::size_t changed = 0;
    for (const auto& record : records) {
      try {
        const std::u32string text = unicode::decode(record.text);
        const auto applied = filter_detections(detector.detect(std::u32string_view(text)));
        SpanList spans;
        for (const auto& d : applied) spans.push_back(d.span);
        const std::string cleaned = unicode::encode(clean_text(std::u32string_view(text), spans));

        if (cleaned == record.text) {
          LabeledAbstract same = record;
          if (!is_cleaning_history(same.spans)) same.spans.clear();
          cleaned_records.push_back(std::move(same));
          continue;
        }
        LabeledAbstract next{record.id, cleaned, {}, record.meta};
        // Only spans that removed something count; a trim-only change has none.
        if (cleaned != unicode::encode(unicode::trim(text))) {
          next.spans = spans;
          for (const auto& d : applied) ++removed[static_cast<std::size_t>(d.category)];
        }
        ++changed;
        cleaned_records.push_back(std::move(next));
      } catch (const Error& e) {
        throw Error("record '" + record.id + "': " + e.what());
      }
    }
    save_corpus(cleaned_records, config.output);

    out << fmt::format("records {}\nchanged {}\n", records.size(), changed);
    for (Category c : detector.enabled()) {
      out << fmt::format("{:<16} {}\n", to_string(c), removed[static_cast<std::size_t>(c)]);
    }
    return 0;
  });
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto gold = load_corpus(config.gold, Schema::gold);
    const auto predictions = load_predictions(config.pred);

    std::set<std::string> gold_ids;
    for (const auto& r : gold) gold_ids.insert(r.id);
    for (const auto& [id, _] : predictions) {
      if (!gold_ids.contains(id)) throw Error("prediction for unknown id '" + id + "'");
    }

    std::vector<AbstractOutcome> outcomes;
    std::map<std::string, std::size_t> lengths;
    std::map<std::string, std::string> categories;
    std::size_t missing = 0;
    const SpanList none;
    for (const auto& record : gold) {
      auto it = predictions.find(record.id);
      if (it == predictions.end()) {
        if (config.strict) throw Error("no prediction for id '" + record.id + "'");
        err << "warning: no prediction for '" << record.id << "'; scoring as empty\n";
        ++missing;
      }
      outcomes.push_back(score_abstract(record, it == predictions.end() ? none : it->second));
      lengths[record.id] = tokenize(std::string_view(record.text)).size();
      if (record.meta.source) categories[record.id] = *record.meta.source;
    }

    std::vector<EvalReport> rows = aggregate(outcomes, Grouping::none());
    for (auto& r : aggregate(outcomes, Grouping::has_labels())) {
      r.group_key = "has_labels=" + r.group_key;
      rows.push_back(std::move(r));
    }
    if (!categories.empty()) {
      for (auto& r : aggregate(outcomes, Grouping::category(categories))) {
        r.group_key = "source=" + r.group_key;
        rows.push_back(std::move(r));
      }
    }
    const auto buckets = length_buckets(outcomes, lengths, config.buckets);

    if (config.report) {
      std::ostringstream report;
      write_eval_report(rows, buckets, report);
      write_file(*config.report, report.str());
    }
    if (missing > 0) err << "warning: " << missing << " gold records had no prediction\n";
    out << format_eval_table(rows) << '\n' << format_bucket_table(buckets);
    return 0;
  });
}

int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto records = load_corpus(config.input, Schema::gold);
    out << format_stats(compute_stats(records));
    return 0;
  });
}

int cmd_rank_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto records = load_corpus(config.input, Schema::gold);
    std::map<std::string, const LabeledAbstract*> by_id;
    for (const auto& r : records) by_id[r.id] = &r;
    auto lookup = [&](const std::string& id) -> const LabeledAbstract& {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw Error("id '" + id + "' not found in '" + config.input.string() + "'");
      return *it->second;
    };

    const LabeledAbstract& focal = lookup(config.focal);
    std::vector<LabeledAbstract> refs;
    for (const auto& id : config.refs) refs.push_back(lookup(id));

    const Detector detector = make_detector(config);
    std::map<std::string, SpanList> spans_for;
    spans_for[focal.id] = to_rem_spans(detector.detect(std::string_view(focal.text)));
    for (const auto& r : refs) spans_for[r.id] = to_rem_spans(detector.detect(std::string_view(r.text)));

    RankingDelta delta;
    if (config.provider == ProviderKind::vectors) {
      if (!config.vectors) throw Error("--provider vectors requires --vectors");
      delta = rank_references(focal, refs, spans_for, ExternalVectorProvider::load(*config.vectors));
    } else {
      delta = rank_references(focal, refs, spans_for, HashedBowProvider(config.dimension));
    }
    if (config.report) write_file(*config.report, rank_report_json(delta) + "\n");
    out << format_ranking(delta);
    return 0;
  });
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::clean:
      return cmd_clean(config, out, err);
    case Command::eval:
      return cmd_eval(config, out, err);
    case Command::stats:
      return cmd_stats(config, out, err);
    case Command::rank_compare:
      return cmd_rank_compare(config, out, err);
  }
  return 1;
}

}  // namespace declutter
