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

// declutter: batch front end.
//
//   declutter clean --input P --output P [--rules DIR] [--categories LIST]
//   declutter eval --gold P --pred P [--report P] [--buckets N] [--strict]
//   declutter stats --input P
//   declutter rank-compare --input P --focal ID --refs ID,ID,...
//       [--provider builtin|vectors --vectors P] [--dim D] [--report P]
//       [--rules DIR] [--categories LIST]
//
// DECLUTTER_RULES_DIR overrides the default rule-pack directory.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "declutter/cli.hpp"

namespace {

void add_detector_options(CLI::App* app, declutter::RunConfig& config, std::string& categories) {
  app->add_option("--rules", config.rules_dir, "Rule-pack directory (*.rules files)")
      ->check(CLI::ExistingDirectory);
  app->add_option("--categories", categories,
                  "Comma-separated categories to enable; empty disables detection");
}

}  // namespace

int main(int argc, char** argv) {
  using declutter::Command;
  declutter::RunConfig config;
  std::string categories;
  std::string refs;
  std::string provider = "builtin";

  CLI::App app{"Remove clutter from scientific abstracts and evaluate cleaners"};
  app.require_subcommand(1);

  auto* clean = app.add_subcommand("clean", "Detect and remove clutter spans");
  clean->add_option("--input", config.input, "Input corpus (JSONL)")->required();
  clean->add_option("--output", config.output, "Output corpus (JSONL)")->required();
  add_detector_options(clean, config, categories);

  auto* eval = app.add_subcommand("eval", "Score predicted spans against gold spans");
  eval->add_option("--gold", config.gold, "Gold corpus (JSONL)")->required();
  eval->add_option("--pred", config.pred, "Predictions (JSONL)")->required();
  eval->add_option("--report", config.report, "Machine-readable report (JSONL)");
  eval->add_option("--buckets", config.buckets, "Number of length buckets")
      ->check(CLI::PositiveNumber);
  eval->add_flag("--strict", config.strict, "Treat missing predictions as errors");

  auto* stats = app.add_subcommand("stats", "Field and year distribution of a corpus");
  stats->add_option("--input", config.input, "Corpus (JSONL)")->required();

  auto* rank = app.add_subcommand("rank-compare",
                                  "Compare reference similarity rankings before and after cleaning");
  rank->add_option("--input", config.input, "Corpus holding focal and references")->required();
  rank->add_option("--focal", config.focal, "Focal abstract id")->required();
  rank->add_option("--refs", refs, "Comma-separated reference ids")->required();
  rank->add_option("--provider", provider, "Embedding provider")
      ->check(CLI::IsMember({"builtin", "vectors"}));
  rank->add_option("--vectors", config.vectors, "Precomputed vectors (JSONL)");
  rank->add_option("--dim", config.dimension, "Builtin embedding dimension")
      ->check(CLI::PositiveNumber);
  rank->add_option("--report", config.report, "Ranking report (JSON)");
  add_detector_options(rank, config, categories);

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : {clean, rank}) {
    if (sub->parsed() && sub->count("--categories") > 0) {
      config.categories = declutter::split_list(categories);
    }
  }
  if (clean->parsed()) config.command = Command::clean;
  if (eval->parsed()) config.command = Command::eval;
  if (stats->parsed()) config.command = Command::stats;
  if (rank->parsed()) {
    config.command = Command::rank_compare;
    config.refs = declutter::split_list(refs);
    config.provider =
        provider == "vectors" ? declutter::ProviderKind::vectors : declutter::ProviderKind::builtin;
  }
  return declutter::run(config, std::cout, std::cerr);
}
