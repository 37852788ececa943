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

#ifndef DECLUTTER_CLI_HPP_
#define DECLUTTER_CLI_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "declutter/embed.hpp"

namespace declutter {

enum class Command { clean, eval, stats, rank_compare };

enum class ProviderKind { builtin, vectors };

struct RunConfig {
  Command command = Command::clean;

  std::filesystem::path input;   // clean, stats, rank-compare
  std::filesystem::path output;  // clean
  std::optional<std::filesystem::path> rules_dir;
  // Absent means every category; an empty list disables detection.
  std::optional<std::vector<std::string>> categories;

  std::filesystem::path gold;  // eval
  std::filesystem::path pred;  // eval
  std::optional<std::filesystem::path> report;
  std::size_t buckets = 4;
  // eval: fail on gold ids without a prediction instead of warning.
  bool strict = false;

  std::string focal;  // rank-compare
  std::vector<std::string> refs;
  ProviderKind provider = ProviderKind::builtin;
  std::optional<std::filesystem::path> vectors;
  std::size_t dimension = kDefaultDimension;
};

// Each returns the process exit status: 0 on success, 1 on any error, with
// the error written to err. Tables and summaries go to out once all records
// have been processed.
int cmd_clean(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_rank_compare(const RunConfig& config, std::ostream& out, std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Splits "a,b,c"; empty items are dropped, so "" yields an empty list.
std::vector<std::string> split_list(const std::string& list);

}  // namespace declutter

#endif  // DECLUTTER_CLI_HPP_
