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

#ifndef DECLUTTER_TESTS_TEST_SUPPORT_HPP_
#define DECLUTTER_TESTS_TEST_SUPPORT_HPP_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace declutter::testing {

inline std::filesystem::path rules_dir() { return DECLUTTER_TEST_RULES_DIR; }
inline std::filesystem::path fixtures_dir() { return DECLUTTER_TEST_FIXTURES_DIR; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("declutter-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

struct ClutterCase {
  std::string id;
  std::string category;
  std::string text;
  std::vector<std::string> clutter;
  std::string expected;
};

inline std::vector<ClutterCase> load_clutter_cases() {
  std::vector<ClutterCase> cases;
  std::ifstream in(fixtures_dir() / "clutter_cases.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    cases.push_back({j.at("id"), j.at("category"), j.at("text"),
                     j.at("clutter").get<std::vector<std::string>>(), j.at("expected")});
  }
  return cases;
}

}  // namespace declutter::testing

#endif  // DECLUTTER_TESTS_TEST_SUPPORT_HPP_
