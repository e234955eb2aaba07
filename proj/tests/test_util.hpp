// Copyright 2026 The Chalset Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHALSET_TESTS_TEST_UTIL_HPP_
#define CHALSET_TESTS_TEST_UTIL_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <unistd.h>

#include "chalset/core.hpp"

namespace chalset::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("chalset-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
}

// Small valid set: `subcategories` groups of `per_subcategory` items each,
// spread over the three categories in turn.
inline ChallengeSet ToySet(int subcategories = 2, int per_subcategory = 3) {
  ChallengeSet set;
  set.name = "toy";
  set.version = "1";
  set.source_language = "en";
  set.target_language = "fr";
  for (int s = 0; s < subcategories; ++s) {
    for (int k = 0; k < per_subcategory; ++k) {
      ChallengeItem item;
      item.id = "S" + std::to_string(s + 1) + std::string(1, static_cast<char>('a' + k));
      item.category = kAllCategories[s % kAllCategories.size()];
      item.subcategory = "Sub " + std::to_string(s + 1);
      item.question = "Is the verb right?";
      item.source = "The cat sleeps.";
      item.source_highlights = {{8, 14}};
      item.reference = "Le chat dort.";
      item.reference_highlights = {{8, 12}};
      set.items.push_back(std::move(item));
    }
  }
  return set;
}

inline SystemOutputSet ToyOutputs(const ChallengeSet& set,
                                  const std::vector<std::string>& systems) {
  SystemOutputSet outputs;
  for (const auto& system : systems) {
    for (const auto& item : set.items) {
      outputs.add({system, item.id, "Le chat dort (" + item.id + ")."});
    }
  }
  return outputs;
}

}  // namespace chalset::testing

#endif  // CHALSET_TESTS_TEST_UTIL_HPP_
