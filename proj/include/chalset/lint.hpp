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

#ifndef CHALSET_LINT_HPP_
#define CHALSET_LINT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chalset/core.hpp"

namespace chalset {

class FrequencyTable {
 public:
  // Absent tokens count 0. Lookup keys are lowercased.
  std::uint64_t lookup(std::string_view token) const;
  void add(std::string_view token, std::uint64_t count);

  std::uint64_t total() const { return total_; }
  std::size_t size() const { return counts_.size(); }

 private:
  std::map<std::string, std::uint64_t, std::less<>> counts_;
  std::uint64_t total_ = 0;
};

enum class FrequencyInput {
  kTable,   // `token<TAB>count` lines
  kCorpus,  // raw text, run through tokenize()
};

// Throws kMalformed on a bad count line and kInvalidValue on empty input.
FrequencyTable load_frequency_table(std::string_view bytes, FrequencyInput mode);

enum class LintKind { kRareToken, kNonceToken, kLongSentence };

std::string_view lint_kind_name(LintKind kind);

struct LintFinding {
  std::string item_id;
  LintKind kind = LintKind::kRareToken;
  std::string token;        // empty for long-sentence findings
  std::size_t position = 0; // token index in the tokenized source
  std::uint64_t value = 0;  // corpus count, or token length of the source
  std::string detail;

  friend bool operator==(const LintFinding&, const LintFinding&) = default;
};

struct LintReport {
  std::vector<LintFinding> findings;

  bool empty() const { return findings.empty(); }
};

inline constexpr std::uint64_t kDefaultMinCount = 100;
inline constexpr std::size_t kDefaultMaxTokens = 15;

// Source-side only. One finding per (item, token occurrence) with
// count < min_count, unless the token is listed in `exceptions`.
LintReport lint_vocabulary(const ChallengeSet& set, const FrequencyTable& freq,
                           std::uint64_t min_count = kDefaultMinCount,
                           const std::vector<std::string>& exceptions = {});

LintReport lint_length(const ChallengeSet& set,
                       std::size_t max_tokens = kDefaultMaxTokens);

// Concatenates and re-sorts by (item id, token position).
LintReport merge(LintReport a, const LintReport& b);

// One finding per line: `S15e<TAB>rare-token<TAB>spilt<TAB>58<TAB>detail`.
std::string format_lint_text(const LintReport& report);
std::string format_lint_json(const LintReport& report);

}  // namespace chalset

#endif  // CHALSET_LINT_HPP_
