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

#ifndef CHALSET_FIXTURE_HPP_
#define CHALSET_FIXTURE_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chalset/core.hpp"
#include "chalset/report.hpp"
#include "chalset/scoring.hpp"

// The bundled English-French challenge set: 108 items, outputs of three
// systems (PBMT-1, NMT, Google) and their majority verdicts, plus
// the expected per-subcategory percentages used as the reproduction target.
namespace chalset::fixture {

std::string_view challenge_set_json();
std::string_view outputs_json();
std::string_view verdicts_json();
std::string_view expected_fine_grained_csv();

// Parsed once, on first use.
const ChallengeSet& challenge_set();
const SystemOutputSet& outputs();
const std::vector<MajorityVerdict>& verdicts();

struct ExpectedRow {
  DivergenceCategory category = DivergenceCategory::kMorphoSyntactic;
  std::string subcategory;
  std::size_t item_count = 0;
  std::vector<std::pair<std::string, int>> percents;  // (system, percent)
};

std::vector<ExpectedRow> expected_fine_grained();

struct RowComparison {
  std::string subcategory;
  bool match = false;
  std::string expected;  // "3, 33%, 100%, 100%"
  std::string actual;
};

struct Reproduction {
  ScoreReport report;
  FineGrainedTable table;
  std::vector<RowComparison> rows;
  std::size_t matched = 0;

  bool ok() const { return matched == rows.size() && !rows.empty(); }
};

// Scores the bundled verdicts and diffs every subcategory row against the
// expected percentages.
Reproduction reproduce_fine_grained();

}  // namespace chalset::fixture

#endif  // CHALSET_FIXTURE_HPP_
