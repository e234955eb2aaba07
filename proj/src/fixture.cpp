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

#include "chalset/fixture.hpp"

#include <algorithm>

namespace chalset::embedded {
extern const std::string_view kChallengeSetJson;
extern const std::string_view kOutputsJson;
extern const std::string_view kVerdictsJson;
extern const std::string_view kExpectedFineGrainedCsv;
}  // namespace chalset::embedded

namespace chalset::fixture {

std::string_view challenge_set_json() { return embedded::kChallengeSetJson; }
std::string_view outputs_json() { return embedded::kOutputsJson; }
std::string_view verdicts_json() { return embedded::kVerdictsJson; }
std::string_view expected_fine_grained_csv() { return embedded::kExpectedFineGrainedCsv; }

const ChallengeSet& challenge_set() {
  static const ChallengeSet set = parse_challenge_set(challenge_set_json());
  return set;
}

const SystemOutputSet& outputs() {
  static const SystemOutputSet out = parse_outputs(outputs_json(), challenge_set()).outputs;
  return out;
}

const std::vector<MajorityVerdict>& verdicts() {
  static const std::vector<MajorityVerdict> v =
      parse_majority_verdicts(verdicts_json(), challenge_set());
  return v;
}

std::vector<ExpectedRow> expected_fine_grained() {
  const auto rows = parse_csv(expected_fine_grained_csv());
  if (rows.size() < 2 || rows.front().size() < 4) {
    throw Error(ErrorCode::kMalformed, "bundled expected table is malformed");
  }
  const auto& header = rows.front();
  std::vector<ExpectedRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kMalformed, "bundled expected table row has wrong arity");
    }
    ExpectedRow row;
    const auto category = parse_category(fields[0]);
    if (!category) throw Error(ErrorCode::kMalformed, "bad category " + fields[0]);
    row.category = *category;
    row.subcategory = fields[1];
    row.item_count = static_cast<std::size_t>(std::stoul(fields[2]));
    for (std::size_t c = 3; c < fields.size(); ++c) {
      row.percents.emplace_back(header[c], std::stoi(fields[c]));
    }
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

std::string describe(std::size_t items, const std::vector<std::optional<int>>& cells) {
  std::string s = std::to_string(items);
  for (const auto& c : cells) s += ", " + (c ? std::to_string(*c) + "%" : std::string("—"));
  return s;
}

}  // namespace

Reproduction reproduce_fine_grained() {
  Reproduction result;
  result.report = score_verdicts(verdicts(), challenge_set());
  result.table = fine_grained_table(result.report, challenge_set());

  for (const auto& expected : expected_fine_grained()) {
    RowComparison cmp;
    cmp.subcategory = expected.subcategory;
    std::vector<std::optional<int>> expected_cells;
    for (const auto& [system, p] : expected.percents) expected_cells.emplace_back(p);
    cmp.expected = describe(expected.item_count, expected_cells);

    const FineGrainedRow* actual = nullptr;
    for (const auto& row : result.table.rows) {
      if (row.subcategory == expected.subcategory) actual = &row;
    }
    if (actual == nullptr) {
      cmp.actual = "missing";
    } else {
      std::vector<std::optional<int>> actual_cells;
      bool match = actual->category == expected.category &&
                   actual->item_count == expected.item_count;
      for (const auto& [system, p] : expected.percents) {
        const auto it = std::find(result.table.systems.begin(),
                                  result.table.systems.end(), system);
        std::optional<int> cell;
        if (it != result.table.systems.end()) {
          cell = actual->cells[static_cast<std::size_t>(it - result.table.systems.begin())];
        }
        actual_cells.push_back(cell);
        match = match && cell == p;
      }
      cmp.actual = describe(actual->item_count, actual_cells);
      cmp.match = match;
    }
    if (cmp.match) ++result.matched;
    result.rows.push_back(std::move(cmp));
  }
  if (result.table.rows.size() != result.rows.size()) {
    // Extra subcategories in the scored table count as a mismatch.
    result.rows.push_back({"(row count)", false, std::to_string(result.rows.size()) + " rows",
                           std::to_string(result.table.rows.size()) + " rows"});
  }
  return result;
}

}  // namespace chalset::fixture
