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

#ifndef CHALSET_REPORT_HPP_
#define CHALSET_REPORT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chalset/core.hpp"
#include "chalset/scoring.hpp"

namespace chalset {

// Placeholder for cells with no value.
inline constexpr std::string_view kUnavailable = "—";

enum class RateBasis { kItemLevel, kJudgmentLevel };

struct SummaryRow {
  std::string label;  // category label or "Overall"
  std::vector<std::optional<int>> cells;  // aligned with SummaryTable::systems
  std::optional<int> agreement;
};

// Externally supplied corpus metric (e.g. BLEU), rendered verbatim.
struct MetricValues {
  std::string label = "Corpus metric";
  std::vector<std::pair<std::string, std::string>> values;  // (system, value)
};

struct MetricFooter {
  std::string label;
  std::vector<std::optional<std::string>> values;  // aligned with systems
};

struct SummaryTable {
  std::vector<std::string> systems;
  RateBasis basis = RateBasis::kItemLevel;
  bool agreement_available = false;
  std::vector<SummaryRow> rows;
  std::optional<MetricFooter> footer;
  std::string note;  // states the rate basis and not-applicable handling
};

struct FineGrainedRow {
  DivergenceCategory category = DivergenceCategory::kMorphoSyntactic;
  std::string subcategory;
  std::size_t item_count = 0;
  std::vector<std::optional<int>> cells;
};

struct FineGrainedTable {
  std::vector<std::string> systems;
  std::vector<FineGrainedRow> rows;
};

// Judgment-level rates when the report has judgments, item-level otherwise.
// Throws kNothingToRender for an empty report and kUnknownSystem for a metric
// naming a system the report does not contain.
SummaryTable summary_table(const ScoreReport& report,
                           const std::optional<MetricValues>& metrics = std::nullopt);

// Throws kInvalidValue if the report's subcategory counts disagree with `set`.
FineGrainedTable fine_grained_table(const ScoreReport& report, const ChallengeSet& set);
// Same, trusting the report's own item counts.
FineGrainedTable fine_grained_table(const ScoreReport& report);

enum class ExportFormat { kMarkdown, kCsv, kJson };

// "markdown"/"md", "csv", "json". Throws kUnknownFormat otherwise.
ExportFormat parse_export_format(std::string_view name);

std::string export_table(const SummaryTable& table, ExportFormat format);
std::string export_table(const FineGrainedTable& table, ExportFormat format);

// Cells of every pipe-table row after the header separator, trimmed.
// Lines outside the table are ignored.
std::vector<std::vector<std::string>> parse_markdown_table(std::string_view markdown);

// Splits RFC 4180 CSV into rows of fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view csv);

}  // namespace chalset

#endif  // CHALSET_REPORT_HPP_
