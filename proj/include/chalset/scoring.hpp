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

#ifndef CHALSET_SCORING_HPP_
#define CHALSET_SCORING_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "chalset/core.hpp"
#include "chalset/judgment.hpp"

namespace chalset {

// Exact rate. A zero denominator means "undefined" (rendered as a dash).
struct Ratio {
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;

  bool defined() const { return denominator > 0; }
  double value() const;
  // Integer percent, rounded half up; nullopt when undefined.
  std::optional<int> percent() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

int round_half_up_percent(std::int64_t numerator, std::int64_t denominator);

// How a not-applicable vote enters the strict-majority rule.
enum class ItemLevelNa {
  kNonPositive,       // bridged iff 2*yes > panel_size
  kExcludeFromPanel,  // bridged iff 2*yes > yes + no
};

// How a not-applicable vote enters yes / total judgments.
enum class JudgmentLevelNa {
  kExclude,     // yes / (yes + no)
  kCountAsNo,   // yes / (yes + no + na)
};

struct ScoringOptions {
  std::size_t panel_size = 3;
  ItemLevelNa item_level_na = ItemLevelNa::kNonPositive;
  JudgmentLevelNa judgment_level_na = JudgmentLevelNa::kExclude;

  friend bool operator==(const ScoringOptions&, const ScoringOptions&) = default;
};

std::string_view item_level_na_name(ItemLevelNa rule);
std::string_view judgment_level_na_name(JudgmentLevelNa rule);

bool is_bridged(std::size_t yes, std::size_t no, std::size_t na, ItemLevelNa rule);

struct AggregatedVerdict {
  std::string item_id;
  std::string system_id;
  std::size_t yes_count = 0;
  std::size_t no_count = 0;
  std::size_t na_count = 0;
  std::size_t panel_size = 0;
  bool bridged = false;

  MajorityVerdict majority() const { return {item_id, system_id, bridged}; }
};

// Keeps the highest revision per (annotator, item, system). Two records with
// the same key and revision but different verdicts throw kConflictingRevision.
std::vector<Judgment> effective_judgments(std::span<const Judgment> judgments);

// One entry per (item, system) present, sorted by (item id, system id).
// Every pair must have exactly panel_size distinct annotators after revision
// resolution, otherwise kIncompletePanel.
std::vector<AggregatedVerdict> aggregate(std::span<const Judgment> judgments,
                                         std::size_t panel_size,
                                         ItemLevelNa rule = ItemLevelNa::kNonPositive);

using SystemRates = std::map<std::string, Ratio, std::less<>>;

struct SubcategoryScore {
  DivergenceCategory category = DivergenceCategory::kMorphoSyntactic;
  std::string subcategory;
  std::size_t item_count = 0;
  SystemRates rates;
};

struct CategoryRates {
  std::map<DivergenceCategory, SystemRates> by_category;
  SystemRates overall;
};

struct AgreementRates {
  std::map<DivergenceCategory, Ratio> by_category;
  Ratio overall;
};

// Bridged items / items per subcategory, rows in set order. Verdicts must
// cover every item for every system they mention.
std::vector<SubcategoryScore> subcategory_scores(std::span<const MajorityVerdict> verdicts,
                                                 const ChallengeSet& set);

CategoryRates category_scores_item_level(std::span<const MajorityVerdict> verdicts,
                                         const ChallengeSet& set);

CategoryRates judgment_level_scores(std::span<const Judgment> judgments,
                                    const ChallengeSet& set,
                                    const ScoringOptions& options = {});

// Fraction of (item, system) outputs whose panel votes are all identical.
AgreementRates agreement(std::span<const Judgment> judgments, const ChallengeSet& set,
                         const ScoringOptions& options = {});

using AnnotatorItemSystem = std::tuple<std::string, std::string, std::string>;

// Slots in annotators x items x systems with no effective judgment.
std::vector<AnnotatorItemSystem> missing_judgments(
    std::span<const Judgment> judgments, const ChallengeSet& set,
    const std::vector<std::string>& systems,
    const std::vector<std::string>& annotators);

struct CategoryScore {
  DivergenceCategory category = DivergenceCategory::kMorphoSyntactic;
  std::size_t item_count = 0;
  SystemRates item_level;
  std::optional<SystemRates> judgment_level;
  std::optional<Ratio> agreement;
};

struct OverallScore {
  std::size_t item_count = 0;
  SystemRates item_level;
  std::optional<SystemRates> judgment_level;
  std::optional<Ratio> agreement;
};

struct ScoreReport {
  std::vector<std::string> systems;  // display order
  ScoringOptions options;
  bool has_judgments = false;
  std::vector<SubcategoryScore> subcategories;
  std::vector<CategoryScore> categories;  // categories present, canonical order
  OverallScore overall;

  bool empty() const { return systems.empty() || subcategories.empty(); }
};

// Item-level report from majority verdicts only.
ScoreReport score_verdicts(std::span<const MajorityVerdict> verdicts,
                           const ChallengeSet& set);

// Full report: item level via aggregate(), plus judgment level and agreement.
ScoreReport score_judgments(std::span<const Judgment> judgments,
                            const ChallengeSet& set,
                            const ScoringOptions& options = {});

std::string serialize_score_report(const ScoreReport& report);
ScoreReport parse_score_report(std::string_view document);

std::string serialize_judgments(std::span<const Judgment> judgments);
std::vector<Judgment> parse_judgments(std::string_view document);

}  // namespace chalset

#endif  // CHALSET_SCORING_HPP_
