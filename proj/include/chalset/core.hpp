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

#ifndef CHALSET_CORE_HPP_
#define CHALSET_CORE_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chalset/error.hpp"

namespace chalset {

enum class DivergenceCategory {
  kMorphoSyntactic,
  kLexicoSyntactic,
  kSyntactic,
};

inline constexpr std::array<DivergenceCategory, 3> kAllCategories = {
    DivergenceCategory::kMorphoSyntactic,
    DivergenceCategory::kLexicoSyntactic,
    DivergenceCategory::kSyntactic,
};

// Serialized form: "morpho-syntactic", "lexico-syntactic", "syntactic".
std::string_view category_key(DivergenceCategory category);
// Display form used in tables: "Morpho-syntactic", ...
std::string_view category_label(DivergenceCategory category);
std::optional<DivergenceCategory> parse_category(std::string_view key);

// Half-open range of Unicode scalar value offsets into a host string.
struct HighlightSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend auto operator<=>(const HighlightSpan&, const HighlightSpan&) = default;
};

struct ChallengeItem {
  std::string id;
  DivergenceCategory category = DivergenceCategory::kMorphoSyntactic;
  std::string subcategory;
  std::string question;
  std::string source;
  std::vector<HighlightSpan> source_highlights;
  std::string reference;
  std::vector<HighlightSpan> reference_highlights;
  std::optional<std::string> notes;

  friend bool operator==(const ChallengeItem&, const ChallengeItem&) = default;
};

struct ChallengeSet {
  std::string name;
  std::string version;
  std::string source_language;
  std::string target_language;
  std::vector<ChallengeItem> items;

  const ChallengeItem* find(std::string_view item_id) const;
  // Distinct subcategory names in order of first appearance.
  std::vector<std::string> subcategories() const;

  friend bool operator==(const ChallengeSet&, const ChallengeSet&) = default;
};

// Item ids follow S<digits><lowercase letter><optional digit>: S1a, S4d2.
bool is_valid_item_id(std::string_view id);

// Orders ids numerically on the digit runs, so S2a < S10a.
std::strong_ordering compare_item_ids(std::string_view a, std::string_view b);

struct Finding {
  ErrorCode code = ErrorCode::kMalformed;
  std::string item_id;  // empty for set-level findings
  std::string field;    // e.g. "items[4].reference_highlights[0]"
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool ok() const { return errors.empty(); }
};

struct ValidationOptions {
  std::size_t min_items_per_subcategory = 3;
  std::size_t max_source_tokens = 15;
};

ValidationReport validate_challenge_set(const ChallengeSet& set,
                                        const ValidationOptions& options = {});

// Parses a challenge-set document (schema in docs/formats.md). Throws Error
// naming the item id and field path of the first hard violation.
ChallengeSet parse_challenge_set(std::string_view document);
std::string serialize_challenge_set(const ChallengeSet& set);

struct SystemOutput {
  std::string system_id;
  std::string item_id;
  std::string translation;

  friend bool operator==(const SystemOutput&, const SystemOutput&) = default;
};

using SystemItemPair = std::pair<std::string, std::string>;  // (system, item)

class SystemOutputSet {
 public:
  // Throws kDuplicateOutput when (system_id, item_id) is already present.
  void add(SystemOutput output);

  const std::vector<SystemOutput>& outputs() const { return outputs_; }
  // System ids in order of first appearance.
  const std::vector<std::string>& systems() const { return systems_; }
  const SystemOutput* find(std::string_view system_id,
                           std::string_view item_id) const;
  bool empty() const { return outputs_.empty(); }

  // Pairs absent from the systems x items matrix, in (set order, system order).
  std::vector<SystemItemPair> missing_pairs(const ChallengeSet& set) const;
  // Throws kIncompleteMatrix listing every missing pair.
  void require_complete(const ChallengeSet& set) const;

  friend bool operator==(const SystemOutputSet& a, const SystemOutputSet& b) {
    return a.outputs_ == b.outputs_;
  }

 private:
  std::vector<SystemOutput> outputs_;
  std::vector<std::string> systems_;
  std::map<SystemItemPair, std::size_t, std::less<>> index_;
};

struct ParsedOutputs {
  SystemOutputSet outputs;
  std::vector<std::string> warnings;
};

// Unknown item ids and duplicate pairs are errors; an incomplete matrix only
// produces warnings here.
ParsedOutputs parse_outputs(std::string_view document, const ChallengeSet& set);
std::string serialize_outputs(const SystemOutputSet& outputs);

// Item-level outcome for one (item, system) pair after panel aggregation.
struct MajorityVerdict {
  std::string item_id;
  std::string system_id;
  bool bridged = false;

  friend bool operator==(const MajorityVerdict&, const MajorityVerdict&) = default;
};

std::vector<MajorityVerdict> parse_majority_verdicts(std::string_view document,
                                                     const ChallengeSet& set);
std::string serialize_majority_verdicts(const std::vector<MajorityVerdict>& verdicts);

// Wraps every span of `text` in markdown bold markers.
std::string apply_highlights(std::string_view text,
                             const std::vector<HighlightSpan>& spans);

// Markdown listing grouped by category then subcategory. When verdicts are
// given, every output is followed by a check or cross mark.
std::string render_formatted(const ChallengeSet& set,
                             const SystemOutputSet* outputs = nullptr,
                             const std::vector<MajorityVerdict>* verdicts = nullptr);

}  // namespace chalset

#endif  // CHALSET_CORE_HPP_
