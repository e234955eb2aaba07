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

#include "chalset/scoring.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "json.hpp"

namespace chalset {

using json = nlohmann::ordered_json;

double Ratio::value() const {
  return defined() ? static_cast<double>(numerator) / static_cast<double>(denominator)
                   : 0.0;
}

std::optional<int> Ratio::percent() const {
  if (!defined()) return std::nullopt;
  return round_half_up_percent(numerator, denominator);
}

int round_half_up_percent(std::int64_t numerator, std::int64_t denominator) {
  // floor(100 * n / d + 1/2) in integers.
  return static_cast<int>((200 * numerator + denominator) / (2 * denominator));
}

std::string_view item_level_na_name(ItemLevelNa rule) {
  return rule == ItemLevelNa::kNonPositive ? "non-positive" : "exclude-from-panel";
}

std::string_view judgment_level_na_name(JudgmentLevelNa rule) {
  return rule == JudgmentLevelNa::kExclude ? "exclude" : "count-as-no";
}

bool is_bridged(std::size_t yes, std::size_t no, std::size_t na, ItemLevelNa rule) {
  const std::size_t base = rule == ItemLevelNa::kNonPositive ? yes + no + na : yes + no;
  return 2 * yes > base;
}

namespace {

using Key = std::tuple<std::string, std::string, std::string>;  // annotator, item, system

std::string pair_text(std::string_view item, std::string_view system) {
  return "(" + std::string(item) + ", " + std::string(system) + ")";
}

void push_unique(std::vector<std::string>& list, const std::string& value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
}

// (system, item) -> bridged, validated against the set.
struct VerdictIndex {
  std::vector<std::string> systems;
  std::map<SystemItemPair, bool> bridged;
};

VerdictIndex index_verdicts(std::span<const MajorityVerdict> verdicts,
                            const ChallengeSet& set) {
  VerdictIndex index;
  for (const auto& v : verdicts) {
    if (set.find(v.item_id) == nullptr) {
      throw Error(ErrorCode::kUnknownItem, "verdict for unknown item " + v.item_id,
                  v.item_id);
    }
    if (!index.bridged.emplace(SystemItemPair{v.system_id, v.item_id}, v.bridged).second) {
      throw Error(ErrorCode::kDuplicateOutput,
                  "duplicate verdict for " + pair_text(v.item_id, v.system_id),
                  pair_text(v.item_id, v.system_id));
    }
    push_unique(index.systems, v.system_id);
  }
  std::string missing;
  for (const auto& item : set.items) {
    for (const auto& system : index.systems) {
      if (!index.bridged.contains({system, item.id})) {
        if (!missing.empty()) missing += ", ";
        missing += pair_text(item.id, system);
      }
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kIncompleteMatrix, "missing verdicts for " + missing, missing);
  }
  return index;
}

SystemRates rates_over(const VerdictIndex& index,
                       const std::vector<const ChallengeItem*>& items) {
  SystemRates rates;
  for (const auto& system : index.systems) {
    Ratio r{0, static_cast<std::int64_t>(items.size())};
    for (const ChallengeItem* item : items) {
      if (index.bridged.at({system, item->id})) ++r.numerator;
    }
    rates[system] = r;
  }
  return rates;
}

std::vector<const ChallengeItem*> items_where(
    const ChallengeSet& set, const std::function<bool(const ChallengeItem&)>& pred) {
  std::vector<const ChallengeItem*> out;
  for (const auto& item : set.items) {
    if (pred(item)) out.push_back(&item);
  }
  return out;
}

std::vector<DivergenceCategory> categories_present(const ChallengeSet& set) {
  std::vector<DivergenceCategory> out;
  for (const auto c : kAllCategories) {
    if (std::any_of(set.items.begin(), set.items.end(),
                    [c](const ChallengeItem& i) { return i.category == c; })) {
      out.push_back(c);
    }
  }
  return out;
}

struct PanelCounts {
  std::size_t yes = 0;
  std::size_t no = 0;
  std::size_t na = 0;
  std::size_t total() const { return yes + no + na; }
  void add(Verdict v) {
    switch (v) {
      case Verdict::kYes: ++yes; break;
      case Verdict::kNo: ++no; break;
      case Verdict::kNotApplicable: ++na; break;
    }
  }
};

// Validated judgment data: effective judgments, complete panels over the full
// (set items x systems) matrix.
struct PanelIndex {
  std::vector<std::string> systems;
  std::map<SystemItemPair, PanelCounts> panels;
};

PanelIndex index_panels(std::span<const Judgment> judgments, const ChallengeSet& set,
                        const ScoringOptions& options) {
  PanelIndex index;
  const auto effective = effective_judgments(judgments);
  for (const auto& j : effective) {
    if (set.find(j.item_id) == nullptr) {
      throw Error(ErrorCode::kUnknownItem, "judgment for unknown item " + j.item_id,
                  j.item_id);
    }
    push_unique(index.systems, j.system_id);
  }
  for (const auto& a : aggregate(effective, options.panel_size, options.item_level_na)) {
    index.panels[{a.system_id, a.item_id}] = {a.yes_count, a.no_count, a.na_count};
  }
  std::string missing;
  for (const auto& item : set.items) {
    for (const auto& system : index.systems) {
      if (!index.panels.contains({system, item.id})) {
        if (!missing.empty()) missing += ", ";
        missing += pair_text(item.id, system);
      }
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kIncompleteMatrix, "no judgments for " + missing, missing);
  }
  return index;
}

SystemRates judgment_rates_over(const PanelIndex& index,
                                const std::vector<const ChallengeItem*>& items,
                                JudgmentLevelNa rule) {
  SystemRates rates;
  for (const auto& system : index.systems) {
    Ratio r;
    for (const ChallengeItem* item : items) {
      const PanelCounts& p = index.panels.at({system, item->id});
      r.numerator += static_cast<std::int64_t>(p.yes);
      r.denominator += static_cast<std::int64_t>(
          rule == JudgmentLevelNa::kExclude ? p.yes + p.no : p.total());
    }
    rates[system] = r;
  }
  return rates;
}

Ratio agreement_over(const PanelIndex& index,
                     const std::vector<const ChallengeItem*>& items) {
  Ratio r;
  for (const ChallengeItem* item : items) {
    for (const auto& system : index.systems) {
      const PanelCounts& p = index.panels.at({system, item->id});
      const std::size_t n = p.total();
      if (p.yes == n || p.no == n || p.na == n) ++r.numerator;
      ++r.denominator;
    }
  }
  return r;
}

}  // namespace

std::vector<Judgment> effective_judgments(std::span<const Judgment> judgments) {
  std::map<Key, const Judgment*> best;
  for (const auto& j : judgments) {
    Key key{j.annotator_id, j.item_id, j.system_id};
    auto [it, inserted] = best.try_emplace(std::move(key), &j);
    if (inserted) continue;
    const Judgment* current = it->second;
    if (j.revision > current->revision) {
      it->second = &j;
    } else if (j.revision == current->revision && j.verdict != current->verdict) {
      const std::string slot = "(" + j.annotator_id + ", " + j.item_id + ", " +
                               j.system_id + ") revision " +
                               std::to_string(j.revision);
      throw Error(ErrorCode::kConflictingRevision,
                  "conflicting judgments for " + slot, slot);
    }
  }
  std::vector<Judgment> out;
  out.reserve(best.size());
  for (const auto& [key, j] : best) out.push_back(*j);
  return out;
}

std::vector<AggregatedVerdict> aggregate(std::span<const Judgment> judgments,
                                         std::size_t panel_size, ItemLevelNa rule) {
  if (panel_size == 0) {
    throw Error(ErrorCode::kInvalidValue, "panel size must be positive", "");
  }
  std::map<SystemItemPair, PanelCounts> panels;
  for (const auto& j : effective_judgments(judgments)) {
    panels[{j.system_id, j.item_id}].add(j.verdict);
  }
  std::vector<AggregatedVerdict> out;
  out.reserve(panels.size());
  for (const auto& [pair, p] : panels) {
    const auto& [system, item] = pair;
    if (p.total() != panel_size) {
      const std::string where = pair_text(item, system);
      throw Error(ErrorCode::kIncompletePanel,
                  "panel for " + where + " has " + std::to_string(p.total()) +
                      " judgment(s); expected " + std::to_string(panel_size),
                  where);
    }
    out.push_back({item, system, p.yes, p.no, p.na, panel_size,
                   is_bridged(p.yes, p.no, p.na, rule)});
  }
  std::sort(out.begin(), out.end(),
            [](const AggregatedVerdict& a, const AggregatedVerdict& b) {
              const auto c = compare_item_ids(a.item_id, b.item_id);
              if (c != 0) return c < 0;
              return a.system_id < b.system_id;
            });
  return out;
}

std::vector<SubcategoryScore> subcategory_scores(std::span<const MajorityVerdict> verdicts,
                                                 const ChallengeSet& set) {
  const VerdictIndex index = index_verdicts(verdicts, set);
  std::vector<SubcategoryScore> out;
  for (const auto& name : set.subcategories()) {
    const auto items =
        items_where(set, [&](const ChallengeItem& i) { return i.subcategory == name; });
    out.push_back({items.front()->category, name, items.size(), rates_over(index, items)});
  }
  return out;
}

CategoryRates category_scores_item_level(std::span<const MajorityVerdict> verdicts,
                                         const ChallengeSet& set) {
  const VerdictIndex index = index_verdicts(verdicts, set);
  CategoryRates out;
  for (const auto c : categories_present(set)) {
    out.by_category[c] = rates_over(
        index, items_where(set, [c](const ChallengeItem& i) { return i.category == c; }));
  }
  out.overall = rates_over(index, items_where(set, [](const ChallengeItem&) { return true; }));
  return out;
}

CategoryRates judgment_level_scores(std::span<const Judgment> judgments,
                                    const ChallengeSet& set,
                                    const ScoringOptions& options) {
  const PanelIndex index = index_panels(judgments, set, options);
  CategoryRates out;
  for (const auto c : categories_present(set)) {
    out.by_category[c] = judgment_rates_over(
        index, items_where(set, [c](const ChallengeItem& i) { return i.category == c; }),
        options.judgment_level_na);
  }
  out.overall = judgment_rates_over(
      index, items_where(set, [](const ChallengeItem&) { return true; }),
      options.judgment_level_na);
  return out;
}

AgreementRates agreement(std::span<const Judgment> judgments, const ChallengeSet& set,
                         const ScoringOptions& options) {
  const PanelIndex index = index_panels(judgments, set, options);
  AgreementRates out;
  for (const auto c : categories_present(set)) {
    out.by_category[c] = agreement_over(
        index, items_where(set, [c](const ChallengeItem& i) { return i.category == c; }));
  }
  out.overall =
      agreement_over(index, items_where(set, [](const ChallengeItem&) { return true; }));
  return out;
}

std::vector<AnnotatorItemSystem> missing_judgments(
    std::span<const Judgment> judgments, const ChallengeSet& set,
    const std::vector<std::string>& systems,
    const std::vector<std::string>& annotators) {
  std::set<Key> present;
  for (const auto& j : judgments) present.emplace(j.annotator_id, j.item_id, j.system_id);
  std::vector<AnnotatorItemSystem> missing;
  for (const auto& annotator : annotators) {
    for (const auto& item : set.items) {
      for (const auto& system : systems) {
        if (!present.contains({annotator, item.id, system})) {
          missing.emplace_back(annotator, item.id, system);
        }
      }
    }
  }
  return missing;
}

namespace {

ScoreReport item_level_report(std::span<const MajorityVerdict> verdicts,
                              const ChallengeSet& set) {
  ScoreReport report;
  report.systems = index_verdicts(verdicts, set).systems;
  report.subcategories = subcategory_scores(verdicts, set);
  const CategoryRates rollup = category_scores_item_level(verdicts, set);
  for (const auto& [category, rates] : rollup.by_category) {
    CategoryScore score;
    score.category = category;
    score.item_count = static_cast<std::size_t>(
        std::count_if(set.items.begin(), set.items.end(),
                      [c = category](const ChallengeItem& i) { return i.category == c; }));
    score.item_level = rates;
    report.categories.push_back(std::move(score));
  }
  report.overall.item_count = set.items.size();
  report.overall.item_level = rollup.overall;
  return report;
}

}  // namespace

ScoreReport score_verdicts(std::span<const MajorityVerdict> verdicts,
                           const ChallengeSet& set) {
  return item_level_report(verdicts, set);
}

ScoreReport score_judgments(std::span<const Judgment> judgments,
                            const ChallengeSet& set, const ScoringOptions& options) {
  const PanelIndex index = index_panels(judgments, set, options);
  std::vector<MajorityVerdict> majorities;
  for (const auto& [pair, p] : index.panels) {
    majorities.push_back({pair.second, pair.first,
                          is_bridged(p.yes, p.no, p.na, options.item_level_na)});
  }
  ScoreReport report = item_level_report(majorities, set);
  report.systems = index.systems;
  report.options = options;
  report.has_judgments = true;
  const CategoryRates jl = judgment_level_scores(judgments, set, options);
  const AgreementRates ag = agreement(judgments, set, options);
  for (auto& score : report.categories) {
    score.judgment_level = jl.by_category.at(score.category);
    score.agreement = ag.by_category.at(score.category);
  }
  report.overall.judgment_level = jl.overall;
  report.overall.agreement = ag.overall;
  return report;
}

namespace {

json ratio_json(const Ratio& r) {
  json obj;
  obj["numerator"] = r.numerator;
  obj["denominator"] = r.denominator;
  const auto p = r.percent();
  obj["percent"] = p ? json(*p) : json(nullptr);
  return obj;
}

json rates_json(const SystemRates& rates, const std::vector<std::string>& systems) {
  json obj = json::object();
  for (const auto& s : systems) {
    if (const auto it = rates.find(s); it != rates.end()) obj[s] = ratio_json(it->second);
  }
  return obj;
}

Ratio parse_ratio(const json& obj) {
  return {obj.at("numerator").get<std::int64_t>(), obj.at("denominator").get<std::int64_t>()};
}

SystemRates parse_rates(const json& obj) {
  SystemRates rates;
  for (const auto& [system, r] : obj.items()) rates[system] = parse_ratio(r);
  return rates;
}

DivergenceCategory require_category(const json& v) {
  const auto c = parse_category(v.get<std::string>());
  if (!c) throw Error(ErrorCode::kInvalidValue, "unknown category " + v.dump(), "category");
  return *c;
}

}  // namespace

std::string serialize_score_report(const ScoreReport& report) {
  json doc;
  doc["format"] = "score-report";
  doc["schema_version"] = 1;
  doc["systems"] = report.systems;
  doc["options"] = {
      {"panel_size", report.options.panel_size},
      {"item_level_na", item_level_na_name(report.options.item_level_na)},
      {"judgment_level_na", judgment_level_na_name(report.options.judgment_level_na)}};
  doc["has_judgments"] = report.has_judgments;
  json subs = json::array();
  for (const auto& s : report.subcategories) {
    subs.push_back({{"category", category_key(s.category)},
                    {"subcategory", s.subcategory},
                    {"item_count", s.item_count},
                    {"item_level", rates_json(s.rates, report.systems)}});
  }
  doc["subcategories"] = std::move(subs);
  json cats = json::array();
  for (const auto& c : report.categories) {
    json obj;
    obj["category"] = category_key(c.category);
    obj["item_count"] = c.item_count;
    obj["item_level"] = rates_json(c.item_level, report.systems);
    obj["judgment_level"] =
        c.judgment_level ? rates_json(*c.judgment_level, report.systems) : json(nullptr);
    obj["agreement"] = c.agreement ? ratio_json(*c.agreement) : json(nullptr);
    cats.push_back(std::move(obj));
  }
  doc["categories"] = std::move(cats);
  json overall;
  overall["item_count"] = report.overall.item_count;
  overall["item_level"] = rates_json(report.overall.item_level, report.systems);
  overall["judgment_level"] = report.overall.judgment_level
                                  ? rates_json(*report.overall.judgment_level, report.systems)
                                  : json(nullptr);
  overall["agreement"] =
      report.overall.agreement ? ratio_json(*report.overall.agreement) : json(nullptr);
  doc["overall"] = std::move(overall);
  return doc.dump(2) + "\n";
}

ScoreReport parse_score_report(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformed, std::string("malformed score report: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "score-report") {
    throw Error(ErrorCode::kMalformed, "expected a 'score-report' document", "format");
  }
  try {
    ScoreReport report;
    report.systems = doc.at("systems").get<std::vector<std::string>>();
    const json& opts = doc.at("options");
    report.options.panel_size = opts.at("panel_size").get<std::size_t>();
    report.options.item_level_na = opts.at("item_level_na").get<std::string>() ==
                                           item_level_na_name(ItemLevelNa::kNonPositive)
                                       ? ItemLevelNa::kNonPositive
                                       : ItemLevelNa::kExcludeFromPanel;
    report.options.judgment_level_na =
        opts.at("judgment_level_na").get<std::string>() ==
                judgment_level_na_name(JudgmentLevelNa::kExclude)
            ? JudgmentLevelNa::kExclude
            : JudgmentLevelNa::kCountAsNo;
    report.has_judgments = doc.at("has_judgments").get<bool>();
    for (const auto& s : doc.at("subcategories")) {
      report.subcategories.push_back({require_category(s.at("category")),
                                      s.at("subcategory").get<std::string>(),
                                      s.at("item_count").get<std::size_t>(),
                                      parse_rates(s.at("item_level"))});
    }
    for (const auto& c : doc.at("categories")) {
      CategoryScore score;
      score.category = require_category(c.at("category"));
      score.item_count = c.at("item_count").get<std::size_t>();
      score.item_level = parse_rates(c.at("item_level"));
      if (!c.at("judgment_level").is_null()) {
        score.judgment_level = parse_rates(c.at("judgment_level"));
      }
      if (!c.at("agreement").is_null()) score.agreement = parse_ratio(c.at("agreement"));
      report.categories.push_back(std::move(score));
    }
    const json& o = doc.at("overall");
    report.overall.item_count = o.at("item_count").get<std::size_t>();
    report.overall.item_level = parse_rates(o.at("item_level"));
    if (!o.at("judgment_level").is_null()) {
      report.overall.judgment_level = parse_rates(o.at("judgment_level"));
    }
    if (!o.at("agreement").is_null()) report.overall.agreement = parse_ratio(o.at("agreement"));
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformed, std::string("malformed score report: ") + e.what());
  }
}

std::string serialize_judgments(std::span<const Judgment> judgments) {
  json doc;
  doc["format"] = "judgments";
  doc["schema_version"] = 1;
  json arr = json::array();
  for (const auto& j : judgments) {
    arr.push_back({{"annotator_id", j.annotator_id},
                   {"item_id", j.item_id},
                   {"system_id", j.system_id},
                   {"verdict", verdict_name(j.verdict)},
                   {"revision", j.revision},
                   {"timestamp", j.timestamp}});
  }
  doc["judgments"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::vector<Judgment> parse_judgments(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformed, std::string("malformed judgments: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("judgments") || !doc["judgments"].is_array()) {
    throw Error(ErrorCode::kMalformed, "expected a 'judgments' document", "judgments");
  }
  std::vector<Judgment> out;
  for (std::size_t i = 0; i < doc["judgments"].size(); ++i) {
    const json& j = doc["judgments"][i];
    const std::string path = "judgments[" + std::to_string(i) + "]";
    try {
      Judgment judgment;
      judgment.annotator_id = j.at("annotator_id").get<std::string>();
      judgment.item_id = j.at("item_id").get<std::string>();
      judgment.system_id = j.at("system_id").get<std::string>();
      const auto name = j.at("verdict").get<std::string>();
      const auto verdict = parse_verdict(name);
      if (!verdict) {
        throw Error(ErrorCode::kInvalidVerdict,
                    "invalid verdict '" + name +
                        "'; allowed: yes, no, not-applicable (" + path + ")",
                    path);
      }
      judgment.verdict = *verdict;
      judgment.revision = j.value("revision", std::uint64_t{0});
      judgment.timestamp = j.value("timestamp", std::string{});
      out.push_back(std::move(judgment));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformed, "malformed judgment at " + path + ": " + e.what(),
                  path);
    }
  }
  return out;
}

}  // namespace chalset
