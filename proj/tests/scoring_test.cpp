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
#include <array>
#include <map>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "chalset/error.hpp"
#include "chalset/fixture.hpp"
#include "chalset/random.hpp"
#include "test_util.hpp"

namespace chalset {
namespace {

using ::testing::ElementsAre;

constexpr std::array<Verdict, 3> kVerdicts = {Verdict::kYes, Verdict::kNo,
                                              Verdict::kNotApplicable};

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected chalset::Error";
  return ErrorCode::kStorage;
}

std::vector<Judgment> Panel(const std::string& item, const std::string& system,
                            const std::vector<Verdict>& votes) {
  std::vector<Judgment> out;
  for (std::size_t a = 0; a < votes.size(); ++a) {
    out.push_back({"ann" + std::to_string(a + 1), item, system, votes[a], 0, ""});
  }
  return out;
}

// ---- rounding ----

TEST(RoundingTest, MatchesIntegerOracle) {
  for (std::int64_t d = 1; d <= 200; ++d) {
    for (std::int64_t n = 0; n <= d; ++n) {
      const std::int64_t q = 100 * n / d;
      const std::int64_t r = 100 * n % d;
      const int oracle = static_cast<int>(q + (2 * r >= d ? 1 : 0));
      ASSERT_EQ(round_half_up_percent(n, d), oracle) << n << "/" << d;
    }
  }
}

TEST(RoundingTest, KnownValues) {
  EXPECT_EQ(round_half_up_percent(1, 8), 13);  // 12.5
  EXPECT_EQ(round_half_up_percent(3, 8), 38);  // 37.5
  EXPECT_EQ(round_half_up_percent(1, 6), 17);
  EXPECT_EQ(round_half_up_percent(2, 3), 67);
  EXPECT_EQ(round_half_up_percent(1, 3), 33);
  EXPECT_EQ(round_half_up_percent(32, 108), 30);
  EXPECT_EQ((Ratio{0, 0}.percent()), std::nullopt);
}

// ---- majority rule ----

// All 27 panels of three votes, checked against a rule written from the
// definition: bridged iff yes votes form a strict majority.
TEST(MajorityTest, ExhaustiveThreeVotePanels) {
  int combos = 0;
  for (Verdict a : kVerdicts) {
    for (Verdict b : kVerdicts) {
      for (Verdict c : kVerdicts) {
        ++combos;
        const std::array<Verdict, 3> votes{a, b, c};
        const auto yes = std::count(votes.begin(), votes.end(), Verdict::kYes);
        const auto no = std::count(votes.begin(), votes.end(), Verdict::kNo);
        const bool oracle_non_positive = yes >= 2;
        const bool oracle_exclude = yes > no;

        const auto j = Panel("S1a", "X", {a, b, c});
        const auto np = aggregate(j, 3, ItemLevelNa::kNonPositive);
        const auto ex = aggregate(j, 3, ItemLevelNa::kExcludeFromPanel);
        ASSERT_EQ(np.size(), 1u);
        ASSERT_EQ(ex.size(), 1u);
        EXPECT_EQ(np[0].bridged, oracle_non_positive);
        EXPECT_EQ(ex[0].bridged, oracle_exclude);
        EXPECT_EQ(np[0].yes_count + np[0].no_count + np[0].na_count, 3u);
      }
    }
  }
  EXPECT_EQ(combos, 27);
}

TEST(MajorityTest, NotApplicableHandlingDiffers) {
  EXPECT_FALSE(is_bridged(1, 0, 2, ItemLevelNa::kNonPositive));
  EXPECT_TRUE(is_bridged(1, 0, 2, ItemLevelNa::kExcludeFromPanel));
  EXPECT_FALSE(is_bridged(0, 0, 3, ItemLevelNa::kExcludeFromPanel));
  EXPECT_FALSE(is_bridged(1, 1, 1, ItemLevelNa::kExcludeFromPanel));
  EXPECT_TRUE(is_bridged(3, 2, 0, ItemLevelNa::kNonPositive));
  EXPECT_FALSE(is_bridged(2, 2, 0, ItemLevelNa::kNonPositive));
}

TEST(AggregateTest, PanelSizeEnforced) {
  auto j = Panel("S1a", "X", {Verdict::kYes, Verdict::kYes});
  EXPECT_EQ(CodeOf([&] { aggregate(j, 3); }), ErrorCode::kIncompletePanel);
  j = Panel("S1a", "X", {Verdict::kYes, Verdict::kYes, Verdict::kNo, Verdict::kNo});
  EXPECT_EQ(CodeOf([&] { aggregate(j, 3); }), ErrorCode::kIncompletePanel);
  EXPECT_EQ(aggregate(j, 4).size(), 1u);
  EXPECT_EQ(CodeOf([&] { aggregate(j, 0); }), ErrorCode::kInvalidValue);
}

TEST(AggregateTest, SortedByItemThenSystem) {
  std::vector<Judgment> j;
  for (const char* item : {"S10a", "S2a"}) {
    for (const char* system : {"Y", "X"}) {
      const auto p = Panel(item, system, {Verdict::kYes});
      j.insert(j.end(), p.begin(), p.end());
    }
  }
  const auto out = aggregate(j, 1);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].item_id, "S2a");
  EXPECT_EQ(out[0].system_id, "X");
  EXPECT_EQ(out[3].item_id, "S10a");
  EXPECT_EQ(out[3].system_id, "Y");
}

// ---- revisions ----

TEST(EffectiveJudgmentsTest, HighestRevisionWins) {
  std::vector<Judgment> j = {
      {"ann1", "S1a", "X", Verdict::kNo, 0, "t0"},
      {"ann1", "S1a", "X", Verdict::kYes, 2, "t2"},
      {"ann1", "S1a", "X", Verdict::kNotApplicable, 1, "t1"},
      {"ann2", "S1a", "X", Verdict::kNo, 0, "t0"},
  };
  const auto eff = effective_judgments(j);
  ASSERT_EQ(eff.size(), 2u);
  EXPECT_EQ(eff[0].verdict, Verdict::kYes);
  EXPECT_EQ(eff[0].revision, 2u);
}

TEST(EffectiveJudgmentsTest, ConflictingRevisionRejected) {
  std::vector<Judgment> j = {{"ann1", "S1a", "X", Verdict::kNo, 1, ""},
                             {"ann1", "S1a", "X", Verdict::kYes, 1, ""}};
  EXPECT_EQ(CodeOf([&] { effective_judgments(j); }), ErrorCode::kConflictingRevision);
  j[1].verdict = Verdict::kNo;
  EXPECT_EQ(effective_judgments(j).size(), 1u);
}

TEST(EffectiveJudgmentsTest, RevisionDoesNotChangePanelSize) {
  auto j = Panel("S1a", "X", {Verdict::kNo, Verdict::kNo, Verdict::kYes});
  j.push_back({"ann1", "S1a", "X", Verdict::kYes, 1, ""});
  const auto out = aggregate(j, 3);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].bridged);
  EXPECT_EQ(out[0].yes_count, 2u);
}

// ---- randomized properties ----

struct Grid {
  ChallengeSet set;
  std::vector<std::string> systems;
  std::vector<Judgment> judgments;
};

Grid RandomGrid(SplitMix64& rng) {
  Grid g;
  g.set = testing::ToySet(1 + static_cast<int>(rng.bounded(4)),
                          1 + static_cast<int>(rng.bounded(4)));
  const int n_systems = 1 + static_cast<int>(rng.bounded(3));
  for (int s = 0; s < n_systems; ++s) g.systems.push_back("SYS" + std::to_string(s));
  for (const auto& item : g.set.items) {
    for (const auto& system : g.systems) {
      for (int a = 0; a < 3; ++a) {
        g.judgments.push_back({"ann" + std::to_string(a), item.id, system,
                               kVerdicts[rng.bounded(3)], 0, ""});
      }
    }
  }
  return g;
}

TEST(PropertyTest, PermutationInvariance) {
  SplitMix64 rng(8080);
  for (int trial = 0; trial < 1000; ++trial) {
    Grid g = RandomGrid(rng);
    const std::string before = serialize_score_report(score_judgments(g.judgments, g.set));
    shuffle(std::span<Judgment>(g.judgments), rng);
    const std::string after = serialize_score_report(score_judgments(g.judgments, g.set));
    ASSERT_EQ(before, after) << "trial " << trial;
  }
}

TEST(PropertyTest, NoToYesNeverHurts) {
  SplitMix64 rng(4242);
  int flips = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Grid g = RandomGrid(rng);
    std::vector<std::size_t> no_votes;
    for (std::size_t i = 0; i < g.judgments.size(); ++i) {
      if (g.judgments[i].verdict == Verdict::kNo) no_votes.push_back(i);
    }
    if (no_votes.empty()) continue;
    for (ItemLevelNa rule : {ItemLevelNa::kNonPositive, ItemLevelNa::kExcludeFromPanel}) {
      ScoringOptions options;
      options.item_level_na = rule;
      const auto before_agg = aggregate(g.judgments, 3, rule);
      const ScoreReport before = score_judgments(g.judgments, g.set, options);
      Grid flipped = g;
      flipped.judgments[no_votes[rng.bounded(no_votes.size())]].verdict = Verdict::kYes;
      const auto after_agg = aggregate(flipped.judgments, 3, rule);
      const ScoreReport after = score_judgments(flipped.judgments, g.set, options);
      ++flips;
      for (std::size_t k = 0; k < before_agg.size(); ++k) {
        ASSERT_LE(before_agg[k].bridged, after_agg[k].bridged);
      }
      for (const auto& system : g.systems) {
        ASSERT_LE(before.overall.item_level.at(system).numerator,
                  after.overall.item_level.at(system).numerator);
        ASSERT_LE(before.overall.judgment_level->at(system).value(),
                  after.overall.judgment_level->at(system).value());
      }
    }
  }
  EXPECT_GE(flips, 1000);
}

// ---- hand-built full judgment fixture ----

// Six items, two per category, two systems, three annotators.
//   X: every panel (yes, yes, no)
//   Y: morpho (yes, yes, yes), lexico (no, no, no), syntactic (yes, n/a, no)
std::vector<Judgment> HandFixture(const ChallengeSet& set) {
  std::vector<Judgment> out;
  for (const auto& item : set.items) {
    auto x = Panel(item.id, "X", {Verdict::kYes, Verdict::kYes, Verdict::kNo});
    std::vector<Verdict> y;
    switch (item.category) {
      case DivergenceCategory::kMorphoSyntactic:
        y = {Verdict::kYes, Verdict::kYes, Verdict::kYes};
        break;
      case DivergenceCategory::kLexicoSyntactic:
        y = {Verdict::kNo, Verdict::kNo, Verdict::kNo};
        break;
      case DivergenceCategory::kSyntactic:
        y = {Verdict::kYes, Verdict::kNotApplicable, Verdict::kNo};
        break;
    }
    auto yp = Panel(item.id, "Y", y);
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), yp.begin(), yp.end());
  }
  return out;
}

TEST(HandFixtureTest, JudgmentLevelExcludingNotApplicable) {
  const ChallengeSet set = testing::ToySet(3, 2);
  const CategoryRates r = judgment_level_scores(HandFixture(set), set, {});
  using C = DivergenceCategory;
  EXPECT_EQ(r.by_category.at(C::kMorphoSyntactic).at("X"), (Ratio{4, 6}));
  EXPECT_EQ(r.by_category.at(C::kMorphoSyntactic).at("Y"), (Ratio{6, 6}));
  EXPECT_EQ(r.by_category.at(C::kLexicoSyntactic).at("Y"), (Ratio{0, 6}));
  EXPECT_EQ(r.by_category.at(C::kSyntactic).at("Y"), (Ratio{2, 4}));
  EXPECT_EQ(r.overall.at("X"), (Ratio{12, 18}));
  EXPECT_EQ(r.overall.at("Y"), (Ratio{8, 16}));
  EXPECT_EQ(r.overall.at("X").percent(), 67);
  EXPECT_EQ(r.overall.at("Y").percent(), 50);
}

TEST(HandFixtureTest, JudgmentLevelCountingNotApplicableAsNo) {
  const ChallengeSet set = testing::ToySet(3, 2);
  ScoringOptions options;
  options.judgment_level_na = JudgmentLevelNa::kCountAsNo;
  const CategoryRates r = judgment_level_scores(HandFixture(set), set, options);
  EXPECT_EQ(r.by_category.at(DivergenceCategory::kSyntactic).at("Y"), (Ratio{2, 6}));
  EXPECT_EQ(r.overall.at("Y"), (Ratio{8, 18}));
  EXPECT_EQ(r.overall.at("Y").percent(), 44);
}

TEST(HandFixtureTest, AgreementPoolsSystems) {
  const ChallengeSet set = testing::ToySet(3, 2);
  const AgreementRates a = agreement(HandFixture(set), set);
  EXPECT_EQ(a.by_category.at(DivergenceCategory::kMorphoSyntactic), (Ratio{2, 4}));
  EXPECT_EQ(a.by_category.at(DivergenceCategory::kLexicoSyntactic), (Ratio{2, 4}));
  EXPECT_EQ(a.by_category.at(DivergenceCategory::kSyntactic), (Ratio{0, 4}));
  EXPECT_EQ(a.overall, (Ratio{4, 12}));
}

TEST(HandFixtureTest, FullReport) {
  const ChallengeSet set = testing::ToySet(3, 2);
  const ScoreReport report = score_judgments(HandFixture(set), set);
  EXPECT_TRUE(report.has_judgments);
  EXPECT_EQ(report.overall.item_level.at("X"), (Ratio{6, 6}));
  EXPECT_EQ(report.overall.item_level.at("Y"), (Ratio{2, 6}));
  ASSERT_EQ(report.categories.size(), 3u);
  EXPECT_EQ(report.categories[2].item_level.at("Y"), (Ratio{0, 2}));
  EXPECT_EQ(report.categories[2].agreement, (Ratio{0, 4}));
  ASSERT_EQ(report.subcategories.size(), 3u);
  EXPECT_EQ(report.subcategories[0].rates.at("Y"), (Ratio{2, 2}));
  EXPECT_EQ(parse_score_report(serialize_score_report(report)).overall.judgment_level,
            report.overall.judgment_level);
}

TEST(HandFixtureTest, MissingJudgmentsNamed) {
  const ChallengeSet set = testing::ToySet(3, 2);
  auto j = HandFixture(set);
  j.erase(std::remove_if(j.begin(), j.end(),
                         [](const Judgment& x) {
                           return x.annotator_id == "ann2" && x.item_id == "S3b" &&
                                  x.system_id == "Y";
                         }),
          j.end());
  const auto missing = missing_judgments(j, set, {"X", "Y"}, {"ann1", "ann2", "ann3"});
  ASSERT_EQ(missing.size(), 1u);
  EXPECT_EQ(missing[0], (AnnotatorItemSystem{"ann2", "S3b", "Y"}));
  EXPECT_EQ(CodeOf([&] { score_judgments(j, set); }), ErrorCode::kIncompletePanel);
}

TEST(JudgmentFormatTest, RoundTrips) {
  const ChallengeSet set = testing::ToySet(3, 2);
  const auto j = HandFixture(set);
  EXPECT_EQ(parse_judgments(serialize_judgments(j)), j);
}

// ---- bundled verdicts ----

TEST(BundledVerdictsTest, OverallCounts) {
  const ScoreReport report =
      score_verdicts(fixture::verdicts(), fixture::challenge_set());
  EXPECT_THAT(report.systems, ElementsAre("PBMT-1", "NMT", "Google"));
  EXPECT_EQ(report.overall.item_level.at("PBMT-1"), (Ratio{32, 108}));
  EXPECT_EQ(report.overall.item_level.at("NMT"), (Ratio{54, 108}));
  EXPECT_EQ(report.overall.item_level.at("Google"), (Ratio{72, 108}));
  EXPECT_FALSE(report.has_judgments);
  EXPECT_FALSE(report.overall.agreement.has_value());
}

TEST(BundledVerdictsTest, CategoryCounts) {
  const CategoryRates r =
      category_scores_item_level(fixture::verdicts(), fixture::challenge_set());
  using C = DivergenceCategory;
  EXPECT_EQ(r.by_category.at(C::kMorphoSyntactic).at("PBMT-1"), (Ratio{5, 29}));
  EXPECT_EQ(r.by_category.at(C::kMorphoSyntactic).at("NMT"), (Ratio{22, 29}));
  EXPECT_EQ(r.by_category.at(C::kMorphoSyntactic).at("Google"), (Ratio{21, 29}));
  EXPECT_EQ(r.by_category.at(C::kLexicoSyntactic).at("PBMT-1"), (Ratio{16, 41}));
  EXPECT_EQ(r.by_category.at(C::kLexicoSyntactic).at("NMT"), (Ratio{19, 41}));
  EXPECT_EQ(r.by_category.at(C::kLexicoSyntactic).at("Google"), (Ratio{23, 41}));
  EXPECT_EQ(r.by_category.at(C::kSyntactic).at("PBMT-1"), (Ratio{11, 38}));
  EXPECT_EQ(r.by_category.at(C::kSyntactic).at("NMT"), (Ratio{13, 38}));
  EXPECT_EQ(r.by_category.at(C::kSyntactic).at("Google"), (Ratio{28, 38}));
}

TEST(BundledVerdictsTest, MalformedVerdictSets) {
  const ChallengeSet& set = fixture::challenge_set();
  std::vector<MajorityVerdict> v = fixture::verdicts();
  v.pop_back();
  EXPECT_EQ(CodeOf([&] { score_verdicts(v, set); }), ErrorCode::kIncompleteMatrix);
  v = fixture::verdicts();
  v.push_back(v.front());
  EXPECT_EQ(CodeOf([&] { score_verdicts(v, set); }), ErrorCode::kDuplicateOutput);
  v = fixture::verdicts();
  v[0].item_id = "S99a";
  EXPECT_EQ(CodeOf([&] { score_verdicts(v, set); }), ErrorCode::kUnknownItem);
}

TEST(ScoreReportFormatTest, RoundTrips) {
  const ScoreReport report = score_verdicts(fixture::verdicts(), fixture::challenge_set());
  const std::string doc = serialize_score_report(report);
  EXPECT_EQ(serialize_score_report(parse_score_report(doc)), doc);
}

}  // namespace
}  // namespace chalset
