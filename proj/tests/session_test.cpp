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

#include "chalset/session.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "chalset/error.hpp"
#include "chalset/fixture.hpp"
#include "chalset/random.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace chalset {
namespace {

using ::testing::HasSubstr;
using ::testing::Not;

const std::vector<std::string> kAnnotators = {"ann1", "ann2", "ann3"};

TEST(BlindLabelTest, Sequence) {
  EXPECT_EQ(blind_label(0), "A");
  EXPECT_EQ(blind_label(2), "C");
  EXPECT_EQ(blind_label(25), "Z");
  EXPECT_EQ(blind_label(26), "AA");
  EXPECT_EQ(blind_label(27), "AB");
  EXPECT_EQ(blind_label(701), "ZZ");
  EXPECT_EQ(blind_label(702), "AAA");
}

TEST(BuildSessionsTest, SingleSystemAlwaysLabelledA) {
  const ChallengeSet set = testing::ToySet();
  for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
    const SessionPlan plan = build_sessions(set, testing::ToyOutputs(set, {"ONLY"}),
                                            {"ann1"}, seed);
    for (const auto& item : plan.sessions[0].items) {
      ASSERT_EQ(item.blinded_outputs.size(), 1u);
      EXPECT_EQ(item.blinded_outputs[0].blind_label, "A");
    }
  }
}

TEST(BuildSessionsTest, CoversEverySlotOnce) {
  const SessionPlan plan = build_sessions(fixture::challenge_set(), fixture::outputs(),
                                          kAnnotators, 2017);
  ASSERT_EQ(plan.sessions.size(), 3u);
  EXPECT_EQ(plan.key.size(), 972u);
  for (const auto& session : plan.sessions) {
    ASSERT_EQ(session.items.size(), 108u);
    std::set<std::string> ids;
    for (const auto& item : session.items) {
      ids.insert(item.item_id);
      ASSERT_EQ(item.blinded_outputs.size(), 3u);
      std::set<std::string> systems;
      for (const auto& o : item.blinded_outputs) {
        const std::string* system =
            plan.key.lookup(session.annotator_id, item.item_id, o.blind_label);
        ASSERT_NE(system, nullptr);
        systems.insert(*system);
        EXPECT_EQ(fixture::outputs().find(*system, item.item_id)->translation,
                  o.translation);
      }
      EXPECT_EQ(systems.size(), 3u);
      EXPECT_EQ(item.blinded_outputs[0].blind_label, "A");
      EXPECT_EQ(item.blinded_outputs[2].blind_label, "C");
    }
    EXPECT_EQ(ids.size(), 108u);
  }
}

TEST(BuildSessionsTest, ByteIdenticalForSameSeed) {
  const auto a = build_sessions(fixture::challenge_set(), fixture::outputs(), kAnnotators, 9);
  const auto b = build_sessions(fixture::challenge_set(), fixture::outputs(), kAnnotators, 9);
  for (std::size_t i = 0; i < a.sessions.size(); ++i) {
    EXPECT_EQ(serialize_session(a.sessions[i]), serialize_session(b.sessions[i]));
  }
  EXPECT_EQ(serialize_blinding_key(a.key), serialize_blinding_key(b.key));
}

TEST(BuildSessionsTest, OrdersDifferAcrossAnnotatorsAndSeeds) {
  const auto a = build_sessions(fixture::challenge_set(), fixture::outputs(), kAnnotators, 9);
  const auto b = build_sessions(fixture::challenge_set(), fixture::outputs(), kAnnotators, 10);
  auto order = [](const AnnotationSession& s) {
    std::vector<std::string> ids;
    for (const auto& item : s.items) ids.push_back(item.item_id);
    return ids;
  };
  EXPECT_NE(order(a.sessions[0]), order(a.sessions[1]));
  EXPECT_NE(order(a.sessions[0]), order(b.sessions[0]));
}

TEST(BuildSessionsTest, AnnotatorOrderDoesNotAffectSessions) {
  const auto a = build_sessions(fixture::challenge_set(), fixture::outputs(),
                                {"ann1", "ann2"}, 3);
  const auto b = build_sessions(fixture::challenge_set(), fixture::outputs(),
                                {"ann2", "ann1"}, 3);
  EXPECT_EQ(a.sessions[0], b.sessions[1]);
  EXPECT_EQ(a.sessions[1], b.sessions[0]);
}

TEST(BuildSessionsTest, LabelsSpreadEvenlyOverSystems) {
  const SessionPlan plan = build_sessions(fixture::challenge_set(), fixture::outputs(),
                                          {"a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8"},
                                          11);
  std::map<std::string, int> first;
  for (const auto& [slot, system] : plan.key.entries()) {
    if (std::get<2>(slot) == "A") ++first[system];
  }
  ASSERT_EQ(first.size(), 3u);
  // 864 items shown; each system should lead about 288 times.
  for (const auto& [system, n] : first) {
    EXPECT_GT(n, 230) << system;
    EXPECT_LT(n, 346) << system;
  }
}

TEST(BuildSessionsTest, NoSystemIdsInSerializedSessions) {
  const SessionPlan plan = build_sessions(fixture::challenge_set(), fixture::outputs(),
                                          kAnnotators, 2017);
  for (const auto& session : plan.sessions) {
    const std::string doc = serialize_session(session);
    EXPECT_THAT(doc, Not(HasSubstr("system_id")));
    for (const auto& system : fixture::outputs().systems()) {
      EXPECT_THAT(doc, Not(HasSubstr(system)));
    }
  }
}

TEST(BuildSessionsTest, RejectsBadInputs) {
  const ChallengeSet set = testing::ToySet();
  const SystemOutputSet outputs = testing::ToyOutputs(set, {"X", "Y"});
  try {
    build_sessions(set, outputs, {"ann1", "ann1"}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateAnnotator);
  }
  try {
    build_sessions(set, SystemOutputSet{}, {"ann1"}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSystems);
  }
  SystemOutputSet partial;
  partial.add({"X", "S1a", "t"});
  try {
    build_sessions(set, partial, {"ann1"}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteMatrix);
  }
}

TEST(UnblindTest, RejectsUnknownAndDuplicateSlots) {
  const ChallengeSet set = testing::ToySet();
  const SessionPlan plan =
      build_sessions(set, testing::ToyOutputs(set, {"X", "Y"}), {"ann1"}, 1);
  try {
    unblind({{"ann1", "S1a", "C", Verdict::kYes, 0, ""}}, plan.key);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTriple);
    EXPECT_EQ(e.detail(), "(ann1, S1a, C)");
  }
  try {
    unblind({{"ann1", "S1a", "A", Verdict::kYes, 0, ""},
             {"ann1", "S1a", "A", Verdict::kNo, 1, ""}},
            plan.key);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateTriple);
  }
}

// Blinding a random judgment grid through the key and unblinding it again
// must give back exactly the original grid.
TEST(UnblindTest, InvertsBlindingOnRandomGrids) {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const int subcats = 1 + static_cast<int>(rng.bounded(3));
    const ChallengeSet set = testing::ToySet(subcats, 3);
    std::vector<std::string> systems;
    const int n_systems = 1 + static_cast<int>(rng.bounded(5));
    for (int s = 0; s < n_systems; ++s) systems.push_back("SYS" + std::to_string(s));
    std::vector<std::string> annotators;
    const int n_annotators = 1 + static_cast<int>(rng.bounded(4));
    for (int a = 0; a < n_annotators; ++a) annotators.push_back("a" + std::to_string(a));
    const SessionPlan plan =
        build_sessions(set, testing::ToyOutputs(set, systems), annotators, rng.next());

    std::map<std::tuple<std::string, std::string, std::string>, Verdict> truth;
    std::vector<BlindJudgment> blind;
    for (const auto& [slot, system] : plan.key.entries()) {
      const auto& [annotator, item, label] = slot;
      const Verdict v = static_cast<Verdict>(rng.bounded(3));
      truth[{annotator, item, system}] = v;
      blind.push_back({annotator, item, label, v, 0, ""});
    }
    const std::vector<Judgment> back = unblind(blind, plan.key);
    ASSERT_EQ(back.size(), truth.size());
    for (const auto& j : back) {
      const auto it = truth.find({j.annotator_id, j.item_id, j.system_id});
      ASSERT_NE(it, truth.end());
      EXPECT_EQ(it->second, j.verdict);
    }
  }
}

TEST(SessionFormatTest, RoundTrips) {
  const SessionPlan plan = build_sessions(fixture::challenge_set(), fixture::outputs(),
                                          kAnnotators, 4);
  for (const auto& s : plan.sessions) EXPECT_EQ(parse_session(serialize_session(s)), s);
  const std::string key_doc = serialize_blinding_key(plan.key);
  EXPECT_EQ(parse_blinding_key(key_doc), plan.key);
  EXPECT_EQ(nlohmann::json::parse(key_doc)["sensitive"], true);
  EXPECT_THROW(parse_session(key_doc), Error);
}

TEST(SessionFormatTest, BlindJudgmentsRoundTrip) {
  const std::vector<BlindJudgment> in = {
      {"ann1", "S1a", "B", Verdict::kNotApplicable, 2, "2026-01-01T00:00:00.000Z"}};
  const auto out = parse_blind_judgments(serialize_blind_judgments(in));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].blind_label, "B");
  EXPECT_EQ(out[0].verdict, Verdict::kNotApplicable);
  EXPECT_EQ(out[0].revision, 2u);
  EXPECT_THROW(parse_blind_judgments(
                   R"({"format":"blind-judgments","judgments":[{"annotator_id":"a",)"
                   R"("item_id":"S1a","blind_label":"A","verdict":"maybe"}]})"),
               Error);
}

}  // namespace
}  // namespace chalset
