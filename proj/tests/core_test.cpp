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

#include "chalset/core.hpp"

#include <map>
#include <string>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "chalset/error.hpp"
#include "chalset/fixture.hpp"
#include "chalset/tokenize.hpp"
#include "chalset/utf8.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace chalset {
namespace {

using ::testing::HasSubstr;
using Json = nlohmann::ordered_json;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected chalset::Error";
  return ErrorCode::kStorage;
}

TEST(EmbeddedSetTest, HasBundledShape) {
  const ChallengeSet& set = fixture::challenge_set();
  EXPECT_EQ(set.items.size(), 108u);
  EXPECT_EQ(set.subcategories().size(), 26u);
  std::map<DivergenceCategory, int> per_category;
  for (const auto& item : set.items) ++per_category[item.category];
  EXPECT_EQ(per_category[DivergenceCategory::kMorphoSyntactic], 29);
  EXPECT_EQ(per_category[DivergenceCategory::kLexicoSyntactic], 41);
  EXPECT_EQ(per_category[DivergenceCategory::kSyntactic], 38);
}

TEST(EmbeddedSetTest, EveryReferenceHasALocus) {
  for (const auto& item : fixture::challenge_set().items) {
    EXPECT_FALSE(item.reference_highlights.empty()) << item.id;
  }
}

TEST(EmbeddedSetTest, OnlyTheTwoItemIdiomGroupWarns) {
  const ValidationReport report = validate_challenge_set(fixture::challenge_set());
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_THAT(report.warnings[0].message, HasSubstr("Syntactically flexible idioms"));
}

TEST(EmbeddedSetTest, OutputsCoverEveryPair) {
  const auto parsed =
      parse_outputs(fixture::outputs_json(), fixture::challenge_set());
  EXPECT_EQ(parsed.outputs.outputs().size(), 324u);
  EXPECT_TRUE(parsed.warnings.empty());
  EXPECT_THAT(parsed.outputs.systems(),
              ::testing::ElementsAre("PBMT-1", "NMT", "Google"));
}

TEST(EmbeddedSetTest, SerializationRoundTrips) {
  const ChallengeSet& set = fixture::challenge_set();
  EXPECT_EQ(parse_challenge_set(serialize_challenge_set(set)), set);
  const SystemOutputSet& outputs = fixture::outputs();
  EXPECT_EQ(parse_outputs(serialize_outputs(outputs), set).outputs, outputs);
  const auto& verdicts = fixture::verdicts();
  EXPECT_EQ(parse_majority_verdicts(serialize_majority_verdicts(verdicts), set), verdicts);
}

TEST(ItemIdTest, Validity) {
  EXPECT_TRUE(is_valid_item_id("S1a"));
  EXPECT_TRUE(is_valid_item_id("S4d2"));
  EXPECT_TRUE(is_valid_item_id("S26c"));
  EXPECT_FALSE(is_valid_item_id("S1"));
  EXPECT_FALSE(is_valid_item_id("s1a"));
  EXPECT_FALSE(is_valid_item_id("S1A"));
  EXPECT_FALSE(is_valid_item_id("S1a23"));
  EXPECT_FALSE(is_valid_item_id(""));
}

TEST(ItemIdTest, NaturalOrdering) {
  EXPECT_TRUE(compare_item_ids("S2a", "S10a") < 0);
  EXPECT_TRUE(compare_item_ids("S4d", "S4d2") < 0);
  EXPECT_TRUE(compare_item_ids("S4d2", "S4e") < 0);
  EXPECT_TRUE(compare_item_ids("S10a", "S9z") > 0);
  EXPECT_TRUE(compare_item_ids("S7b", "S7b") == 0);
}

TEST(ValidateTest, EmptySet) {
  ChallengeSet set;
  const ValidationReport report = validate_challenge_set(set);
  ASSERT_EQ(report.errors.size(), 1u);
  EXPECT_EQ(report.errors[0].code, ErrorCode::kEmptySet);
  EXPECT_EQ(report.errors[0].message, "empty challenge set");
}

TEST(ValidateTest, MissingLocusNamesItem) {
  ChallengeSet set = testing::ToySet();
  set.items[4].reference_highlights.clear();
  const ValidationReport report = validate_challenge_set(set);
  ASSERT_EQ(report.errors.size(), 1u);
  EXPECT_EQ(report.errors[0].code, ErrorCode::kMissingLocus);
  EXPECT_EQ(report.errors[0].item_id, "S2b");
  EXPECT_EQ(report.errors[0].message, "missing divergence locus");
}

TEST(ValidateTest, SpanBounds) {
  ChallengeSet set = testing::ToySet();
  set.items[0].source_highlights = {{8, 16}};  // source has 15 code points
  set.items[1].reference_highlights = {{3, 3}};
  set.items[2].reference_highlights = {{0, 4}, {2, 6}};
  const ValidationReport report = validate_challenge_set(set);
  ASSERT_EQ(report.errors.size(), 3u);
  for (const auto& f : report.errors) EXPECT_EQ(f.code, ErrorCode::kBadSpan);
  EXPECT_EQ(report.errors[0].field, "items[0].source_highlights[0]");
}

TEST(ValidateTest, OffsetsCountCodePoints) {
  ChallengeSet set = testing::ToySet(1, 3);
  set.items[0].reference = "L'élève dort.";  // 13 code points, 15 bytes
  set.items[0].reference_highlights = {{2, 7}};
  EXPECT_TRUE(validate_challenge_set(set).ok());
  EXPECT_EQ(apply_highlights(set.items[0].reference, set.items[0].reference_highlights),
            "L'**élève** dort.");
  set.items[0].reference_highlights = {{8, 14}};
  EXPECT_FALSE(validate_challenge_set(set).ok());
}

TEST(ValidateTest, DuplicateAndMalformedIds) {
  ChallengeSet set = testing::ToySet();
  set.items[1].id = "S1a";
  set.items[2].id = "item3";
  const ValidationReport report = validate_challenge_set(set);
  ASSERT_EQ(report.errors.size(), 2u);
  EXPECT_EQ(report.errors[0].code, ErrorCode::kDuplicateId);
  EXPECT_EQ(report.errors[1].code, ErrorCode::kInvalidId);
}

TEST(ValidateTest, InconsistentCategory) {
  ChallengeSet set = testing::ToySet();
  set.items[1].category = DivergenceCategory::kSyntactic;
  const ValidationReport report = validate_challenge_set(set);
  ASSERT_EQ(report.errors.size(), 1u);
  EXPECT_EQ(report.errors[0].code, ErrorCode::kInconsistentCategory);
}

TEST(ValidateTest, InvalidUtf8) {
  ChallengeSet set = testing::ToySet();
  set.items[0].source = "bad \xC3 byte";
  set.items[0].source_highlights.clear();
  const ValidationReport report = validate_challenge_set(set);
  ASSERT_EQ(report.errors.size(), 1u);
  EXPECT_EQ(report.errors[0].field, "items[0].source");
}

TEST(ValidateTest, WarningsDoNotFail) {
  ChallengeSet set = testing::ToySet(2, 2);
  set.items[0].source = "one two three four five six seven eight nine ten eleven twelve "
                        "thirteen fourteen fifteen sixteen";
  const ValidationReport report = validate_challenge_set(set);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.warnings.size(), 3u);  // long source + two small groups
}

TEST(ValidateTest, Pure) {
  ChallengeSet set = testing::ToySet();
  set.items[3].reference_highlights.clear();
  const ValidationReport a = validate_challenge_set(set);
  const ValidationReport b = validate_challenge_set(set);
  ASSERT_EQ(a.errors.size(), b.errors.size());
  for (std::size_t i = 0; i < a.errors.size(); ++i) {
    EXPECT_EQ(a.errors[i].message, b.errors[i].message);
    EXPECT_EQ(a.errors[i].field, b.errors[i].field);
  }
}

TEST(ParseTest, ErrorsNameItemAndField) {
  Json doc = Json::parse(serialize_challenge_set(testing::ToySet()));
  doc["items"][2].erase("reference");
  try {
    parse_challenge_set(doc.dump());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingField);
    EXPECT_EQ(e.detail(), "S1c: items[2].reference");
  }
}

TEST(ParseTest, RejectsSemanticViolations) {
  Json doc = Json::parse(serialize_challenge_set(testing::ToySet()));
  doc["items"][5]["reference_highlights"] = Json::array();
  EXPECT_EQ(CodeOf([&] { parse_challenge_set(doc.dump()); }), ErrorCode::kMissingLocus);

  EXPECT_EQ(CodeOf([] { parse_challenge_set("{not json"); }), ErrorCode::kMalformed);
  Json wrong = Json::parse(serialize_challenge_set(testing::ToySet()));
  wrong["format"] = "system-outputs";
  EXPECT_EQ(CodeOf([&] { parse_challenge_set(wrong.dump()); }), ErrorCode::kMalformed);
  Json bad_category = Json::parse(serialize_challenge_set(testing::ToySet()));
  bad_category["items"][0]["category"] = "semantic";
  EXPECT_EQ(CodeOf([&] { parse_challenge_set(bad_category.dump()); }),
            ErrorCode::kInvalidValue);
}

TEST(OutputsTest, UnknownItemAndDuplicates) {
  const ChallengeSet set = testing::ToySet();
  Json doc = Json::parse(serialize_outputs(testing::ToyOutputs(set, {"X"})));
  Json unknown = doc;
  unknown["outputs"][0]["item_id"] = "S9z";
  EXPECT_EQ(CodeOf([&] { parse_outputs(unknown.dump(), set); }), ErrorCode::kUnknownItem);
  Json dup = doc;
  dup["outputs"].push_back(dup["outputs"][0]);
  EXPECT_EQ(CodeOf([&] { parse_outputs(dup.dump(), set); }), ErrorCode::kDuplicateOutput);
}

TEST(OutputsTest, MissingPairsAreWarningsThenErrors) {
  const ChallengeSet set = testing::ToySet();
  Json doc = Json::parse(serialize_outputs(testing::ToyOutputs(set, {"X", "Y"})));
  doc["outputs"].erase(doc["outputs"].size() - 1);  // (Y, S2c)
  const ParsedOutputs parsed = parse_outputs(doc.dump(), set);
  ASSERT_EQ(parsed.warnings.size(), 1u);
  EXPECT_THAT(parsed.warnings[0], HasSubstr("(Y, S2c)"));
  try {
    parsed.outputs.require_complete(set);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteMatrix);
    EXPECT_EQ(e.detail(), "(Y, S2c)");
  }
}

TEST(RenderTest, ListingMarksVerdicts) {
  const std::string text = render_formatted(fixture::challenge_set(), &fixture::outputs(),
                                            &fixture::verdicts());
  EXPECT_THAT(text, HasSubstr("## Morpho-syntactic"));
  EXPECT_THAT(text, HasSubstr("### Agreement across distractors"));
  EXPECT_THAT(text, HasSubstr("**S1a**"));
  EXPECT_THAT(text, HasSubstr("✓"));
  EXPECT_THAT(text, HasSubstr("✗"));
}

TEST(RenderTest, WithoutOutputsHasNoMarks) {
  const std::string text = render_formatted(testing::ToySet());
  EXPECT_THAT(text, HasSubstr("- Ref: Le chat **dort**."));
  EXPECT_THAT(text, ::testing::Not(HasSubstr("✓")));
}

TEST(TokenizeTest, LowercasesAndStripsPunctuation) {
  EXPECT_THAT(tokenize("The cat. The dog."),
              ::testing::ElementsAre("the", "cat", "the", "dog"));
  EXPECT_THAT(tokenize("  «Don't» — stop!  "),
              ::testing::ElementsAre("don't", "stop"));
  EXPECT_THAT(tokenize("Élan vital"), ::testing::ElementsAre("élan", "vital"));
  EXPECT_TRUE(tokenize("... !!").empty());
}

TEST(Utf8Test, LengthAndSlice) {
  EXPECT_EQ(utf8::length("élève"), 5u);
  EXPECT_FALSE(utf8::length("\xFF"));
  EXPECT_EQ(utf8::slice("élève", 1, 4), "lèv");
  EXPECT_EQ(utf8::decode_lossy("a\xFF"), std::u32string(U"a�"));
  EXPECT_EQ(utf8::encode(U"été"), "été");
}

}  // namespace
}  // namespace chalset
