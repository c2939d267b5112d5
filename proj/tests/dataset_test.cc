/*
 * Copyright 2026 The Stress Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "stress/dataset.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "stress/error.h"
#include "stress/rng.h"
#include "testing.h"

namespace stress {
namespace {

using testing::MakeSchema;

Schema AgeWageSchema() {
  return MakeSchema({{"age", AttributeKind::kNumeric},
                     {"wage", AttributeKind::kNumeric},
                     {"label", AttributeKind::kCategorical}},
                    "label", "yes");
}

TEST(LoadCsv, ParsesFilledRows) {
  const Dataset d = ParseCsv("age,wage,label\n30,1.5,yes\n40,2,no\n50,-3e2,yes\n", AgeWageSchema());
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.column("wage").numbers[2], -300.0);
  for (size_t r = 0; r < 3; ++r) {
    for (size_t c = 0; c < 3; ++c) EXPECT_FALSE(d.IsMissing(r, c));
  }
}

TEST(LoadCsv, EmptyCellAndTokenAreMissing) {
  const Dataset d = ParseCsv("age,wage,label\n30,,yes\n?,2,\n", AgeWageSchema());
  EXPECT_TRUE(d.IsMissing(0, 1));
  EXPECT_TRUE(d.IsMissing(1, 0));
  EXPECT_TRUE(d.IsMissing(1, 2));
  EXPECT_FALSE(d.IsMissing(0, 0));
}

TEST(LoadCsv, CustomMissingToken) {
  CsvOptions options;
  options.missing_token = "NA";
  const Dataset d = ParseCsv("age,wage,label\nNA,1,yes\n", AgeWageSchema(), options);
  EXPECT_TRUE(d.IsMissing(0, 0));
}

TEST(LoadCsv, HeaderMismatchReportsLocation) {
  try {
    ParseCsv("age,income,label\n1,2,yes\n", AgeWageSchema());
    FAIL() << "expected a header error";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCsvHeaderMismatch);
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST(LoadCsv, BadNumberReportsLocation) {
  try {
    ParseCsv("age,wage,label\n1,2,yes\n3,abc,no\n", AgeWageSchema());
    FAIL() << "expected a number error";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCsvBadNumber);
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST(LoadCsv, NonFiniteNumbersAreRejected) {
  EXPECT_THROW(ParseCsv("age,wage,label\ninf,2,yes\n", AgeWageSchema()), CsvError);
  EXPECT_THROW(ParseCsv("age,wage,label\nnan,2,yes\n", AgeWageSchema()), CsvError);
}

TEST(LoadCsv, ArityMismatchReportsLocation) {
  try {
    ParseCsv("age,wage,label\n1,2\n", AgeWageSchema());
    FAIL() << "expected an arity error";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCsvArity);
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(LoadCsv, QuotedFieldsFollowRfc4180) {
  const Schema schema = MakeSchema({{"name", AttributeKind::kCategorical}, {"y", AttributeKind::kCategorical}},
                                   "y", "a");
  const Dataset d = ParseCsv("name,y\r\n\"Smith, \"\"J\"\"\",a\r\n\"multi\nline\",b\r\n", schema);
  ASSERT_EQ(d.rows(), 2u);
  EXPECT_EQ(d.Render(0, 0), "Smith, \"J\"");
  EXPECT_EQ(d.Render(1, 0), "multi\nline");
}

TEST(LoadCsv, MissingFileIsAnIoError) {
  try {
    LoadCsv("/nonexistent/file.csv", AgeWageSchema());
    FAIL();
  } catch (const StressError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(CsvRoundTrip, PreservesEveryCellIncludingMissing) {
  const Schema schema = MakeSchema({{"x", AttributeKind::kNumeric},
                                    {"c", AttributeKind::kCategorical},
                                    {"y", AttributeKind::kCategorical}},
                                   "y", "p");
  Rng rng(11);
  std::string csv = "x,c,y\n";
  for (int r = 0; r < 200; ++r) {
    const double x = rng.Normal(0, 1e3) / 7.0;
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    csv += (rng.Uniform01() < 0.1 ? std::string() : std::string(buffer)) + ",";
    csv += (rng.Uniform01() < 0.1 ? std::string() : (rng.Uniform01() < 0.5 ? "\"a,b\"" : "q")) + std::string(",");
    csv += rng.Uniform01() < 0.5 ? "p\n" : "n\n";
  }
  const Dataset original = ParseCsv(csv, schema);
  testing::ScratchDir dir;
  WriteCsv(original, dir.path() / "d.csv");
  const Dataset again = LoadCsv(dir.path() / "d.csv", schema);
  EXPECT_TRUE(original.SameCells(again));
  for (size_t r = 0; r < original.rows(); ++r) {
    if (!original.IsMissing(r, 0)) {
      EXPECT_EQ(original.column(0).numbers[r], again.column(0).numbers[r]);
    }
  }
}

TEST(SchemaJson, RoundTripsAndValidates) {
  const Schema schema = MakeSchema({{"a", AttributeKind::kNumeric}, {"s", AttributeKind::kCategorical},
                                    {"y", AttributeKind::kCategorical}},
                                   "y", "1", "s");
  EXPECT_EQ(Schema::FromJson(schema.ToJson()), schema);
  nlohmann::json dup = schema.ToJson();
  dup["attributes"][1]["name"] = "a";
  EXPECT_THROW(Schema::FromJson(dup), StressError);
  nlohmann::json dangling = schema.ToJson();
  dangling["label"] = "nope";
  EXPECT_THROW(Schema::FromJson(dangling), StressError);
}

TEST(SchemaTask, LabelKindMustFitTheTask) {
  const Schema numeric_label = MakeSchema({{"a", AttributeKind::kNumeric}, {"y", AttributeKind::kNumeric}}, "y");
  EXPECT_NO_THROW(numeric_label.ValidateFor(Task::kRegression));
  EXPECT_THROW(numeric_label.ValidateFor(Task::kClassification), StressError);
  const Schema categorical = MakeSchema({{"a", AttributeKind::kNumeric}, {"y", AttributeKind::kCategorical}},
                                        "y", "1");
  EXPECT_THROW(categorical.ValidateFor(Task::kRegression), StressError);
}

Dataset TenRows() {
  std::string csv = "age,wage,label\n";
  for (int i = 0; i < 10; ++i) csv += std::to_string(20 + i) + "," + std::to_string(i) + ",yes\n";
  return ParseCsv(csv, AgeWageSchema());
}

TEST(Split, SizesFollowTheFraction) {
  const SplitResult s = Split(TenRows(), 0.8, 7);
  EXPECT_EQ(s.train.rows(), 8u);
  EXPECT_EQ(s.test.rows(), 2u);
}

TEST(Split, IsDeterministic) {
  const SplitResult a = Split(TenRows(), 0.8, 7);
  const SplitResult b = Split(TenRows(), 0.8, 7);
  EXPECT_EQ(a.train_indices, b.train_indices);
  EXPECT_TRUE(a.train.SameCells(b.train));
  EXPECT_TRUE(a.test.SameCells(b.test));
}

TEST(Split, DifferentSeedsGiveDifferentPartitions) {
  const SplitResult a = Split(TenRows(), 0.8, 7);
  const SplitResult b = Split(TenRows(), 0.8, 8);
  EXPECT_NE(a.test_indices, b.test_indices);
}

TEST(Split, IsAPartitionOfTheSource) {
  const Dataset d = TenRows();
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const SplitResult s = Split(d, 0.3 + 0.01 * static_cast<double>(seed), seed);
    std::vector<size_t> all = s.train_indices;
    all.insert(all.end(), s.test_indices.begin(), s.test_indices.end());
    std::sort(all.begin(), all.end());
    std::vector<size_t> expected(d.rows());
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);
    for (size_t i = 0; i < s.train.rows(); ++i) {
      EXPECT_EQ(s.train.column(0).numbers[i], d.column(0).numbers[s.train_indices[i]]);
    }
  }
}

TEST(Split, RejectsBadArguments) {
  EXPECT_THROW(Split(TenRows(), 0.0, 1), StressError);
  EXPECT_THROW(Split(TenRows(), 1.0, 1), StressError);
  const Dataset one = ParseCsv("age,wage,label\n1,2,yes\n", AgeWageSchema());
  try {
    Split(one, 0.5, 1);
    FAIL();
  } catch (const StressError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDatasetTooSmall);
  }
}

TEST(BinaryLabels, MapsPositiveOtherAndMissing) {
  const Dataset d = ParseCsv("age,wage,label\n1,1,yes\n2,2,no\n3,3,\n", AgeWageSchema());
  EXPECT_EQ(BinaryLabels(d), (std::vector<int>{1, 0, -1}));
}

}  // namespace
}  // namespace stress
