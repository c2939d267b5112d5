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

#include "stress/corruption.h"

#include <gtest/gtest.h>

#include <cmath>

#include "stress/dcp_json.h"
#include "stress/error.h"
#include "stress/rng.h"
#include "stress/synthetic.h"
#include "stress/tpe.h"
#include "testing.h"

namespace stress {
namespace {

using testing::MakeSchema;

Schema LoanSchema() {
  return MakeSchema({{"D", AttributeKind::kCategorical},
                     {"Age", AttributeKind::kNumeric},
                     {"R", AttributeKind::kNumeric},
                     {"Y", AttributeKind::kCategorical}},
                    "Y", "accept");
}

// Ten rows; D=minority and Y=reject hold together on rows 2 and 5.
Dataset LoanData() {
  return ParseCsv(
      "D,Age,R,Y\n"
      "majority,35,1,accept\n"
      "minority,20,0,accept\n"
      "minority,35,0,reject\n"
      "majority,50,1,reject\n"
      "majority,?,1,accept\n"
      "minority,45,0,reject\n"
      "majority,31,1,accept\n"
      "minority,,1,accept\n"
      "majority,38,0,reject\n"
      "majority,60,1,accept\n",
      LoanSchema());
}

Pattern Gate(std::string d, std::string y) {
  return {{{"D", std::nullopt, std::nullopt, std::move(d)}, {"Y", std::nullopt, std::nullopt, std::move(y)}}};
}

TEST(PatternMatches, RangeConditionHolds) {
  const Schema schema = MakeSchema({{"Age", AttributeKind::kNumeric}, {"Y", AttributeKind::kCategorical}},
                                   "Y", "1");
  const Dataset d = ParseCsv("Age,Y\n35,1\n20,1\n", schema);
  const Pattern p{{{"Age", 30.0, 40.0, std::nullopt}, {"Y", std::nullopt, std::nullopt, "1"}}};
  EXPECT_TRUE(PatternMatches(p, d, 0));
  EXPECT_FALSE(PatternMatches(p, d, 1));
}

TEST(PatternMatches, MissingNeverSatisfiesACondition) {
  const Dataset d = LoanData();
  const Pattern open{{{"Age", std::nullopt, std::nullopt, std::nullopt}}};
  EXPECT_FALSE(PatternMatches(open, d, 4));
  EXPECT_FALSE(PatternMatches(open, d, 7));
  EXPECT_TRUE(PatternMatches(open, d, 0));
}

TEST(PatternMatches, UnknownAttributeIsAnError) {
  const Pattern p{{{"nope", 1.0, 2.0, std::nullopt}}};
  EXPECT_THROW(PatternMatches(p, LoanData(), 0), StressError);
}

TEST(PatternMatches, MinorityRejectGateSelectsExactlyThoseRows) {
  const Dataset d = LoanData();
  const auto mask = MatchMask(Gate("minority", "reject"), d);
  for (size_t r = 0; r < d.rows(); ++r) {
    const bool expected = d.Render(r, 0) == "minority" && d.Render(r, 3) == "reject";
    EXPECT_EQ(mask[r] == 1, expected) << r;
    EXPECT_EQ(PatternMatches(Gate("minority", "reject"), d, r), expected);
  }
}

TEST(MatchMask, AgreesWithRowwiseEvaluation) {
  const Dataset d = AdultLike(500, 3);
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const double lo = rng.Uniform(17, 70);
    const Pattern p{{{"age", lo, lo + rng.Uniform(0, 30), std::nullopt},
                     {"marital", std::nullopt, std::nullopt, t % 2 ? "Married" : "Divorced"}}};
    const auto mask = MatchMask(p, d);
    for (size_t r = 0; r < d.rows(); ++r) EXPECT_EQ(mask[r] == 1, PatternMatches(p, d, r));
  }
}

TEST(Instantiate, RepaymentMissingForMinorityRejects) {
  const Dataset d = LoanData();
  const CorruptionTemplate tmpl = MakeTemplate(d, ErrorType::MissingValue("R"), {"Y", "D"});
  ASSERT_EQ(tmpl.pattern_attributes, (std::vector<std::string>{"D", "Y"}));
  // Vocabulary order follows first appearance: D {majority, minority}, Y {accept, reject}.
  const Dcp dcp = Instantiate(tmpl, Theta{0.95, 1.0, 1.0});
  EXPECT_EQ(dcp.p, 0.95);
  EXPECT_EQ(dcp.pattern, Gate("minority", "reject"));
  EXPECT_EQ(dcp.error.target, "R");
}

TEST(Instantiate, NumericBoundsAreLowerPlusWidth) {
  const Dataset d = LoanData();
  const CorruptionTemplate tmpl = MakeTemplate(d, ErrorType::MissingValue("R"), {"Age"});
  ASSERT_EQ(tmpl.space.size(), 3u);
  EXPECT_EQ(tmpl.space.dims[1].lower, 20.0);
  EXPECT_EQ(tmpl.space.dims[1].upper, 60.0);
  EXPECT_EQ(tmpl.space.dims[2].upper, 40.0);
  const Dcp dcp = Instantiate(tmpl, Theta{0.5, 30.0, 10.0});
  ASSERT_EQ(dcp.pattern.conditions.size(), 1u);
  EXPECT_EQ(*dcp.pattern.conditions[0].lower, 30.0);
  EXPECT_EQ(*dcp.pattern.conditions[0].upper, 40.0);
}

TEST(Instantiate, OutOfSpaceThetaIsRejected) {
  const Dataset d = LoanData();
  const CorruptionTemplate tmpl = MakeTemplate(d, ErrorType::MissingValue("R"), {"Age"});
  for (const Theta& bad : {Theta{1.5, 30, 1}, Theta{0.5, 30, -1}, Theta{0.5, 10, 1}, Theta{0.5, 30}}) {
    try {
      Instantiate(tmpl, bad);
      FAIL();
    } catch (const StressError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kOutOfSpace);
    }
  }
}

TEST(Apply, ZeroProbabilityIsTheIdentity) {
  const Dataset d = AdultLike(300, 1);
  for (ErrorType type : {ErrorType::MissingValue("age"), LabelErrorFor(d), ErrorType::SelectionBias()}) {
    const CorruptionTemplate tmpl = MakeTemplate(d, type, {"marital", "income"});
    Dcp dcp = Instantiate(tmpl, Theta{0.0, 0.0, 1.0});
    const CorruptedDataset out = Apply(dcp, d, 5);
    EXPECT_TRUE(out.dataset.SameCells(d));
    EXPECT_EQ(out.kept_indices.size(), d.rows());
    EXPECT_TRUE(out.corrupted_cells.empty());
  }
}

TEST(Apply, FullProbabilityMissingValueHitsExactlyTheMatches) {
  const Dataset d = LoanData();
  Dcp dcp{ErrorType::MissingValue("R"), Gate("minority", "reject"), 1.0, {}};
  const CorruptedDataset out = Apply(dcp, d, 99);
  std::vector<CellRef> expected;
  for (size_t r = 0; r < d.rows(); ++r) {
    if (d.Render(r, 0) == "minority" && d.Render(r, 3) == "reject") expected.push_back({r, 2});
  }
  ASSERT_EQ(expected, (std::vector<CellRef>{{2, 2}, {5, 2}}));
  EXPECT_EQ(out.corrupted_cells, expected);
  for (size_t r = 0; r < d.rows(); ++r) {
    EXPECT_EQ(out.dataset.IsMissing(r, 2), r == 2 || r == 5);
  }
}

TEST(Apply, SelectionDropsUnpatrolledRowsOnly) {
  // Z = neighbourhood, X = race: stops recorded only where police patrolled.
  const Schema schema = MakeSchema({{"Z", AttributeKind::kCategorical},
                                    {"X", AttributeKind::kCategorical},
                                    {"Y", AttributeKind::kCategorical}},
                                   "Y", "1");
  const Dataset d = ParseCsv(
      "Z,X,Y\nnorth,a,1\nsouth,b,0\nnorth,b,1\nsouth,b,1\nnorth,a,0\nsouth,a,1\nsouth,b,0\n", schema);
  const Dcp dcp{ErrorType::SelectionBias(),
                Pattern{{{"Z", std::nullopt, std::nullopt, "south"}, {"X", std::nullopt, std::nullopt, "b"}}},
                1.0,
                {}};
  const CorruptedDataset out = Apply(dcp, d, 1);
  EXPECT_EQ(out.kept_indices, (std::vector<size_t>{0, 2, 4, 5}));
  EXPECT_EQ(out.dropped_rows, 3u);
  EXPECT_TRUE(out.dataset.SameCells(d.SelectRows(out.kept_indices)));
}

TEST(Apply, BinaryLabelErrorFlips) {
  const Dataset d = LoanData();
  const Dcp dcp{LabelErrorFor(d), Gate("minority", "reject"), 1.0, {}};
  const CorruptedDataset out = Apply(dcp, d, 3);
  for (size_t r = 0; r < d.rows(); ++r) {
    const bool hit = r == 2 || r == 5;
    EXPECT_EQ(out.dataset.Render(r, 3), hit ? "accept" : d.Render(r, 3));
  }
}

TEST(Apply, IsDeterministicAndSeedDependent) {
  const Dataset d = AdultLike(2000, 2);
  const CorruptionTemplate tmpl = MakeTemplate(d, ErrorType::MissingValue("hours"), {"age"});
  const Dcp dcp = Instantiate(tmpl, Theta{0.5, tmpl.space.dims[1].lower, tmpl.space.dims[2].upper});
  const CorruptedDataset a = Apply(dcp, d, 42);
  const CorruptedDataset b = Apply(dcp, d, 42);
  const CorruptedDataset c = Apply(dcp, d, 43);
  EXPECT_EQ(a.corrupted_cells, b.corrupted_cells);
  EXPECT_TRUE(a.dataset.SameCells(b.dataset));
  EXPECT_NE(a.corrupted_cells, c.corrupted_cells);
}

TEST(Apply, NonMatchingRowsAreUntouched) {
  const Dataset d = AdultLike(1000, 4);
  Rng rng(12);
  for (int t = 0; t < 40; ++t) {
    const ErrorType type = t % 3 == 0 ? ErrorType::MissingValue("education_num")
                                      : (t % 3 == 1 ? LabelErrorFor(d) : ErrorType::MissingValue("race"));
    const CorruptionTemplate tmpl = MakeTemplate(d, type, {"age", "sex"});
    const Dcp dcp = Instantiate(tmpl, SampleUniform(tmpl.space, rng));
    const CorruptedDataset out = Apply(dcp, d, static_cast<uint64_t>(t));
    const auto mask = MatchMask(dcp.pattern, d);
    for (size_t r = 0; r < d.rows(); ++r) {
      if (mask[r]) continue;
      for (size_t c = 0; c < d.cols(); ++c) ASSERT_EQ(out.dataset.Render(r, c), d.Render(r, c));
    }
  }
}

TEST(ExpectedFraction, MatchesBruteForceCount) {
  const Dataset d = LoanData();
  const Pattern p{{{"R", 1.0, 1.0, std::nullopt}, {"Age", 30.0, 100.0, std::nullopt}}};
  size_t count = 0;
  for (size_t r = 0; r < d.rows(); ++r) count += PatternMatches(p, d, r) ? 1 : 0;
  ASSERT_EQ(count, 4u);  // rows 0, 3, 6, 9
  const Dcp dcp{ErrorType::MissingValue("D"), p, 0.5, {}};
  EXPECT_DOUBLE_EQ(ExpectedFraction(dcp, d), 0.2);
  EXPECT_EQ(ExpectedFraction(Dcp{dcp.error, p, 0.0, {}}, d), 0.0);
  const Pattern none{{{"Age", 1000.0, 2000.0, std::nullopt}}};
  EXPECT_EQ(ExpectedFraction(Dcp{dcp.error, none, 1.0, {}}, d), 0.0);
}

TEST(ProjectToBudget, FollowsTheScalingRule) {
  const Dataset d = LoanData();
  const Pattern p{{{"R", 1.0, 1.0, std::nullopt}, {"Age", 30.0, 100.0, std::nullopt}}};  // 4 of 10
  const Dcp half{ErrorType::MissingValue("D"), p, 0.5, {}};
  EXPECT_EQ(ProjectToBudget(half, d, 0.3), half);
  const Dcp full{ErrorType::MissingValue("D"), p, 1.0, {}};
  EXPECT_DOUBLE_EQ(ProjectToBudget(full, d, 0.2).p, 0.5);
  EXPECT_LE(ExpectedFraction(ProjectToBudget(full, d, 0.2), d), 0.2);
  EXPECT_EQ(ProjectToBudget(full, d, 0.5).p, 1.0);
  EXPECT_EQ(ProjectToBudget(full, d, 0.0).p, 0.0);
  EXPECT_THROW(ProjectToBudget(full, d, 1.5), StressError);
}

TEST(ProjectToBudget, EmpiricalFractionStaysNearTheBudget) {
  const Dataset d = AdultLike(2000, 6);
  Rng rng(21);
  const double budget = 0.1;
  const double n = static_cast<double>(d.rows());
  for (int t = 0; t < 10; ++t) {
    const CorruptionTemplate tmpl = MakeTemplate(d, ErrorType::MissingValue("hours"), {"age", "marital"});
    const Dcp dcp = ProjectToBudget(Instantiate(tmpl, SampleUniform(tmpl.space, rng)), d, budget);
    const double expected = ExpectedFraction(dcp, d);
    ASSERT_LE(expected, budget);
    double mean = 0.0;
    for (uint64_t s = 0; s < 200; ++s) mean += static_cast<double>(Apply(dcp, d, s).CorruptedRowCount()) / n;
    mean /= 200.0;
    EXPECT_LE(mean, budget + 3.0 * std::sqrt(budget * (1 - budget) / n));
  }
}

TEST(Apply, MultiClassProportionsAreRespected) {
  const Schema schema = MakeSchema({{"x", AttributeKind::kNumeric}, {"y", AttributeKind::kCategorical}}, "y", "a");
  std::string csv = "x,y\n";
  for (int r = 0; r < 6000; ++r) csv += std::to_string(r % 10) + "," + (r % 3 == 0 ? "a" : (r % 3 == 1 ? "b" : "c")) + "\n";
  const Dataset d = ParseCsv(csv, schema);
  const ErrorType type = LabelErrorFor(d);
  ASSERT_TRUE(type.multiclass());
  const CorruptionTemplate tmpl = MakeTemplate(d, type, {"x"});
  const Dcp dcp = Instantiate(tmpl, Theta{1.0, 0.0, 9.0, 0.2, 0.3, 0.5});
  ASSERT_EQ(dcp.proportions.size(), 3u);
  const CorruptedDataset out = Apply(dcp, d, 77);
  double counts[3] = {0, 0, 0};
  for (size_t r = 0; r < d.rows(); ++r) counts[out.dataset.column(1).codes[r]] += 1;
  const double n = static_cast<double>(d.rows());
  for (int k = 0; k < 3; ++k) {
    const double q = dcp.proportions[static_cast<size_t>(k)];
    EXPECT_NEAR(counts[k] / n, q, 3.0 * std::sqrt(q * (1 - q) / n)) << k;
  }
}

TEST(ApplyProcess, ChildPatternsReadCleanParentValues) {
  // Stage 1 hides X where Z = z1; stage 2 hides W where X in [0, 5]. No edge
  // runs from the corrupted X to W, so stage 2 must decide on clean X.
  const Schema schema = MakeSchema({{"Z", AttributeKind::kCategorical},
                                    {"X", AttributeKind::kNumeric},
                                    {"W", AttributeKind::kNumeric},
                                    {"y", AttributeKind::kCategorical}},
                                   "y", "1");
  std::string csv = "Z,X,W,y\n";
  for (int r = 0; r < 400; ++r) {
    csv += std::string(r % 2 ? "z1" : "z0") + "," + std::to_string(r % 10) + "," + std::to_string(r) + ",1\n";
  }
  const Dataset d = ParseCsv(csv, schema);
  const std::vector<Dcp> stages = {
      {ErrorType::MissingValue("X"), Pattern{{{"Z", std::nullopt, std::nullopt, "z1"}}}, 1.0, {}},
      {ErrorType::MissingValue("W"), Pattern{{{"X", 0.0, 5.0, std::nullopt}}}, 0.6, {}}};
  const uint64_t seed = 5;
  const CorruptedDataset out = ApplyProcess(stages, d, seed);
  for (size_t r = 0; r < d.rows(); ++r) {
    const double x = d.column(1).numbers[r];
    const bool expected = x <= 5.0 && CounterUniform(seed, r, 2) < 0.6;
    EXPECT_EQ(out.dataset.IsMissing(r, 2), expected) << r;
    EXPECT_EQ(out.dataset.IsMissing(r, 1), r % 2 == 1);
  }
}

TEST(ApplyProcess, ExcludedRowsCarryNoAttributeCorruption) {
  const Dataset d = LoanData();
  const std::vector<Dcp> stages = {
      {ErrorType::SelectionBias(), Gate("minority", "reject"), 1.0, {}},
      {ErrorType::MissingValue("R"), Pattern{{{"D", std::nullopt, std::nullopt, "minority"}}}, 1.0, {}}};
  const CorruptedDataset out = ApplyProcess(stages, d, 1);
  EXPECT_EQ(out.dropped_rows, 2u);
  for (const CellRef& cell : out.corrupted_cells) {
    EXPECT_NE(cell.row, 2u);
    EXPECT_NE(cell.row, 5u);
  }
  EXPECT_EQ(out.corrupted_cells, (std::vector<CellRef>{{1, 2}, {7, 2}}));
}

TEST(DcpJson, RoundTripsBitExactly) {
  const Dataset d = AdultLike(200, 8);
  Rng rng(4);
  const CorruptionTemplate tmpl = MakeTemplate(d, ErrorType::MissingValue("age"), {"hours", "race", "income"});
  for (int t = 0; t < 20; ++t) {
    const Dcp dcp = Instantiate(tmpl, SampleUniform(tmpl.space, rng));
    const Dcp back = DcpFromJson(nlohmann::json::parse(DcpToJson(dcp).dump()));
    EXPECT_EQ(back, dcp);
  }
  testing::ScratchDir dir;
  const Dcp dcp = Instantiate(tmpl, SampleUniform(tmpl.space, rng));
  SaveDcp(dcp, dir.path() / "d.json");
  EXPECT_EQ(LoadDcp(dir.path() / "d.json"), dcp);
}

TEST(CheckCompatible, RejectsForeignProcesses) {
  const Dataset d = LoanData();
  EXPECT_NO_THROW(CheckCompatible(Dcp{ErrorType::MissingValue("R"), Gate("minority", "reject"), 0.5, {}},
                                  d.schema()));
  EXPECT_THROW(CheckCompatible(Dcp{ErrorType::MissingValue("Q"), Gate("minority", "reject"), 0.5, {}},
                               d.schema()),
               StressError);
  EXPECT_THROW(CheckCompatible(Dcp{ErrorType::MissingValue("R"),
                                   Pattern{{{"Age", 5.0, 1.0, std::nullopt}}}, 0.5, {}},
                               d.schema()),
               StressError);
  EXPECT_THROW(CheckCompatible(Dcp{ErrorType::MissingValue("R"),
                                   Pattern{{{"D", 5.0, 1.0, std::nullopt}}}, 0.5, {}},
                               d.schema()),
               StressError);
}

}  // namespace
}  // namespace stress
