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

#include "stress/tpe.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "stress/error.h"
#include "stress/rng.h"
#include "stress/synthetic.h"
#include "testing.h"

namespace stress {
namespace {

// Every row matches the single-valued pattern, so p is the only free knob.
Dataset OneKnobData() {
  const Schema schema = testing::MakeSchema(
      {{"k", AttributeKind::kCategorical}, {"x", AttributeKind::kNumeric}, {"y", AttributeKind::kCategorical}},
      "y", "1");
  std::string csv = "k,x,y\n";
  for (int r = 0; r < 50; ++r) csv += "u," + std::to_string(r) + "," + std::to_string(r % 2) + "\n";
  return ParseCsv(csv, schema);
}

CorruptionTemplate OneKnob(const Dataset& data) {
  return MakeTemplate(data, ErrorType::MissingValue("x"), {"k"});
}

Trial At(double p, double psi) {
  Trial t;
  t.theta = {p, 0.0};
  t.psi = psi;
  return t;
}

TEST(SampleUniform, StaysInsideTheBox) {
  const Dataset data = AdultLike(300, 1);
  const CorruptionTemplate tmpl = MakeTemplate(data, LabelErrorFor(data), {"age", "race", "income"});
  Rng rng(3);
  for (int i = 0; i < 500; ++i) ASSERT_TRUE(tmpl.space.Contains(SampleUniform(tmpl.space, rng)));
}

TEST(TpeSuggest, EmptyHistoryIsUniform) {
  const Dataset data = OneKnobData();
  const CorruptionTemplate tmpl = OneKnob(data);
  Rng a(9), b(9);
  const TpeOptions options;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(TpeSuggest({}, tmpl.space, options, a), SampleUniform(tmpl.space, b));
  EXPECT_FALSE(TpeLogRatio({}, tmpl.space, options, std::vector<double>{0.5, 0.0}).has_value());
}

TEST(TpeSuggest, SuggestionsStayInsideTheBox) {
  const Dataset data = AdultLike(300, 2);
  const CorruptionTemplate tmpl = MakeTemplate(data, ErrorType::MissingValue("hours"), {"age", "sex", "income"});
  Rng rng(4);
  std::vector<Trial> history;
  for (int i = 0; i < 40; ++i) {
    Trial t;
    t.theta = SampleUniform(tmpl.space, rng);
    t.psi = rng.Uniform01();
    t.failed = i % 9 == 0;
    if (t.failed) t.psi = std::numeric_limits<double>::infinity();
    history.push_back(t);
  }
  const TpeOptions options;
  for (int i = 0; i < 200; ++i) ASSERT_TRUE(tmpl.space.Contains(TpeSuggest(history, tmpl.space, options, rng)));
}

TEST(TpeSuggest, ConcentratesOnThePromisingRegion) {
  const Dataset data = OneKnobData();
  const CorruptionTemplate tmpl = OneKnob(data);
  Rng rng(5);
  std::vector<Trial> history;
  for (int i = 0; i < 10; ++i) history.push_back(At(rng.Uniform(0.85, 0.95), 0.1 * rng.Uniform01()));
  for (int i = 0; i < 30; ++i) history.push_back(At(rng.Uniform(0.0, 0.75), 1.0 + rng.Uniform01()));
  const TpeOptions options;
  int inside = 0;
  for (int i = 0; i < 100; ++i) {
    const double p = TpeSuggest(history, tmpl.space, options, rng)[0];
    inside += p >= 0.8 && p <= 1.0 ? 1 : 0;
  }
  EXPECT_GE(inside, 70);
  const auto near = TpeLogRatio(history, tmpl.space, options, std::vector<double>{0.9, 0.0});
  const auto far = TpeLogRatio(history, tmpl.space, options, std::vector<double>{0.3, 0.0});
  ASSERT_TRUE(near && far);
  EXPECT_GT(*near, 0.0);
  EXPECT_LT(*far, 0.0);
}

TEST(TpeRun, ConstantEvaluatorReturnsAFeasibleProcess) {
  const Dataset data = AdultLike(500, 1);
  const CorruptionTemplate tmpl = MakeTemplate(data, ErrorType::MissingValue("age"), {"age", "income"});
  TpeOptions options;
  options.iterations = 15;
  const TpeResult result = TpeRun(tmpl, data, 0.05, [](const Dcp&, uint32_t) { return 0.25; }, options, 1);
  EXPECT_EQ(result.best.psi, 0.25);
  EXPECT_LE(ExpectedFraction(result.best.dcp, data), 0.05);
  EXPECT_EQ(result.trials.size(), 15u);
}

TEST(TpeRun, FindsTheMinimumOfAOneDimensionalObjective) {
  const Dataset data = OneKnobData();
  const CorruptionTemplate tmpl = OneKnob(data);
  TpeOptions options;
  options.iterations = 50;
  // Grid oracle: the minimum of |p - 0.7| over [0, 1] sits at 0.7.
  double grid_best = 0.0, grid_psi = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    if (std::fabs(p - 0.7) < grid_psi) grid_psi = std::fabs(p - 0.7), grid_best = p;
  }
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const TpeResult result =
        TpeRun(tmpl, data, 1.0, [](const Dcp& d, uint32_t) { return std::fabs(d.p - 0.7); }, options, seed);
    EXPECT_NEAR(result.best.dcp.p, grid_best, 0.1) << seed;
  }
}

TEST(TpeRun, AllInitTrialsIsRandomSearch) {
  const Dataset data = OneKnobData();
  const CorruptionTemplate tmpl = OneKnob(data);
  TpeOptions options;
  options.iterations = 12;
  options.n_init = 12;
  const TpeResult result =
      TpeRun(tmpl, data, 1.0, [](const Dcp& d, uint32_t) { return std::sin(7 * d.p); }, options, 77);
  Rng rng(77);
  double best = std::numeric_limits<double>::infinity();
  for (const Trial& t : result.trials) {
    EXPECT_EQ(t.theta, SampleUniform(tmpl.space, rng));
    best = std::min(best, t.psi);
  }
  EXPECT_EQ(result.best.psi, best);
}

TEST(TpeRun, FailedEvaluationsArePoisonedAndSkipped) {
  const Dataset data = OneKnobData();
  const CorruptionTemplate tmpl = OneKnob(data);
  TpeOptions options;
  options.iterations = 30;
  const TpeResult result = TpeRun(
      tmpl, data, 1.0,
      [](const Dcp& d, uint32_t) {
        if (d.p > 0.5) throw StressError(ErrorCode::kTraining, "boom");
        return -d.p;
      },
      options, 3);
  size_t failures = 0;
  for (const Trial& t : result.trials) {
    if (t.dcp.p > 0.5) {
      EXPECT_TRUE(t.failed);
      EXPECT_EQ(t.psi, std::numeric_limits<double>::infinity());
      ++failures;
    }
  }
  EXPECT_GT(failures, 0u);
  EXPECT_FALSE(result.best.failed);
  EXPECT_LE(result.best.dcp.p, 0.5);
}

TEST(TpeRun, AllFailuresYieldAFailedBest) {
  const Dataset data = OneKnobData();
  TpeOptions options;
  options.iterations = 5;
  options.n_init = 5;
  const TpeResult result = TpeRun(
      OneKnob(data), data, 1.0, [](const Dcp&, uint32_t) -> double { throw std::runtime_error("x"); }, options, 1);
  EXPECT_TRUE(result.best.failed);
  EXPECT_EQ(result.best.psi, std::numeric_limits<double>::infinity());
}

TEST(TpeRun, PriorCountsTowardColdStartAndInitialRunsFirst) {
  const Dataset data = OneKnobData();
  const CorruptionTemplate tmpl = OneKnob(data);
  Rng rng(6);
  std::vector<Trial> prior;
  for (int i = 0; i < 10; ++i) prior.push_back(At(rng.Uniform(0.85, 0.95), 0.0));
  for (int i = 0; i < 30; ++i) prior.push_back(At(rng.Uniform(0.0, 0.7), 1.0));
  TpeOptions options;
  options.iterations = 20;
  const std::vector<Theta> initial = {{0.123, 0.0}};
  const TpeResult result =
      TpeRun(tmpl, data, 1.0, [](const Dcp& d, uint32_t) { return -d.p; }, options, 2, prior, initial);
  EXPECT_EQ(result.trials.front().dcp.p, 0.123);
  int high = 0;
  for (size_t i = 1; i < result.trials.size(); ++i) high += result.trials[i].dcp.p >= 0.8 ? 1 : 0;
  EXPECT_GE(high, 14);
}

TEST(TpeRun, EveryTrialRespectsTheBudget) {
  const Dataset data = AdultLike(800, 3);
  const CorruptionTemplate tmpl = MakeTemplate(data, ErrorType::MissingValue("hours"), {"age", "income"});
  TpeOptions options;
  options.iterations = 40;
  const TpeResult result = TpeRun(
      tmpl, data, 0.07, [&](const Dcp& d, uint32_t) { return -ExpectedFraction(d, data); }, options, 4);
  for (const Trial& t : result.trials) {
    EXPECT_LE(ExpectedFraction(t.dcp, data), 0.07);
    EXPECT_EQ(t.theta[0], t.dcp.p);
  }
}

TEST(TpeRun, IsDeterministic) {
  const Dataset data = AdultLike(400, 3);
  const CorruptionTemplate tmpl = MakeTemplate(data, ErrorType::MissingValue("hours"), {"age", "race"});
  TpeOptions options;
  options.iterations = 25;
  auto eval = [&](const Dcp& d, uint32_t r) { return CounterUniform(7, CountMatches(d.pattern, data), r) - d.p; };
  const TpeResult a = TpeRun(tmpl, data, 0.2, eval, options, 11);
  const TpeResult b = TpeRun(tmpl, data, 0.2, eval, options, 11);
  ASSERT_EQ(a.trials.size(), b.trials.size());
  for (size_t i = 0; i < a.trials.size(); ++i) {
    EXPECT_EQ(a.trials[i].theta, b.trials[i].theta);
    EXPECT_EQ(a.trials[i].psi, b.trials[i].psi);
  }
}

TEST(TpeRun, RepeatsAverageTheNoiseDraws) {
  const Dataset data = OneKnobData();
  TpeOptions options;
  options.iterations = 3;
  options.n_init = 3;
  options.repeats = 4;
  const TpeResult result =
      TpeRun(OneKnob(data), data, 1.0, [](const Dcp&, uint32_t r) { return static_cast<double>(r); }, options, 1);
  EXPECT_EQ(result.best.psi, 1.5);
}

TEST(ThetaOf, InvertsInstantiate) {
  const Dataset data = AdultLike(300, 4);
  const CorruptionTemplate tmpl = MakeTemplate(data, ErrorType::MissingValue("age"), {"hours", "marital"});
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const Dcp dcp = Instantiate(tmpl, SampleUniform(tmpl.space, rng));
    EXPECT_EQ(Instantiate(tmpl, ThetaOf(tmpl, dcp)), dcp);
  }
}

TEST(TpeOptions, Validation) {
  TpeOptions bad;
  bad.n_init = 0;
  EXPECT_THROW(bad.Validate(), StressError);
  bad = {};
  bad.iterations = 5;
  bad.n_init = 6;
  EXPECT_THROW(bad.Validate(), StressError);
  bad = {};
  bad.gamma = 1.0;
  EXPECT_THROW(bad.Validate(), StressError);
  EXPECT_NO_THROW(TpeOptions{}.Validate());
}

}  // namespace
}  // namespace stress
