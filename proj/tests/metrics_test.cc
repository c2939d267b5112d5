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

#include "stress/metrics.h"

#include <gtest/gtest.h>

#include <cmath>

#include "stress/error.h"
#include "stress/rng.h"
#include "testing.h"

namespace stress {
namespace {

TEST(Auc, TextbookExample) {
  const std::vector<double> scores = {0.1, 0.4, 0.35, 0.8};
  const std::vector<int> labels = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(Auc(scores, labels), 0.75);
}

TEST(Auc, TiesCountOneHalf) {
  const std::vector<double> scores = {0.5, 0.5, 0.5, 0.5};
  const std::vector<int> labels = {0, 1, 0, 1};
  EXPECT_DOUBLE_EQ(Auc(scores, labels), 0.5);
  const std::vector<double> partial = {0.2, 0.5, 0.5, 0.9};
  const std::vector<int> partial_labels = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(Auc(partial, partial_labels), 0.875);
}

TEST(Auc, SingleClassIsAnError) {
  const std::vector<double> scores = {0.1, 0.2};
  const std::vector<int> labels = {1, 1};
  try {
    Auc(scores, labels);
    FAIL();
  } catch (const StressError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMetric);
  }
}

TEST(Auc, MatchesPairCountingOnRandomInstances) {
  Rng rng(1);
  for (int t = 0; t < 300; ++t) {
    const size_t n = 2 + rng.UniformIndex(150);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) {
      // Coarse grid so ties are common.
      scores[i] = t % 2 ? std::floor(rng.Uniform01() * 8) / 8 : rng.Uniform01();
      labels[i] = static_cast<int>(rng.UniformIndex(2));
    }
    labels[0] = 0;
    labels[1] = 1;
    EXPECT_NEAR(Auc(scores, labels), testing::PairCountingAuc(scores, labels), 1e-12);
  }
}

TEST(Auc, ReversingScoresMirrorsTheValue) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> scores(60), negated(60);
    std::vector<int> labels(60);
    for (size_t i = 0; i < 60; ++i) {
      scores[i] = std::round(rng.Uniform01() * 20);
      negated[i] = -scores[i];
      labels[i] = static_cast<int>(i % 2);
    }
    EXPECT_NEAR(Auc(scores, labels) + Auc(negated, labels), 1.0, 1e-12);
  }
}

TEST(Auc, InvariantUnderMonotoneTransforms) {
  Rng rng(3);
  std::vector<double> scores(200), warped(200);
  std::vector<int> labels(200);
  for (size_t i = 0; i < 200; ++i) {
    scores[i] = rng.Normal(0, 1);
    warped[i] = std::exp(3 * scores[i]) + 7;
    labels[i] = rng.Uniform01() < 1 / (1 + std::exp(-scores[i])) ? 1 : 0;
  }
  EXPECT_DOUBLE_EQ(Auc(scores, labels), Auc(warped, labels));
  const double auc = Auc(scores, labels);
  EXPECT_GE(auc, 0.0);
  EXPECT_LE(auc, 1.0);
}

TEST(F1, Example) {
  const std::vector<int> predictions = {1, 1, 0, 0, 1};
  const std::vector<int> labels = {1, 0, 1, 0, 1};
  // tp 2, fp 1, fn 1: precision 2/3, recall 2/3.
  EXPECT_NEAR(F1(predictions, labels), 2.0 / 3.0, 1e-15);
}

TEST(F1, EmptyPositiveSetsGiveZero) {
  const std::vector<int> none = {0, 0, 0};
  EXPECT_EQ(F1(none, none), 0.0);
}

TEST(Spd, Example) {
  const std::vector<int> predictions = {1, 1, 0, 1, 0, 0};
  const std::vector<int> groups = {1, 1, 1, 0, 0, 0};
  EXPECT_NEAR(StatisticalParityDifference(predictions, groups), 1.0 / 3.0, 1e-15);
}

TEST(Eo, ComparesTruePositiveRates) {
  const std::vector<int> predictions = {1, 0, 1, 1, 0, 0, 1, 0};
  const std::vector<int> labels = {1, 1, 0, 1, 1, 1, 0, 0};
  const std::vector<int> groups = {1, 1, 1, 0, 0, 0, 0, 1};
  // privileged TPR 1/2, unprivileged TPR 1/3
  EXPECT_NEAR(EqualOpportunityDifference(predictions, labels, groups), 1.0 / 6.0, 1e-15);
}

TEST(Mse, Example) {
  const std::vector<double> predictions = {1.0, 2.0, 4.0};
  const std::vector<double> labels = {1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(MeanSquaredError(predictions, labels), 5.0 / 3.0);
}

TEST(Coverage, ClosedIntervals) {
  const std::vector<Interval> intervals = {{0, 1}, {0, 1}, {2, 3}, {5, 6}};
  const std::vector<double> labels = {1.0, 0.5, 1.9, 5.0};
  EXPECT_DOUBLE_EQ(Coverage(intervals, labels), 0.75);
}

TEST(Binarize, ThresholdIsInclusive) {
  const std::vector<double> scores = {0.49, 0.5, 0.51};
  EXPECT_EQ(Binarize(scores, 0.5), (std::vector<int>{0, 1, 1}));
}

TEST(Objective, NormalizationDirection) {
  for (std::string_view name : {"auc", "f1", "coverage"}) {
    const Objective o = Objective::Parse(name);
    EXPECT_TRUE(o.higher_is_better());
    EXPECT_EQ(o.Normalize(0.8), 0.8);
    EXPECT_EQ(o.Name(), name);
  }
  for (std::string_view name : {"mse", "spd", "eo"}) {
    const Objective o = Objective::Parse(name);
    EXPECT_FALSE(o.higher_is_better());
    EXPECT_EQ(o.Normalize(0.8), -0.8);
    EXPECT_EQ(o.Denormalize(o.Normalize(0.3)), 0.3);
  }
  EXPECT_THROW(Objective::Parse("accuracy"), StressError);
}

TEST(Metrics, LengthMismatchIsAnError) {
  const std::vector<double> two = {0.1, 0.2};
  const std::vector<int> three = {0, 1, 1};
  EXPECT_THROW(Auc(two, three), StressError);
}

}  // namespace
}  // namespace stress
