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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stress/error.h"

namespace stress {

std::string_view MetricNameString(MetricName name) {
  switch (name) {
    case MetricName::kAuc: return "auc";
    case MetricName::kF1: return "f1";
    case MetricName::kMse: return "mse";
    case MetricName::kSpd: return "spd";
    case MetricName::kEo: return "eo";
    case MetricName::kCoverage: return "coverage";
  }
  return "?";
}

Objective Objective::Parse(std::string_view name) {
  for (MetricName m : {MetricName::kAuc, MetricName::kF1, MetricName::kMse, MetricName::kSpd,
                       MetricName::kEo, MetricName::kCoverage}) {
    if (MetricNameString(m) == name) {
      Objective objective;
      objective.name = m;
      return objective;
    }
  }
  throw StressError(ErrorCode::kInvalidArgument, "unknown objective '" + std::string(name) + "'");
}

std::string_view Objective::Name() const { return MetricNameString(name); }

bool Objective::higher_is_better() const {
  return name == MetricName::kAuc || name == MetricName::kF1 || name == MetricName::kCoverage;
}

namespace {

void CheckSameLength(size_t a, size_t b) {
  if (a != b) throw StressError(ErrorCode::kMetric, "metric inputs differ in length");
}

}  // namespace

double Auc(std::span<const double> scores, std::span<const int> labels) {
  CheckSameLength(scores.size(), labels.size());
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Rank-sum of positives with tied groups sharing their average rank. Ranks
  // are kept doubled so every quantity stays an exact integer.
  double doubled_rank_sum = 0.0;
  size_t positives = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double doubled_rank = static_cast<double>(i + 1 + j);  // 2 * average of i+1..j
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        doubled_rank_sum += doubled_rank;
        ++positives;
      }
    }
    i = j;
  }
  const size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw StressError(ErrorCode::kMetric, "AUC needs both classes");
  }
  const double p = static_cast<double>(positives);
  const double doubled_u = doubled_rank_sum - p * (p + 1.0);
  return doubled_u / (2.0 * p * static_cast<double>(negatives));
}

double F1(std::span<const int> predictions, std::span<const int> labels) {
  CheckSameLength(predictions.size(), labels.size());
  double tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == 1 && labels[i] == 1) tp += 1;
    if (predictions[i] == 1 && labels[i] != 1) fp += 1;
    if (predictions[i] != 1 && labels[i] == 1) fn += 1;
  }
  const double denominator = 2 * tp + fp + fn;
  return denominator == 0 ? 0.0 : 2 * tp / denominator;
}

double StatisticalParityDifference(std::span<const int> predictions, std::span<const int> groups) {
  CheckSameLength(predictions.size(), groups.size());
  double positive[2] = {0, 0};
  double total[2] = {0, 0};
  for (size_t i = 0; i < predictions.size(); ++i) {
    const int g = groups[i] == 1 ? 1 : 0;
    total[g] += 1;
    positive[g] += predictions[i] == 1 ? 1 : 0;
  }
  if (total[0] == 0 || total[1] == 0) {
    throw StressError(ErrorCode::kMetric, "statistical parity needs both groups");
  }
  return std::fabs(positive[1] / total[1] - positive[0] / total[0]);
}

double EqualOpportunityDifference(std::span<const int> predictions, std::span<const int> labels,
                                  std::span<const int> groups) {
  CheckSameLength(predictions.size(), labels.size());
  CheckSameLength(predictions.size(), groups.size());
  double hits[2] = {0, 0};
  double positives[2] = {0, 0};
  for (size_t i = 0; i < predictions.size(); ++i) {
    if (labels[i] != 1) continue;
    const int g = groups[i] == 1 ? 1 : 0;
    positives[g] += 1;
    hits[g] += predictions[i] == 1 ? 1 : 0;
  }
  if (positives[0] == 0 || positives[1] == 0) {
    throw StressError(ErrorCode::kMetric, "equal opportunity needs positives in both groups");
  }
  return std::fabs(hits[1] / positives[1] - hits[0] / positives[0]);
}

double MeanSquaredError(std::span<const double> predictions, std::span<const double> labels) {
  CheckSameLength(predictions.size(), labels.size());
  if (predictions.empty()) throw StressError(ErrorCode::kMetric, "MSE of empty input");
  double sum = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - labels[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

double Coverage(std::span<const Interval> intervals, std::span<const double> labels) {
  CheckSameLength(intervals.size(), labels.size());
  if (intervals.empty()) throw StressError(ErrorCode::kMetric, "coverage of empty input");
  size_t inside = 0;
  for (size_t i = 0; i < intervals.size(); ++i) {
    if (labels[i] >= intervals[i].lo && labels[i] <= intervals[i].hi) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(intervals.size());
}

std::vector<int> Binarize(std::span<const double> scores, double threshold) {
  std::vector<int> out(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold ? 1 : 0;
  return out;
}

}  // namespace stress
