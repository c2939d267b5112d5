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

#ifndef STRESS_METRICS_H_
#define STRESS_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stress {

enum class MetricName { kAuc, kF1, kMse, kSpd, kEo, kCoverage };

// A metric together with the knobs needed to compute it. The optimizer
// minimizes psi = Normalize(metric): higher-is-better metrics pass through,
// lower-is-better ones are negated, so "lower psi" always means "more damage".
struct Objective {
  MetricName name = MetricName::kAuc;
  // Score -> prediction cut for f1, spd and eo.
  double threshold = 0.5;
  // Privileged value of the sensitive attribute for spd and eo.
  std::optional<std::string> privileged;

  static Objective Parse(std::string_view name);
  std::string_view Name() const;
  bool higher_is_better() const;
  double Normalize(double metric) const { return higher_is_better() ? metric : -metric; }
  double Denormalize(double psi) const { return higher_is_better() ? psi : -psi; }
};

std::string_view MetricNameString(MetricName name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Mann-Whitney AUC; every tied positive/negative pair counts one half.
// Throws StressError(kMetric) unless both classes are present.
double Auc(std::span<const double> scores, std::span<const int> labels);

// 2PR / (P + R). 0/0 is defined as 0.
double F1(std::span<const int> predictions, std::span<const int> labels);

// |P(yhat = 1 | privileged) - P(yhat = 1 | unprivileged)|; groups[i] == 1
// marks a privileged row.
double StatisticalParityDifference(std::span<const int> predictions, std::span<const int> groups);

// |TPR_privileged - TPR_unprivileged|.
double EqualOpportunityDifference(std::span<const int> predictions, std::span<const int> labels,
                                  std::span<const int> groups);

double MeanSquaredError(std::span<const double> predictions, std::span<const double> labels);

// Fraction of labels inside their closed interval.
double Coverage(std::span<const Interval> intervals, std::span<const double> labels);

std::vector<int> Binarize(std::span<const double> scores, double threshold);

}  // namespace stress

#endif  // STRESS_METRICS_H_
