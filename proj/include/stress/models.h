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

#ifndef STRESS_MODELS_H_
#define STRESS_MODELS_H_

#include <span>
#include <vector>

#include "stress/encoder.h"

namespace stress {

struct LogisticRegressionOptions {
  double l2 = 1e-4;
  double learning_rate = 0.1;
  size_t iterations = 500;
};

// Full-batch gradient descent on the mean log-loss plus an L2 penalty on the
// weights (not the bias), starting from zero.
class LogisticRegression {
 public:
  static LogisticRegression Fit(const FeatureMatrix& x, std::span<const int> y,
                                const LogisticRegressionOptions& options);

  std::vector<double> PredictProba(const FeatureMatrix& x) const;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
};

struct DecisionTreeOptions {
  size_t max_depth = 5;
  size_t min_leaf = 5;
};

// CART classifier with Gini impurity. Candidate thresholds are midpoints of
// consecutive distinct values; equal-impurity splits resolve to the lowest
// feature index, then the lowest threshold. Leaves score the positive rate.
class DecisionTree {
 public:
  static DecisionTree Fit(const FeatureMatrix& x, std::span<const int> y,
                          const DecisionTreeOptions& options);

  std::vector<double> PredictProba(const FeatureMatrix& x) const;
  size_t node_count() const { return nodes_.size(); }
  size_t depth() const;

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    size_t left = 0;
    size_t right = 0;
    double value = 0.0;
    size_t depth = 0;
  };

  size_t Grow(const FeatureMatrix& x, std::span<const int> y, std::vector<size_t>& rows,
              size_t depth, const DecisionTreeOptions& options);

  std::vector<Node> nodes_;
};

// Least squares with a small ridge term, solved through the normal
// equations. The intercept is column 0 of the design.
class RidgeRegression {
 public:
  static RidgeRegression Fit(const FeatureMatrix& x, std::span<const double> y, double ridge);

  std::vector<double> Predict(const FeatureMatrix& x) const;
  const std::vector<double>& coefficients() const { return coefficients_; }

 private:
  std::vector<double> coefficients_;  // intercept first
};

// ceil((n + 1)(1 - alpha))-th smallest absolute residual; +inf when that
// rank exceeds n. Throws StressError(kTraining) on an empty calibration set.
double ConformalQuantile(std::span<const double> residuals, double alpha);

}  // namespace stress

#endif  // STRESS_MODELS_H_
