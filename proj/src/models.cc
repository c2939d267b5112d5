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

#include "stress/models.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stress/error.h"
#include "stress/kernels.h"

namespace stress {
namespace {

inline double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LogisticRegression LogisticRegression::Fit(const FeatureMatrix& x, std::span<const int> y,
                                           const LogisticRegressionOptions& options) {
  if (x.rows != y.size()) throw StressError(ErrorCode::kTraining, "label count mismatch");
  if (x.rows == 0) throw StressError(ErrorCode::kTraining, "no training rows");
  const kernels::KernelTable& k = kernels::Active();
  const size_t n = x.rows;
  const double inv_n = 1.0 / static_cast<double>(n);

  LogisticRegression model;
  model.weights_.assign(x.cols, 0.0);
  std::vector<double> z(n);
  std::vector<double> residual(n);
  std::vector<double> gradient(x.cols);
  for (size_t it = 0; it < options.iterations; ++it) {
    k.gemv_columns(x.data.data(), n, x.cols, n, model.weights_.data(), model.bias_, z.data());
    double bias_gradient = 0.0;
    for (size_t i = 0; i < n; ++i) {
      residual[i] = Sigmoid(z[i]) - static_cast<double>(y[i]);
      bias_gradient += residual[i];
    }
    for (size_t j = 0; j < x.cols; ++j) {
      gradient[j] = k.dot(x.data.data() + j * n, residual.data(), n) * inv_n +
                    options.l2 * model.weights_[j];
    }
    k.axpy(-options.learning_rate, gradient.data(), model.weights_.data(), x.cols);
    model.bias_ -= options.learning_rate * bias_gradient * inv_n;
  }
  return model;
}

std::vector<double> LogisticRegression::PredictProba(const FeatureMatrix& x) const {
  std::vector<double> z(x.rows);
  kernels::Active().gemv_columns(x.data.data(), x.rows, x.cols, x.rows, weights_.data(), bias_,
                                 z.data());
  for (double& v : z) v = Sigmoid(v);
  return z;
}

namespace {

inline double Gini(double positives, double total) {
  if (total <= 0) return 0.0;
  const double p = positives / total;
  return 2.0 * p * (1.0 - p);
}

}  // namespace

DecisionTree DecisionTree::Fit(const FeatureMatrix& x, std::span<const int> y,
                               const DecisionTreeOptions& options) {
  if (x.rows != y.size()) throw StressError(ErrorCode::kTraining, "label count mismatch");
  if (x.rows == 0) throw StressError(ErrorCode::kTraining, "no training rows");
  if (options.min_leaf == 0) throw StressError(ErrorCode::kInvalidArgument, "min_leaf must be >= 1");
  DecisionTree tree;
  std::vector<size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), 0);
  tree.Grow(x, y, rows, 0, options);
  return tree;
}

size_t DecisionTree::Grow(const FeatureMatrix& x, std::span<const int> y, std::vector<size_t>& rows,
                          size_t depth, const DecisionTreeOptions& options) {
  const size_t id = nodes_.size();
  nodes_.push_back({});
  double positives = 0;
  for (size_t r : rows) positives += y[r] == 1 ? 1 : 0;
  const double total = static_cast<double>(rows.size());
  nodes_[id].value = positives / total;
  nodes_[id].depth = depth;

  const double parent = Gini(positives, total);
  if (depth >= options.max_depth || parent == 0.0 || rows.size() < 2 * options.min_leaf) return id;

  double best_impurity = parent;
  int best_feature = -1;
  double best_threshold = 0.0;
  std::vector<size_t> sorted = rows;
  for (size_t j = 0; j < x.cols; ++j) {
    const auto column = x.column(j);
    std::sort(sorted.begin(), sorted.end(), [&](size_t a, size_t b) {
      return column[a] != column[b] ? column[a] < column[b] : a < b;
    });
    double left_positives = 0;
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
      left_positives += y[sorted[i]] == 1 ? 1 : 0;
      const size_t left = i + 1;
      const size_t right = sorted.size() - left;
      if (left < options.min_leaf) continue;
      if (right < options.min_leaf) break;
      const double lo = column[sorted[i]];
      const double hi = column[sorted[i + 1]];
      if (lo == hi) continue;
      const double l = static_cast<double>(left);
      const double r = static_cast<double>(right);
      const double impurity =
          (l * Gini(left_positives, l) + r * Gini(positives - left_positives, r)) / total;
      if (impurity < best_impurity) {
        best_impurity = impurity;
        best_feature = static_cast<int>(j);
        best_threshold = 0.5 * (lo + hi);
      }
    }
  }
  if (best_feature < 0) return id;

  std::vector<size_t> left_rows;
  std::vector<size_t> right_rows;
  const auto column = x.column(static_cast<size_t>(best_feature));
  for (size_t r : rows) (column[r] <= best_threshold ? left_rows : right_rows).push_back(r);
  rows.clear();
  rows.shrink_to_fit();

  const size_t left = Grow(x, y, left_rows, depth + 1, options);
  const size_t right = Grow(x, y, right_rows, depth + 1, options);
  nodes_[id].feature = best_feature;
  nodes_[id].threshold = best_threshold;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<double> DecisionTree::PredictProba(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows);
  for (size_t i = 0; i < x.rows; ++i) {
    size_t node = 0;
    while (nodes_[node].feature >= 0) {
      const Node& n = nodes_[node];
      node = x.at(i, static_cast<size_t>(n.feature)) <= n.threshold ? n.left : n.right;
    }
    out[i] = nodes_[node].value;
  }
  return out;
}

size_t DecisionTree::depth() const {
  size_t d = 0;
  for (const Node& n : nodes_) d = std::max(d, n.depth);
  return d;
}

RidgeRegression RidgeRegression::Fit(const FeatureMatrix& x, std::span<const double> y,
                                     double ridge) {
  if (x.rows != y.size()) throw StressError(ErrorCode::kTraining, "label count mismatch");
  if (x.rows == 0) throw StressError(ErrorCode::kTraining, "no training rows");
  const kernels::KernelTable& k = kernels::Active();
  const size_t n = x.rows;
  const size_t d = x.cols + 1;
  const std::vector<double> ones(n, 1.0);
  auto column = [&](size_t j) -> const double* {
    return j == 0 ? ones.data() : x.data.data() + (j - 1) * n;
  };

  Eigen::MatrixXd gram(d, d);
  Eigen::VectorXd rhs(d);
  for (size_t a = 0; a < d; ++a) {
    for (size_t b = a; b < d; ++b) {
      const double v = k.dot(column(a), column(b), n);
      gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      gram(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
    }
    gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) += ridge;
    rhs(static_cast<Eigen::Index>(a)) = k.dot(column(a), y.data(), n);
  }
  const Eigen::VectorXd solution = gram.ldlt().solve(rhs);
  RidgeRegression model;
  model.coefficients_.assign(solution.data(), solution.data() + d);
  for (double c : model.coefficients_) {
    if (!std::isfinite(c)) throw StressError(ErrorCode::kTraining, "ridge solve diverged");
  }
  return model;
}

std::vector<double> RidgeRegression::Predict(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows);
  kernels::Active().gemv_columns(x.data.data(), x.rows, x.cols, x.rows, coefficients_.data() + 1,
                                 coefficients_[0], out.data());
  return out;
}

double ConformalQuantile(std::span<const double> residuals, double alpha) {
  if (residuals.empty()) throw StressError(ErrorCode::kTraining, "empty calibration set");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw StressError(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  const double n = static_cast<double>(residuals.size());
  // The small slack keeps products like 5 * 0.8 from rounding up a rank.
  const auto rank = static_cast<size_t>(std::ceil((n + 1.0) * (1.0 - alpha) - 1e-9));
  if (rank > residuals.size()) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted(residuals.begin(), residuals.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted[std::max<size_t>(rank, 1) - 1];
}

}  // namespace stress
