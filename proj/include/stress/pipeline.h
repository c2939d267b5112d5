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

#ifndef STRESS_PIPELINE_H_
#define STRESS_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stress/dataset.h"
#include "stress/encoder.h"
#include "stress/metrics.h"
#include "stress/models.h"

namespace stress {

enum class ModelKind { kLogisticRegression, kDecisionTree, kSplitConformal };

std::string_view ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);
std::string_view TaskName(Task task);
Task ParseTask(std::string_view name);

struct ConformalOptions {
  double alpha = 0.1;
  double calibration_fraction = 0.5;
  double ridge = 1e-6;
};

// Built-in train-then-score pipeline: cleaner, encoder, model.
struct PipelineSpec {
  CleanerSpec cleaner;
  ModelKind model = ModelKind::kLogisticRegression;
  LogisticRegressionOptions logistic;
  DecisionTreeOptions tree;
  ConformalOptions conformal;
  Task task = Task::kClassification;

  // Throws StressError(kConfig) on inconsistent combinations.
  void Validate() const;
  // Pipelines slow enough that a cheap proxy is worth searching on.
  bool expensive() const;

  // {"cleaner": {"kind": "mean_impute", "k": 5},
  //  "model": {"kind": "logistic_regression", "l2": .., "learning_rate": .., "iterations": ..},
  //  "task": "classification"}
  static PipelineSpec FromJson(const nlohmann::json& json);
  nlohmann::ordered_json ToJson() const;
};

// A fitted pipeline. Scoring is const and never touches training data.
class Model {
 public:
  // Positive-class probability for classifiers, point prediction for the
  // conformal regressor. One value per row of `data`.
  std::vector<double> Score(const Dataset& data) const;
  // Conformal intervals; throws StressError(kInvalidArgument) otherwise.
  std::vector<Interval> Intervals(const Dataset& data) const;

  const PipelineSpec& spec() const { return spec_; }
  // Training rows discarded for a MISSING label.
  size_t dropped_label_rows() const { return dropped_label_rows_; }
  // Training rows discarded by listwise deletion (cleaner "none").
  size_t dropped_feature_rows() const { return dropped_feature_rows_; }
  // Single-class training set: the model scores a constant.
  bool degenerate() const { return degenerate_; }
  double conformal_quantile() const { return quantile_; }

 private:
  friend Model Train(const PipelineSpec& spec, const Dataset& train, uint64_t seed);

  PipelineSpec spec_;
  std::optional<FeatureEncoder> encoder_;
  std::optional<LogisticRegression> logistic_;
  std::optional<DecisionTree> tree_;
  std::optional<RidgeRegression> ridge_;
  double constant_ = 0.0;
  double quantile_ = 0.0;
  size_t dropped_label_rows_ = 0;
  size_t dropped_feature_rows_ = 0;
  bool degenerate_ = false;
};

// Rows with a MISSING label are dropped before fitting. Throws
// StressError(kTraining) when no usable rows remain.
Model Train(const PipelineSpec& spec, const Dataset& train, uint64_t seed);

// Raw metric of a fitted model on `test`. Test rows with a MISSING label are
// ignored.
double EvaluateModel(const Model& model, const Dataset& test, const Objective& objective);

// Train on `train`, score on `test`, return the raw metric.
double Evaluate(const PipelineSpec& spec, const Dataset& train, const Dataset& test,
                const Objective& objective, uint64_t seed);

// Checks that the objective is computable for the pipeline and schema.
void CheckObjective(const Objective& objective, Task task, const Schema& schema,
                    bool has_intervals);

}  // namespace stress

#endif  // STRESS_PIPELINE_H_
