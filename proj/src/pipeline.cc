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

#include "stress/pipeline.h"

#include <cmath>
#include <limits>

#include "stress/error.h"
#include "stress/rng.h"

namespace stress {

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogisticRegression: return "logistic_regression";
    case ModelKind::kDecisionTree: return "decision_tree";
    case ModelKind::kSplitConformal: return "split_conformal";
  }
  return "?";
}

ModelKind ParseModelKind(std::string_view name) {
  for (ModelKind kind :
       {ModelKind::kLogisticRegression, ModelKind::kDecisionTree, ModelKind::kSplitConformal}) {
    if (ModelKindName(kind) == name) return kind;
  }
  throw StressError(ErrorCode::kConfig, "unknown model '" + std::string(name) + "'");
}

std::string_view TaskName(Task task) {
  return task == Task::kClassification ? "classification" : "regression";
}

Task ParseTask(std::string_view name) {
  if (name == "classification") return Task::kClassification;
  if (name == "regression") return Task::kRegression;
  throw StressError(ErrorCode::kConfig, "unknown task '" + std::string(name) + "'");
}

void PipelineSpec::Validate() const {
  const bool regression_model = model == ModelKind::kSplitConformal;
  if (regression_model != (task == Task::kRegression)) {
    throw StressError(ErrorCode::kConfig, std::string(ModelKindName(model)) +
                                              " does not fit a " + std::string(TaskName(task)) +
                                              " task");
  }
  if (cleaner.kind == CleanerKind::kKnnImpute && cleaner.k == 0) {
    throw StressError(ErrorCode::kConfig, "knn_impute needs k >= 1");
  }
  if (!(logistic.learning_rate > 0) || !(logistic.l2 >= 0)) {
    throw StressError(ErrorCode::kConfig, "logistic regression needs lr > 0 and l2 >= 0");
  }
  if (tree.min_leaf == 0) throw StressError(ErrorCode::kConfig, "min_leaf must be >= 1");
  if (!(conformal.alpha > 0 && conformal.alpha < 1)) {
    throw StressError(ErrorCode::kConfig, "alpha must lie in (0, 1)");
  }
  if (!(conformal.calibration_fraction > 0 && conformal.calibration_fraction < 1)) {
    throw StressError(ErrorCode::kConfig, "calibration_fraction must lie in (0, 1)");
  }
  if (!(conformal.ridge >= 0)) throw StressError(ErrorCode::kConfig, "ridge must be >= 0");
}

bool PipelineSpec::expensive() const {
  return cleaner.kind == CleanerKind::kKnnImpute || model == ModelKind::kDecisionTree;
}

PipelineSpec PipelineSpec::FromJson(const nlohmann::json& json) {
  PipelineSpec spec;
  try {
    if (json.contains("cleaner")) {
      const auto& c = json.at("cleaner");
      if (c.is_string()) {
        spec.cleaner.kind = ParseCleanerKind(c.get<std::string>());
      } else {
        spec.cleaner.kind = ParseCleanerKind(c.at("kind").get<std::string>());
        spec.cleaner.k = c.value("k", spec.cleaner.k);
      }
    }
    if (json.contains("model")) {
      const auto& m = json.at("model");
      spec.model = ParseModelKind(m.is_string() ? m.get<std::string>() : m.at("kind").get<std::string>());
      if (m.is_object()) {
        spec.logistic.l2 = m.value("l2", spec.logistic.l2);
        spec.logistic.learning_rate = m.value("learning_rate", spec.logistic.learning_rate);
        spec.logistic.iterations = m.value("iterations", spec.logistic.iterations);
        spec.tree.max_depth = m.value("max_depth", spec.tree.max_depth);
        spec.tree.min_leaf = m.value("min_leaf", spec.tree.min_leaf);
        spec.conformal.alpha = m.value("alpha", spec.conformal.alpha);
        spec.conformal.calibration_fraction =
            m.value("calibration_fraction", spec.conformal.calibration_fraction);
        spec.conformal.ridge = m.value("ridge", spec.conformal.ridge);
      }
    }
    if (json.contains("task")) {
      spec.task = ParseTask(json.at("task").get<std::string>());
    } else if (spec.model == ModelKind::kSplitConformal) {
      spec.task = Task::kRegression;
    }
  } catch (const nlohmann::json::exception& e) {
    throw StressError(ErrorCode::kConfig, std::string("pipeline: ") + e.what());
  }
  spec.Validate();
  return spec;
}

nlohmann::ordered_json PipelineSpec::ToJson() const {
  nlohmann::ordered_json c = {{"kind", CleanerKindName(cleaner.kind)}};
  if (cleaner.kind == CleanerKind::kKnnImpute) c["k"] = cleaner.k;
  nlohmann::ordered_json m = {{"kind", ModelKindName(model)}};
  switch (model) {
    case ModelKind::kLogisticRegression:
      m["l2"] = logistic.l2;
      m["learning_rate"] = logistic.learning_rate;
      m["iterations"] = logistic.iterations;
      break;
    case ModelKind::kDecisionTree:
      m["max_depth"] = tree.max_depth;
      m["min_leaf"] = tree.min_leaf;
      break;
    case ModelKind::kSplitConformal:
      m["alpha"] = conformal.alpha;
      m["calibration_fraction"] = conformal.calibration_fraction;
      m["ridge"] = conformal.ridge;
      break;
  }
  return {{"cleaner", c}, {"model", m}, {"task", TaskName(task)}};
}

namespace {

std::vector<size_t> RowsWithLabel(const Dataset& data) {
  const Column& label = data.column(data.schema().label_index());
  std::vector<size_t> rows;
  rows.reserve(data.rows());
  for (size_t r = 0; r < data.rows(); ++r) {
    if (!label.IsMissing(r)) rows.push_back(r);
  }
  return rows;
}

// Rows with every cell observed.
std::vector<size_t> CompleteRows(const Dataset& data) {
  std::vector<size_t> rows;
  for (size_t r = 0; r < data.rows(); ++r) {
    bool complete = true;
    for (size_t c = 0; c < data.cols() && complete; ++c) complete = !data.IsMissing(r, c);
    if (complete) rows.push_back(r);
  }
  return rows;
}

std::vector<double> NumericLabels(const Dataset& data) {
  return data.column(data.schema().label_index()).numbers;
}

}  // namespace

Model Train(const PipelineSpec& spec, const Dataset& train, uint64_t seed) {
  spec.Validate();
  train.schema().ValidateFor(spec.task);
  Model model;
  model.spec_ = spec;

  std::vector<size_t> labelled = RowsWithLabel(train);
  model.dropped_label_rows_ = train.rows() - labelled.size();
  Dataset data = model.dropped_label_rows_ > 0 ? train.SelectRows(labelled) : train;
  if (spec.cleaner.kind == CleanerKind::kNone) {
    const std::vector<size_t> complete = CompleteRows(data);
    model.dropped_feature_rows_ = data.rows() - complete.size();
    if (model.dropped_feature_rows_ > 0) data = data.SelectRows(complete);
  }
  if (data.rows() == 0) throw StressError(ErrorCode::kTraining, "no training rows left");

  if (spec.model == ModelKind::kSplitConformal) {
    if (data.rows() < 4) throw StressError(ErrorCode::kTraining, "too few rows for split conformal");
    SplitResult parts =
        Split(data, 1.0 - spec.conformal.calibration_fraction, DeriveSeed(seed, "calibration"));
    model.encoder_ = FeatureEncoder::Fit(parts.train, spec.cleaner);
    const FeatureMatrix proper = model.encoder_->Transform(parts.train);
    const std::vector<double> y = NumericLabels(parts.train);
    model.ridge_ = RidgeRegression::Fit(proper, y, spec.conformal.ridge);
    const std::vector<double> predicted = model.ridge_->Predict(model.encoder_->Transform(parts.test));
    const std::vector<double> truth = NumericLabels(parts.test);
    std::vector<double> residuals(truth.size());
    for (size_t i = 0; i < truth.size(); ++i) residuals[i] = std::fabs(truth[i] - predicted[i]);
    model.quantile_ = ConformalQuantile(residuals, spec.conformal.alpha);
    return model;
  }

  const std::vector<int> y = BinaryLabels(data);
  size_t positives = 0;
  for (int v : y) positives += v == 1 ? 1 : 0;
  model.encoder_ = FeatureEncoder::Fit(data, spec.cleaner);
  if (positives == 0 || positives == y.size()) {
    model.degenerate_ = true;
    model.constant_ = positives == 0 ? 0.0 : 1.0;
    return model;
  }
  const FeatureMatrix x = model.encoder_->Transform(data);
  if (spec.model == ModelKind::kLogisticRegression) {
    model.logistic_ = LogisticRegression::Fit(x, y, spec.logistic);
  } else {
    model.tree_ = DecisionTree::Fit(x, y, spec.tree);
  }
  return model;
}

std::vector<double> Model::Score(const Dataset& data) const {
  if (degenerate_) return std::vector<double>(data.rows(), constant_);
  const FeatureMatrix x = encoder_->Transform(data);
  if (logistic_) return logistic_->PredictProba(x);
  if (tree_) return tree_->PredictProba(x);
  return ridge_->Predict(x);
}

std::vector<Interval> Model::Intervals(const Dataset& data) const {
  if (!ridge_) throw StressError(ErrorCode::kInvalidArgument, "intervals need a conformal model");
  const std::vector<double> center = Score(data);
  std::vector<Interval> out(center.size());
  for (size_t i = 0; i < center.size(); ++i) out[i] = {center[i] - quantile_, center[i] + quantile_};
  return out;
}

void CheckObjective(const Objective& objective, Task task, const Schema& schema,
                    bool has_intervals) {
  switch (objective.name) {
    case MetricName::kAuc:
    case MetricName::kF1:
      if (task != Task::kClassification) {
        throw StressError(ErrorCode::kConfig, std::string(objective.Name()) + " needs classification");
      }
      break;
    case MetricName::kSpd:
    case MetricName::kEo: {
      if (task != Task::kClassification) {
        throw StressError(ErrorCode::kConfig, std::string(objective.Name()) + " needs classification");
      }
      if (!schema.sensitive) {
        throw StressError(ErrorCode::kConfig, "fairness objectives need a sensitive attribute");
      }
      if (!objective.privileged) {
        throw StressError(ErrorCode::kConfig, "fairness objectives need a privileged value");
      }
      const size_t s = schema.IndexOf(*schema.sensitive);
      if (schema.attributes[s].kind != AttributeKind::kCategorical) {
        throw StressError(ErrorCode::kConfig, "sensitive attribute must be categorical");
      }
      break;
    }
    case MetricName::kMse:
      if (task != Task::kRegression) throw StressError(ErrorCode::kConfig, "mse needs regression");
      break;
    case MetricName::kCoverage:
      if (!has_intervals) throw StressError(ErrorCode::kConfig, "coverage needs split_conformal");
      break;
  }
}

double EvaluateModel(const Model& model, const Dataset& test, const Objective& objective) {
  const PipelineSpec& spec = model.spec();
  CheckObjective(objective, spec.task, test.schema(), spec.model == ModelKind::kSplitConformal);
  const std::vector<size_t> labelled = RowsWithLabel(test);
  const Dataset data = labelled.size() == test.rows() ? test : test.SelectRows(labelled);
  if (data.rows() == 0) throw StressError(ErrorCode::kMetric, "test set has no labelled rows");

  switch (objective.name) {
    case MetricName::kAuc:
      return Auc(model.Score(data), BinaryLabels(data));
    case MetricName::kF1:
      return F1(Binarize(model.Score(data), objective.threshold), BinaryLabels(data));
    case MetricName::kSpd:
    case MetricName::kEo: {
      const Column& sensitive = data.column(*data.schema().sensitive);
      const auto privileged = sensitive.vocabulary->Find(*objective.privileged);
      std::vector<size_t> grouped;
      std::vector<int> groups;
      for (size_t r = 0; r < data.rows(); ++r) {
        if (sensitive.codes[r] == kMissingCode) continue;
        grouped.push_back(r);
        groups.push_back(privileged && sensitive.codes[r] == *privileged ? 1 : 0);
      }
      const Dataset rows = data.SelectRows(grouped);
      const std::vector<int> predictions = Binarize(model.Score(rows), objective.threshold);
      if (objective.name == MetricName::kSpd) return StatisticalParityDifference(predictions, groups);
      return EqualOpportunityDifference(predictions, BinaryLabels(rows), groups);
    }
    case MetricName::kMse:
      return MeanSquaredError(model.Score(data), NumericLabels(data));
    case MetricName::kCoverage:
      return Coverage(model.Intervals(data), NumericLabels(data));
  }
  throw StressError(ErrorCode::kMetric, "unknown objective");
}

double Evaluate(const PipelineSpec& spec, const Dataset& train, const Dataset& test,
                const Objective& objective, uint64_t seed) {
  return EvaluateModel(Train(spec, train, seed), test, objective);
}

}  // namespace stress
