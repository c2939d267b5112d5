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

#include <algorithm>
#include <cmath>
#include <limits>

#include "stress/error.h"
#include "stress/kernels.h"
#include "stress/rng.h"

namespace stress {

ErrorType ErrorType::MissingValue(std::string target) {
  ErrorType error;
  error.kind = ErrorKind::kMissingValue;
  error.target = std::move(target);
  return error;
}

ErrorType ErrorType::LabelError(std::vector<std::string> classes) {
  ErrorType error;
  error.kind = ErrorKind::kLabelError;
  error.classes = std::move(classes);
  return error;
}

ErrorType ErrorType::SelectionBias() {
  ErrorType error;
  error.kind = ErrorKind::kSelectionBias;
  return error;
}

std::string ErrorType::Tag() const {
  switch (kind) {
    case ErrorKind::kMissingValue:
      return "MV(" + (target.empty() ? std::string("*") : target) + ")";
    case ErrorKind::kLabelError:
      return "LE";
    case ErrorKind::kSelectionBias:
      return "SB";
  }
  return "?";
}

ErrorType LabelErrorFor(const Dataset& dataset) {
  const Column& label = dataset.column(dataset.schema().label_index());
  if (label.kind != AttributeKind::kCategorical) {
    throw StressError(ErrorCode::kInvalidArgument, "label errors need a categorical label");
  }
  return ErrorType::LabelError(label.vocabulary->tokens());
}

bool ParameterSpace::Contains(std::span<const double> theta) const {
  if (theta.size() != dims.size()) return false;
  for (size_t i = 0; i < dims.size(); ++i) {
    const double x = theta[i];
    if (!std::isfinite(x)) return false;
    if (dims[i].kind == ParamDim::Kind::kContinuous) {
      if (x < dims[i].lower || x > dims[i].upper) return false;
    } else if (x < 0.0 || x >= static_cast<double>(dims[i].choices.size()) || x != std::floor(x)) {
      return false;
    }
  }
  return true;
}

std::string CorruptionTemplate::Key() const {
  std::string key = error.Tag() + "|";
  for (size_t i = 0; i < pattern_attributes.size(); ++i) {
    if (i > 0) key.push_back(',');
    key += pattern_attributes[i];
  }
  return key;
}

CorruptionTemplate MakeTemplate(const Dataset& dataset, ErrorType error,
                                std::vector<std::string> pattern_attributes) {
  const Schema& schema = dataset.schema();
  if (error.kind == ErrorKind::kMissingValue) {
    if (error.target.empty()) {
      throw StressError(ErrorCode::kInvalidArgument, "missing-value template needs a target");
    }
    schema.IndexOf(error.target);
  }
  if (pattern_attributes.empty()) {
    throw StressError(ErrorCode::kInvalidArgument, "pattern needs at least one attribute");
  }
  std::vector<size_t> indices;
  for (const auto& name : pattern_attributes) indices.push_back(schema.IndexOf(name));
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

  CorruptionTemplate tmpl;
  tmpl.error = std::move(error);
  tmpl.space.dims.push_back({"p", ParamDim::Kind::kContinuous, 0.0, 1.0, {}});
  for (size_t index : indices) {
    const Attribute& attribute = schema.attributes[index];
    tmpl.pattern_attributes.push_back(attribute.name);
    if (attribute.kind == AttributeKind::kNumeric) {
      const auto range = dataset.NumericRange(index).value_or(std::pair{0.0, 0.0});
      tmpl.space.dims.push_back(
          {attribute.name + ".lower", ParamDim::Kind::kContinuous, range.first, range.second, {}});
      tmpl.space.dims.push_back({attribute.name + ".width", ParamDim::Kind::kContinuous, 0.0,
                                 range.second - range.first, {}});
    } else {
      ParamDim dim{attribute.name, ParamDim::Kind::kCategorical, 0.0, 0.0,
                   dataset.column(index).vocabulary->tokens()};
      if (dim.choices.empty()) {
        throw StressError(ErrorCode::kInvalidArgument,
                          "categorical attribute '" + attribute.name + "' has no values");
      }
      dim.upper = static_cast<double>(dim.choices.size() - 1);
      tmpl.space.dims.push_back(std::move(dim));
    }
  }
  if (tmpl.error.multiclass()) {
    for (const auto& cls : tmpl.error.classes) {
      tmpl.space.dims.push_back({"q[" + cls + "]", ParamDim::Kind::kContinuous, 0.0, 1.0, {}});
    }
  }
  return tmpl;
}

Dcp Instantiate(const CorruptionTemplate& tmpl, std::span<const double> theta) {
  if (!tmpl.space.Contains(theta)) {
    throw StressError(ErrorCode::kOutOfSpace, "theta lies outside the parameter space of " + tmpl.Key());
  }
  Dcp dcp;
  dcp.error = tmpl.error;
  dcp.p = theta[0];
  size_t d = 1;
  for (const auto& name : tmpl.pattern_attributes) {
    RangeCondition condition;
    condition.attribute = name;
    const ParamDim& dim = tmpl.space.dims[d];
    if (dim.kind == ParamDim::Kind::kCategorical) {
      condition.equals = dim.choices[static_cast<size_t>(theta[d])];
      d += 1;
    } else {
      const double lower = theta[d];
      const double width = theta[d + 1];
      if (width < 0.0) throw StressError(ErrorCode::kOutOfSpace, "negative width for " + name);
      condition.lower = lower;
      condition.upper = lower + width;
      d += 2;
    }
    dcp.pattern.conditions.push_back(std::move(condition));
  }
  if (tmpl.error.multiclass()) {
    double total = 0.0;
    for (size_t k = 0; k < tmpl.error.classes.size(); ++k) total += theta[d + k];
    for (size_t k = 0; k < tmpl.error.classes.size(); ++k) {
      dcp.proportions.push_back(total > 0.0 ? theta[d + k] / total
                                            : 1.0 / static_cast<double>(tmpl.error.classes.size()));
    }
  }
  return dcp;
}

void CheckCompatible(const Dcp& dcp, const Schema& schema) {
  if (dcp.pattern.conditions.empty()) {
    throw StressError(ErrorCode::kSchema, "pattern has no conditions");
  }
  for (const auto& condition : dcp.pattern.conditions) {
    const auto index = schema.Find(condition.attribute);
    if (!index) {
      throw StressError(ErrorCode::kSchema, "pattern references unknown attribute '" +
                                                condition.attribute + "'");
    }
    const bool categorical = schema.attributes[*index].kind == AttributeKind::kCategorical;
    if (categorical != condition.equals.has_value()) {
      throw StressError(ErrorCode::kSchema,
                        "condition on '" + condition.attribute + "' does not fit its kind");
    }
    if (condition.lower && condition.upper && *condition.lower > *condition.upper) {
      throw StressError(ErrorCode::kSchema, "condition on '" + condition.attribute +
                                                "' has lower > upper");
    }
  }
  if (dcp.error.kind == ErrorKind::kMissingValue && !schema.Find(dcp.error.target)) {
    throw StressError(ErrorCode::kSchema, "unknown missing-value target '" + dcp.error.target + "'");
  }
  if (dcp.error.kind == ErrorKind::kLabelError &&
      schema.attributes[schema.label_index()].kind != AttributeKind::kCategorical) {
    throw StressError(ErrorCode::kSchema, "label errors need a categorical label");
  }
  if (!(dcp.p >= 0.0 && dcp.p <= 1.0)) throw StressError(ErrorCode::kOutOfSpace, "p outside [0, 1]");
}

namespace {

bool ConditionHolds(const RangeCondition& condition, const Column& column, size_t row) {
  if (column.IsMissing(row)) return false;
  if (column.kind == AttributeKind::kCategorical) {
    return condition.equals && column.vocabulary->Token(column.codes[row]) == *condition.equals;
  }
  const double v = column.numbers[row];
  if (condition.lower && v < *condition.lower) return false;
  if (condition.upper && v > *condition.upper) return false;
  return true;
}

}  // namespace

bool PatternMatches(const Pattern& pattern, const Dataset& dataset, size_t row) {
  for (const auto& condition : pattern.conditions) {
    const size_t col = dataset.schema().IndexOf(condition.attribute);
    if (!ConditionHolds(condition, dataset.column(col), row)) return false;
  }
  return true;
}

std::vector<uint8_t> MatchMask(const Pattern& pattern, const Dataset& dataset) {
  std::vector<uint8_t> mask(dataset.rows(), 1);
  for (const auto& condition : pattern.conditions) {
    const Column& column = dataset.column(dataset.schema().IndexOf(condition.attribute));
    if (column.kind == AttributeKind::kNumeric) {
      const double lower = condition.lower.value_or(-std::numeric_limits<double>::infinity());
      const double upper = condition.upper.value_or(std::numeric_limits<double>::infinity());
      kernels::RangeMask(column.numbers, lower, upper, mask);
    } else {
      const auto code = condition.equals ? column.vocabulary->Find(*condition.equals) : std::nullopt;
      if (!code) {
        std::fill(mask.begin(), mask.end(), 0);
        continue;
      }
      for (size_t r = 0; r < mask.size(); ++r) {
        mask[r] = static_cast<uint8_t>(mask[r] & (column.codes[r] == *code ? 1 : 0));
      }
    }
  }
  return mask;
}

size_t CountMatches(const Pattern& pattern, const Dataset& dataset) {
  const auto mask = MatchMask(pattern, dataset);
  size_t count = 0;
  for (uint8_t m : mask) count += m;
  return count;
}

size_t CorruptedDataset::CorruptedRowCount() const {
  std::vector<size_t> rows;
  rows.reserve(corrupted_cells.size());
  for (const auto& cell : corrupted_cells) rows.push_back(cell.row);
  std::sort(rows.begin(), rows.end());
  return static_cast<size_t>(std::unique(rows.begin(), rows.end()) - rows.begin()) + dropped_rows;
}

namespace {

// Fires when the noise draw lands strictly below p, so p = 0 never fires and
// p = 1 always fires.
inline bool Fires(double noise, double p) { return noise < p; }

void CorruptAttributes(const Dcp& dcp, const Dataset& clean, const std::vector<uint8_t>& mask,
                       uint64_t seed, Dataset& out, std::vector<CellRef>& cells) {
  const Schema& schema = clean.schema();
  if (dcp.error.kind == ErrorKind::kMissingValue) {
    const size_t target = schema.IndexOf(dcp.error.target);
    Column& column = out.mutable_column(target);
    for (size_t r = 0; r < clean.rows(); ++r) {
      if (!mask[r] || !Fires(CounterUniform(seed, r, target), dcp.p)) continue;
      if (column.kind == AttributeKind::kNumeric) {
        column.numbers[r] = std::numeric_limits<double>::quiet_NaN();
      } else {
        column.codes[r] = kMissingCode;
      }
      cells.push_back({r, target});
    }
    return;
  }
  // Label error.
  const size_t label = schema.label_index();
  Column& column = out.mutable_column(label);
  const Vocabulary& vocabulary = *column.vocabulary;
  std::vector<int32_t> class_codes;
  for (const auto& cls : dcp.error.classes) {
    const auto code = vocabulary.Find(cls);
    class_codes.push_back(code ? *code : kMissingCode);
  }
  for (size_t r = 0; r < clean.rows(); ++r) {
    if (!mask[r] || column.codes[r] == kMissingCode) continue;
    const double noise = CounterUniform(seed, r, label);
    if (!Fires(noise, dcp.p)) continue;
    int32_t replacement = kMissingCode;
    if (class_codes.size() == 2) {
      replacement = column.codes[r] == class_codes[0] ? class_codes[1] : class_codes[0];
    } else if (!dcp.proportions.empty()) {
      // Segment [0, p) into one sub-interval per class.
      const double u = noise / dcp.p;
      double cumulative = 0.0;
      size_t k = 0;
      for (; k + 1 < dcp.proportions.size(); ++k) {
        cumulative += dcp.proportions[k];
        if (u < cumulative) break;
      }
      replacement = class_codes[k];
    }
    if (replacement == kMissingCode) continue;
    column.codes[r] = replacement;
    cells.push_back({r, label});
  }
}

}  // namespace

CorruptedDataset ApplyProcess(std::span<const Dcp> stages, const Dataset& dataset, uint64_t seed) {
  const Schema& schema = dataset.schema();
  std::vector<uint8_t> keep(dataset.rows(), 1);
  for (const Dcp& dcp : stages) {
    CheckCompatible(dcp, schema);
    if (dcp.error.kind != ErrorKind::kSelectionBias || dcp.p <= 0.0) continue;
    const auto mask = MatchMask(dcp.pattern, dataset);
    const size_t noise_id = SelectionNoiseId(schema);
    for (size_t r = 0; r < dataset.rows(); ++r) {
      if (mask[r] && Fires(CounterUniform(seed, r, noise_id), dcp.p)) keep[r] = 0;
    }
  }

  Dataset corrupted = dataset;
  std::vector<CellRef> cells;
  for (const Dcp& dcp : stages) {
    if (dcp.error.kind == ErrorKind::kSelectionBias || dcp.p <= 0.0) continue;
    auto mask = MatchMask(dcp.pattern, dataset);
    // Excluded tuples are never observed; skip their attribute corruptions.
    for (size_t r = 0; r < mask.size(); ++r) mask[r] = static_cast<uint8_t>(mask[r] & keep[r]);
    CorruptAttributes(dcp, dataset, mask, seed, corrupted, cells);
  }
  std::sort(cells.begin(), cells.end(), [](const CellRef& a, const CellRef& b) {
    return a.row != b.row ? a.row < b.row : a.attribute < b.attribute;
  });
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  CorruptedDataset result;
  for (size_t r = 0; r < dataset.rows(); ++r) {
    if (keep[r]) result.kept_indices.push_back(r);
  }
  result.dropped_rows = dataset.rows() - result.kept_indices.size();
  result.corrupted_cells = std::move(cells);
  result.dataset = result.dropped_rows == 0 ? std::move(corrupted)
                                            : corrupted.SelectRows(result.kept_indices);
  return result;
}

CorruptedDataset Apply(const Dcp& dcp, const Dataset& dataset, uint64_t seed) {
  return ApplyProcess(std::span<const Dcp>(&dcp, 1), dataset, seed);
}

double ExpectedFraction(const Dcp& dcp, const Dataset& dataset) {
  if (dataset.rows() == 0) return 0.0;
  return dcp.p * static_cast<double>(CountMatches(dcp.pattern, dataset)) /
         static_cast<double>(dataset.rows());
}

Dcp ProjectToBudget(const Dcp& dcp, const Dataset& dataset, double budget) {
  if (!(budget >= 0.0) || budget > 1.0) {
    throw StressError(ErrorCode::kInvalidArgument, "budget must lie in [0, 1]");
  }
  Dcp out = dcp;
  if (budget == 0.0) {
    out.p = 0.0;
    return out;
  }
  const size_t matches = CountMatches(dcp.pattern, dataset);
  const double n = static_cast<double>(dataset.rows());
  if (matches == 0 || dcp.p * static_cast<double>(matches) / n <= budget) return out;
  double p = std::clamp(budget * n / static_cast<double>(matches), 0.0, 1.0);
  // Guard the last ulp so the projected fraction never exceeds the budget.
  while (p > 0.0 && p * static_cast<double>(matches) / n > budget) p = std::nextafter(p, 0.0);
  out.p = p;
  return out;
}

}  // namespace stress
