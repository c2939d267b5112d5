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

#include "stress/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "stress/error.h"
#include "stress/rng.h"

namespace stress {

std::string_view AttributeKindName(AttributeKind kind) {
  return kind == AttributeKind::kNumeric ? "numeric" : "categorical";
}

void Schema::Validate() const {
  if (attributes.empty()) throw StressError(ErrorCode::kSchema, "schema has no attributes");
  std::set<std::string> seen;
  for (const auto& attribute : attributes) {
    if (attribute.name.empty()) throw StressError(ErrorCode::kSchema, "empty attribute name");
    if (!seen.insert(attribute.name).second) {
      throw StressError(ErrorCode::kSchema, "duplicate attribute name '" + attribute.name + "'");
    }
  }
  if (!Find(label)) throw StressError(ErrorCode::kSchema, "label '" + label + "' is not declared");
  if (sensitive && !Find(*sensitive)) {
    throw StressError(ErrorCode::kSchema, "sensitive attribute '" + *sensitive + "' is not declared");
  }
  if (sensitive && *sensitive == label) {
    throw StressError(ErrorCode::kSchema, "sensitive attribute cannot be the label");
  }
}

void Schema::ValidateFor(Task task) const {
  Validate();
  const AttributeKind kind = attributes[IndexOf(label)].kind;
  if (task == Task::kClassification) {
    if (kind != AttributeKind::kCategorical) {
      throw StressError(ErrorCode::kSchema, "classification requires a categorical label");
    }
    if (!positive_label) {
      throw StressError(ErrorCode::kSchema, "classification requires positive_label");
    }
  } else if (kind != AttributeKind::kNumeric) {
    throw StressError(ErrorCode::kSchema, "regression requires a numeric label");
  }
}

std::optional<size_t> Schema::Find(std::string_view name) const {
  for (size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  return std::nullopt;
}

size_t Schema::IndexOf(std::string_view name) const {
  if (auto index = Find(name)) return *index;
  throw StressError(ErrorCode::kSchema, "unknown attribute '" + std::string(name) + "'");
}

Schema Schema::FromJson(const nlohmann::json& json) {
  Schema schema;
  try {
    for (const auto& entry : json.at("attributes")) {
      Attribute attribute;
      attribute.name = entry.at("name").get<std::string>();
      const auto kind = entry.at("kind").get<std::string>();
      if (kind == "numeric") {
        attribute.kind = AttributeKind::kNumeric;
      } else if (kind == "categorical") {
        attribute.kind = AttributeKind::kCategorical;
      } else {
        throw StressError(ErrorCode::kSchema, "unknown attribute kind '" + kind + "'");
      }
      schema.attributes.push_back(std::move(attribute));
    }
    schema.label = json.at("label").get<std::string>();
    if (json.contains("sensitive") && !json["sensitive"].is_null()) {
      schema.sensitive = json["sensitive"].get<std::string>();
    }
    if (json.contains("positive_label") && !json["positive_label"].is_null()) {
      const auto& positive = json["positive_label"];
      schema.positive_label = positive.is_string() ? positive.get<std::string>() : positive.dump();
    }
  } catch (const nlohmann::json::exception& e) {
    throw StressError(ErrorCode::kSchema, std::string("malformed schema: ") + e.what());
  }
  schema.Validate();
  return schema;
}

Schema Schema::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StressError(ErrorCode::kIo, "cannot open schema " + path.string());
  nlohmann::json json;
  try {
    in >> json;
  } catch (const nlohmann::json::exception& e) {
    throw StressError(ErrorCode::kSchema, "schema " + path.string() + ": " + e.what());
  }
  return FromJson(json);
}

nlohmann::json Schema::ToJson() const {
  nlohmann::ordered_json out;
  out["attributes"] = nlohmann::ordered_json::array();
  for (const auto& attribute : attributes) {
    out["attributes"].push_back(
        {{"name", attribute.name}, {"kind", std::string(AttributeKindName(attribute.kind))}});
  }
  out["label"] = label;
  out["sensitive"] = sensitive ? nlohmann::ordered_json(*sensitive) : nlohmann::ordered_json();
  out["positive_label"] =
      positive_label ? nlohmann::ordered_json(*positive_label) : nlohmann::ordered_json();
  return out;
}

int32_t Vocabulary::Intern(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  const auto code = static_cast<int32_t>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), code);
  return code;
}

std::optional<int32_t> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Dataset::Dataset(Schema schema, std::vector<Column> columns)
    : schema_(std::make_shared<const Schema>(std::move(schema))), columns_(std::move(columns)) {
  if (columns_.size() != schema_->size()) {
    throw StressError(ErrorCode::kSchema, "column count does not match schema");
  }
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].kind != schema_->attributes[c].kind || columns_[c].size() != rows_) {
      throw StressError(ErrorCode::kSchema, "column '" + schema_->attributes[c].name +
                                                "' has the wrong kind or length");
    }
    if (columns_[c].kind == AttributeKind::kCategorical && !columns_[c].vocabulary) {
      columns_[c].vocabulary = std::make_shared<const Vocabulary>();
    }
  }
}

std::string Dataset::Render(size_t row, size_t col) const {
  const Column& column = columns_[col];
  if (column.IsMissing(row)) return {};
  if (column.kind == AttributeKind::kCategorical) return column.vocabulary->Token(column.codes[row]);
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), column.numbers[row]);
  return std::string(buffer, result.ptr);
}

Dataset Dataset::SelectRows(std::span<const size_t> indices) const {
  Dataset out;
  out.schema_ = schema_;
  out.rows_ = indices.size();
  out.columns_.reserve(columns_.size());
  for (const Column& column : columns_) {
    Column selected;
    selected.kind = column.kind;
    selected.vocabulary = column.vocabulary;
    if (column.kind == AttributeKind::kNumeric) {
      selected.numbers.reserve(indices.size());
      for (size_t i : indices) selected.numbers.push_back(column.numbers[i]);
    } else {
      selected.codes.reserve(indices.size());
      for (size_t i : indices) selected.codes.push_back(column.codes[i]);
    }
    out.columns_.push_back(std::move(selected));
  }
  return out;
}

bool Dataset::SameCells(const Dataset& other) const {
  if (rows_ != other.rows_ || !(schema() == other.schema())) return false;
  for (size_t c = 0; c < columns_.size(); ++c) {
    const Column& a = columns_[c];
    const Column& b = other.columns_[c];
    for (size_t r = 0; r < rows_; ++r) {
      if (a.IsMissing(r) != b.IsMissing(r)) return false;
      if (a.IsMissing(r)) continue;
      if (a.kind == AttributeKind::kNumeric) {
        if (a.numbers[r] != b.numbers[r]) return false;
      } else if (a.vocabulary->Token(a.codes[r]) != b.vocabulary->Token(b.codes[r])) {
        return false;
      }
    }
  }
  return true;
}

std::optional<std::pair<double, double>> Dataset::NumericRange(size_t col) const {
  const Column& column = columns_[col];
  std::optional<std::pair<double, double>> range;
  for (double v : column.numbers) {
    if (std::isnan(v)) continue;
    if (!range) {
      range = {v, v};
    } else {
      range->first = std::min(range->first, v);
      range->second = std::max(range->second, v);
    }
  }
  return range;
}

namespace {

void ShuffleIndices(std::vector<size_t>& indices, uint64_t seed) {
  Rng rng(seed);
  for (size_t i = indices.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.UniformIndex(i));
    std::swap(indices[i - 1], indices[j]);
  }
}

}  // namespace

SplitResult Split(const Dataset& dataset, double train_fraction, uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw StressError(ErrorCode::kInvalidArgument, "train_fraction must lie in (0, 1)");
  }
  const size_t n = dataset.rows();
  if (n < 2) throw StressError(ErrorCode::kDatasetTooSmall, "split needs at least 2 rows");
  const auto train_rows = static_cast<size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (train_rows == 0 || train_rows == n) {
    throw StressError(ErrorCode::kDatasetTooSmall, "split would leave one side empty");
  }
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  ShuffleIndices(order, seed);

  SplitResult result;
  result.seed = seed;
  result.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_rows));
  result.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(train_rows), order.end());
  std::sort(result.train_indices.begin(), result.train_indices.end());
  std::sort(result.test_indices.begin(), result.test_indices.end());
  result.train = dataset.SelectRows(result.train_indices);
  result.test = dataset.SelectRows(result.test_indices);
  return result;
}

std::vector<size_t> SampleRows(size_t rows, double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw StressError(ErrorCode::kInvalidArgument, "sample fraction must lie in (0, 1]");
  }
  std::vector<size_t> order(rows);
  for (size_t i = 0; i < rows; ++i) order[i] = i;
  if (fraction == 1.0) return order;
  ShuffleIndices(order, seed);
  const auto keep = static_cast<size_t>(std::llround(fraction * static_cast<double>(rows)));
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<int> BinaryLabels(const Dataset& dataset) {
  const Schema& schema = dataset.schema();
  const Column& label = dataset.column(schema.label_index());
  if (label.kind != AttributeKind::kCategorical || !schema.positive_label) {
    throw StressError(ErrorCode::kSchema, "binary labels need a categorical label with positive_label");
  }
  const auto positive = label.vocabulary->Find(*schema.positive_label);
  std::vector<int> out(dataset.rows());
  for (size_t r = 0; r < dataset.rows(); ++r) {
    if (label.codes[r] == kMissingCode) {
      out[r] = -1;
    } else {
      out[r] = (positive && label.codes[r] == *positive) ? 1 : 0;
    }
  }
  return out;
}

}  // namespace stress
