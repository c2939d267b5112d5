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

#ifndef STRESS_DATASET_H_
#define STRESS_DATASET_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace stress {

enum class AttributeKind { kNumeric, kCategorical };

std::string_view AttributeKindName(AttributeKind kind);

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;

  bool operator==(const Attribute&) const = default;
};

enum class Task { kClassification, kRegression };

// Column layout plus the roles of the label and the optional sensitive
// attribute. Validated on construction from JSON and by Validate().
struct Schema {
  std::vector<Attribute> attributes;
  std::string label;
  std::optional<std::string> sensitive;
  std::optional<std::string> positive_label;

  // Throws StressError(kSchema) on duplicate names or dangling roles.
  void Validate() const;
  // Additionally checks the label kind against the task.
  void ValidateFor(Task task) const;

  std::optional<size_t> Find(std::string_view name) const;
  // Throws StressError(kSchema) for unknown names.
  size_t IndexOf(std::string_view name) const;
  size_t label_index() const { return IndexOf(label); }
  size_t size() const { return attributes.size(); }

  static Schema FromJson(const nlohmann::json& json);
  static Schema Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;

  bool operator==(const Schema&) const = default;
};

// Token table of a categorical column. Codes follow first appearance.
class Vocabulary {
 public:
  int32_t Intern(std::string_view token);
  std::optional<int32_t> Find(std::string_view token) const;
  const std::string& Token(int32_t code) const { return tokens_[static_cast<size_t>(code)]; }
  size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int32_t> index_;
};

inline constexpr int32_t kMissingCode = -1;

// One attribute's cells. Numeric columns mark MISSING with NaN (loaded
// numbers are always finite); categorical columns use kMissingCode.
struct Column {
  AttributeKind kind = AttributeKind::kNumeric;
  std::vector<double> numbers;
  std::vector<int32_t> codes;
  std::shared_ptr<const Vocabulary> vocabulary;

  size_t size() const { return kind == AttributeKind::kNumeric ? numbers.size() : codes.size(); }
  bool IsMissing(size_t row) const {
    return kind == AttributeKind::kNumeric ? std::isnan(numbers[row]) : codes[row] == kMissingCode;
  }
};

// Columnar table. Value semantics: copies are deep for cell storage and
// share the (immutable) vocabularies.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Schema schema, std::vector<Column> columns);

  const Schema& schema() const { return *schema_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return columns_.size(); }

  const Column& column(size_t c) const { return columns_[c]; }
  const Column& column(std::string_view name) const { return columns_[schema_->IndexOf(name)]; }
  Column& mutable_column(size_t c) { return columns_[c]; }

  bool IsMissing(size_t row, size_t col) const { return columns_[col].IsMissing(row); }
  // Cell rendered as it is written to CSV; MISSING renders as "".
  std::string Render(size_t row, size_t col) const;

  // Rows in the given order (indices may repeat).
  Dataset SelectRows(std::span<const size_t> indices) const;

  // Cell-by-cell equality, with MISSING equal to MISSING.
  bool SameCells(const Dataset& other) const;

  // Minimum/maximum of the non-missing values of a numeric column; nullopt
  // when every cell is missing.
  std::optional<std::pair<double, double>> NumericRange(size_t col) const;

 private:
  std::shared_ptr<const Schema> schema_ = std::make_shared<Schema>();
  std::vector<Column> columns_;
  size_t rows_ = 0;
};

struct CsvOptions {
  // Besides the empty string, this token also parses to MISSING.
  std::string missing_token = "?";
};

Dataset ParseCsv(std::string_view text, const Schema& schema, const CsvOptions& options = {});
Dataset LoadCsv(const std::filesystem::path& path, const Schema& schema,
                const CsvOptions& options = {});
std::string FormatCsv(const Dataset& dataset);
void WriteCsv(const Dataset& dataset, const std::filesystem::path& path);

struct SplitResult {
  Dataset train;
  Dataset test;
  std::vector<size_t> train_indices;
  std::vector<size_t> test_indices;
  uint64_t seed = 0;
};

// Shuffles row indices with a seeded Fisher-Yates pass and takes the first
// round(train_fraction * N) as train. Both sides keep source row order.
SplitResult Split(const Dataset& dataset, double train_fraction, uint64_t seed);

// Seeded subsample without replacement of round(fraction * N) rows, in
// source order.
std::vector<size_t> SampleRows(size_t rows, double fraction, uint64_t seed);

// Binary class indicator for a classification label (1 = positive_label).
// MISSING labels map to -1.
std::vector<int> BinaryLabels(const Dataset& dataset);

}  // namespace stress

#endif  // STRESS_DATASET_H_
