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

#include "stress/encoder.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "stress/error.h"
#include "stress/kernels.h"

namespace stress {

std::string_view CleanerKindName(CleanerKind kind) {
  switch (kind) {
    case CleanerKind::kNone: return "none";
    case CleanerKind::kMeanImpute: return "mean_impute";
    case CleanerKind::kMedianImpute: return "median_impute";
    case CleanerKind::kKnnImpute: return "knn_impute";
  }
  return "?";
}

CleanerKind ParseCleanerKind(std::string_view name) {
  for (CleanerKind kind : {CleanerKind::kNone, CleanerKind::kMeanImpute, CleanerKind::kMedianImpute,
                           CleanerKind::kKnnImpute}) {
    if (CleanerKindName(kind) == name) return kind;
  }
  throw StressError(ErrorCode::kConfig, "unknown cleaner '" + std::string(name) + "'");
}

namespace {

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

// Mean and population standard deviation of the non-NaN values. A zero or
// undefined spread maps to 1 so standardization is a no-op.
std::pair<double, double> MeanStd(std::span<const double> values) {
  double sum = 0.0;
  size_t n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  if (n == 0) return {0.0, 1.0};
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sq += (v - mean) * (v - mean);
  }
  const double stddev = std::sqrt(sq / static_cast<double>(n));
  return {mean, stddev > 1e-12 ? stddev : 1.0};
}

// Most frequent non-negative code; ties go to the lowest code.
int32_t Mode(std::span<const int32_t> codes) {
  std::map<int32_t, size_t> counts;
  for (int32_t c : codes) {
    if (c >= 0) ++counts[c];
  }
  int32_t best = kMissingCode;
  size_t best_count = 0;
  for (const auto& [code, count] : counts) {
    if (count > best_count) {
      best = code;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

FeatureEncoder FeatureEncoder::Fit(const Dataset& train, const CleanerSpec& cleaner) {
  if (cleaner.kind == CleanerKind::kKnnImpute && cleaner.k == 0) {
    throw StressError(ErrorCode::kInvalidArgument, "knn_impute needs k >= 1");
  }
  FeatureEncoder encoder;
  encoder.cleaner_ = cleaner;
  encoder.schema_ = train.schema();
  const size_t attributes = encoder.schema_.size();
  const size_t label = encoder.schema_.label_index();
  encoder.vocabularies_.resize(attributes);
  encoder.fills_.assign(attributes, 0.0);
  encoder.modes_.assign(attributes, kMissingCode);
  encoder.observed_.resize(attributes);
  encoder.scaling_.resize(attributes);
  encoder.categories_.resize(attributes);
  for (size_t a = 0; a < attributes; ++a) {
    encoder.vocabularies_[a] = train.column(a).vocabulary;
    if (a == label) continue;
    encoder.features_.push_back(a);
    if (train.column(a).kind == AttributeKind::kNumeric) {
      encoder.numeric_features_.push_back(a);
    } else {
      encoder.categorical_features_.push_back(a);
    }
  }

  AlignedFeatures cells = encoder.Align(train);
  for (size_t a : encoder.numeric_features_) {
    const auto [mean, stddev] = MeanStd(cells.numeric[a]);
    encoder.observed_[a] = {mean, stddev};
    if (cleaner.kind == CleanerKind::kMedianImpute) {
      std::vector<double> observed;
      for (double v : cells.numeric[a]) {
        if (!std::isnan(v)) observed.push_back(v);
      }
      encoder.fills_[a] = Median(std::move(observed));
    } else {
      encoder.fills_[a] = mean;
    }
  }
  for (size_t a : encoder.categorical_features_) {
    encoder.modes_[a] = Mode(cells.codes[a]);
    std::vector<int32_t> seen;
    for (int32_t c : cells.codes[a]) {
      if (c >= 0) seen.push_back(c);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    encoder.categories_[a] = std::move(seen);
  }

  if (cleaner.kind == CleanerKind::kKnnImpute) {
    encoder.donors_ = cells;
    encoder.DistanceSpace(encoder.donors_, encoder.donor_numerics_, encoder.donor_categories_);
  }
  encoder.ImputeInPlace(cells);
  for (size_t a : encoder.numeric_features_) {
    const auto [mean, stddev] = MeanStd(cells.numeric[a]);
    encoder.scaling_[a] = {mean, stddev};
  }
  encoder.feature_count_ = encoder.numeric_features_.size();
  for (size_t a : encoder.categorical_features_) encoder.feature_count_ += encoder.categories_[a].size();
  return encoder;
}

AlignedFeatures FeatureEncoder::Align(const Dataset& data) const {
  const Schema& schema = data.schema();
  if (schema.attributes != schema_.attributes) {
    throw StressError(ErrorCode::kSchema, "dataset schema differs from the training schema");
  }
  AlignedFeatures cells;
  cells.rows = data.rows();
  cells.numeric.resize(schema_.size());
  cells.codes.resize(schema_.size());
  for (size_t a : features_) {
    const Column& column = data.column(a);
    if (column.kind == AttributeKind::kNumeric) {
      cells.numeric[a] = column.numbers;
      continue;
    }
    if (column.vocabulary == vocabularies_[a]) {
      cells.codes[a] = column.codes;
      continue;
    }
    std::vector<int32_t> remap(column.vocabulary->size());
    for (size_t code = 0; code < remap.size(); ++code) {
      const auto found = vocabularies_[a]->Find(column.vocabulary->Token(static_cast<int32_t>(code)));
      remap[code] = found ? *found : kUnseenCode;
    }
    cells.codes[a].resize(data.rows());
    for (size_t r = 0; r < data.rows(); ++r) {
      const int32_t code = column.codes[r];
      cells.codes[a][r] = code == kMissingCode ? kMissingCode : remap[static_cast<size_t>(code)];
    }
  }
  return cells;
}

void FeatureEncoder::DistanceSpace(const AlignedFeatures& cells, std::vector<double>& numerics,
                                   std::vector<int32_t>& categories) const {
  const size_t nn = numeric_features_.size();
  const size_t nc = categorical_features_.size();
  numerics.assign(cells.rows * nn, 0.0);
  categories.assign(cells.rows * nc, kMissingCode);
  for (size_t r = 0; r < cells.rows; ++r) {
    for (size_t j = 0; j < nn; ++j) {
      const size_t a = numeric_features_[j];
      const double v = cells.numeric[a][r];
      numerics[r * nn + j] = std::isnan(v) ? 0.0 : (v - observed_[a].mean) / observed_[a].stddev;
    }
    for (size_t j = 0; j < nc; ++j) {
      const size_t a = categorical_features_[j];
      const int32_t c = cells.codes[a][r];
      categories[r * nc + j] = c == kMissingCode ? modes_[a] : c;
    }
  }
}

void FeatureEncoder::KnnImpute(AlignedFeatures& cells) const {
  std::vector<double> numerics;
  std::vector<int32_t> categories;
  DistanceSpace(cells, numerics, categories);
  const size_t nn = numeric_features_.size();
  const size_t nc = categorical_features_.size();
  const size_t donors = donors_.rows;

  std::vector<double> distance(donors);
  std::vector<size_t> candidates;
  candidates.reserve(donors);
  std::vector<size_t> missing_attributes;
  const AlignedFeatures original = cells;
  for (size_t r = 0; r < cells.rows; ++r) {
    missing_attributes.clear();
    for (size_t a : features_) {
      const bool missing = schema_.attributes[a].kind == AttributeKind::kNumeric
                               ? std::isnan(original.numeric[a][r])
                               : original.codes[a][r] == kMissingCode;
      if (missing) missing_attributes.push_back(a);
    }
    if (missing_attributes.empty()) continue;

    const std::span<const double> query(numerics.data() + r * nn, nn);
    for (size_t d = 0; d < donors; ++d) {
      double dist = nn > 0 ? kernels::SquaredDistance(
                                 query, std::span<const double>(donor_numerics_.data() + d * nn, nn))
                           : 0.0;
      for (size_t j = 0; j < nc; ++j) {
        dist += categories[r * nc + j] != donor_categories_[d * nc + j] ? 1.0 : 0.0;
      }
      distance[d] = dist;
    }

    for (size_t a : missing_attributes) {
      const bool numeric = schema_.attributes[a].kind == AttributeKind::kNumeric;
      candidates.clear();
      for (size_t d = 0; d < donors; ++d) {
        const bool observed = numeric ? !std::isnan(donors_.numeric[a][d]) : donors_.codes[a][d] >= 0;
        if (observed) candidates.push_back(d);
      }
      if (candidates.empty()) {
        if (numeric) {
          cells.numeric[a][r] = fills_[a];
        } else {
          cells.codes[a][r] = modes_[a];
        }
        continue;
      }
      const size_t k = std::min(cleaner_.k, candidates.size());
      auto closer = [&](size_t x, size_t y) {
        return distance[x] != distance[y] ? distance[x] < distance[y] : x < y;
      };
      std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                        candidates.end(), closer);
      if (numeric) {
        double sum = 0.0;
        for (size_t i = 0; i < k; ++i) sum += donors_.numeric[a][candidates[i]];
        cells.numeric[a][r] = sum / static_cast<double>(k);
      } else {
        std::vector<int32_t> votes(k);
        for (size_t i = 0; i < k; ++i) votes[i] = donors_.codes[a][candidates[i]];
        cells.codes[a][r] = Mode(votes);
      }
    }
  }
}

void FeatureEncoder::ImputeInPlace(AlignedFeatures& cells) const {
  if (cleaner_.kind == CleanerKind::kKnnImpute) {
    KnnImpute(cells);
    return;
  }
  for (size_t a : numeric_features_) {
    for (double& v : cells.numeric[a]) {
      if (std::isnan(v)) v = fills_[a];
    }
  }
  for (size_t a : categorical_features_) {
    for (int32_t& c : cells.codes[a]) {
      if (c == kMissingCode) c = modes_[a];
    }
  }
}

AlignedFeatures FeatureEncoder::Impute(const Dataset& data) const {
  AlignedFeatures cells = Align(data);
  ImputeInPlace(cells);
  return cells;
}

FeatureMatrix FeatureEncoder::Transform(const Dataset& data) const {
  const AlignedFeatures cells = Impute(data);
  FeatureMatrix matrix;
  matrix.rows = data.rows();
  matrix.cols = feature_count_;
  matrix.data.assign(matrix.rows * matrix.cols, 0.0);
  size_t j = 0;
  for (size_t a : numeric_features_) {
    auto out = matrix.column(j++);
    for (size_t r = 0; r < matrix.rows; ++r) {
      out[r] = (cells.numeric[a][r] - scaling_[a].mean) / scaling_[a].stddev;
    }
  }
  for (size_t a : categorical_features_) {
    const auto& known = categories_[a];
    for (size_t r = 0; r < matrix.rows; ++r) {
      const int32_t code = cells.codes[a][r];
      const auto it = std::lower_bound(known.begin(), known.end(), code);
      if (code >= 0 && it != known.end() && *it == code) {
        matrix.data[(j + static_cast<size_t>(it - known.begin())) * matrix.rows + r] = 1.0;
      }
    }
    j += known.size();
  }
  return matrix;
}

}  // namespace stress
