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

#ifndef STRESS_ENCODER_H_
#define STRESS_ENCODER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stress/dataset.h"

namespace stress {

enum class CleanerKind { kNone, kMeanImpute, kMedianImpute, kKnnImpute };

struct CleanerSpec {
  CleanerKind kind = CleanerKind::kMeanImpute;
  size_t k = 5;  // knn only
};

std::string_view CleanerKindName(CleanerKind kind);
CleanerKind ParseCleanerKind(std::string_view name);

// Dense column-major feature block.
struct FeatureMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  std::span<const double> column(size_t j) const { return {data.data() + j * rows, rows}; }
  std::span<double> column(size_t j) { return {data.data() + j * rows, rows}; }
  double at(size_t i, size_t j) const { return data[j * rows + i]; }
};

// Feature cells of a dataset re-expressed in the training vocabulary, so
// datasets loaded from separate files encode consistently.
struct AlignedFeatures {
  size_t rows = 0;
  std::vector<std::vector<double>> numeric;  // by attribute index; NaN = missing
  std::vector<std::vector<int32_t>> codes;   // by attribute index; -1 missing, -2 unseen
};

inline constexpr int32_t kUnseenCode = -2;

// Imputation + encoding fitted on training data only. Numeric features are
// imputed and then standardized with the statistics of the imputed training
// column; categorical features are imputed and one-hot encoded over the
// categories seen in training (unseen categories encode as all zeros).
//
// Categorical cells impute from the training mode under mean/median/none and
// from a majority vote of the neighbours under knn.
class FeatureEncoder {
 public:
  static FeatureEncoder Fit(const Dataset& train, const CleanerSpec& cleaner);

  FeatureMatrix Transform(const Dataset& data) const;

  // Imputed feature cells of `data`, before standardization and one-hot.
  AlignedFeatures Impute(const Dataset& data) const;

  size_t feature_count() const { return feature_count_; }
  const std::vector<size_t>& feature_attributes() const { return features_; }

 private:
  struct NumericStats {
    double mean = 0.0;
    double stddev = 1.0;
  };

  AlignedFeatures Align(const Dataset& data) const;
  void ImputeInPlace(AlignedFeatures& cells) const;
  void KnnImpute(AlignedFeatures& cells) const;
  // Row-major standardized numerics (missing -> 0) and filled categorical
  // codes: the coordinates the knn imputer measures distance in.
  void DistanceSpace(const AlignedFeatures& cells, std::vector<double>& numerics,
                     std::vector<int32_t>& categories) const;

  CleanerSpec cleaner_;
  Schema schema_;
  std::vector<std::shared_ptr<const Vocabulary>> vocabularies_;  // by attribute index
  std::vector<size_t> features_;        // attribute indices, label excluded
  std::vector<size_t> numeric_features_;
  std::vector<size_t> categorical_features_;
  std::vector<double> fills_;           // numeric fill, by attribute index
  std::vector<int32_t> modes_;          // categorical fill, by attribute index
  std::vector<NumericStats> observed_;  // raw observed statistics (knn distances)
  std::vector<NumericStats> scaling_;   // post-imputation standardization
  std::vector<std::vector<int32_t>> categories_;  // one-hot codes, by attribute index
  AlignedFeatures donors_;              // knn only
  std::vector<double> donor_numerics_;
  std::vector<int32_t> donor_categories_;
  size_t feature_count_ = 0;
};

}  // namespace stress

#endif  // STRESS_ENCODER_H_
