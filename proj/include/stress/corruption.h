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

#ifndef STRESS_CORRUPTION_H_
#define STRESS_CORRUPTION_H_

// Pattern-gated corruption processes over a Dataset.
//
// A corruption template fixes the error type and the set of attributes its
// selection pattern reads; binding a parameter vector (theta) to it yields a
// concrete process (Dcp): a conjunction of range conditions plus a firing
// probability p. Applying a Dcp draws one counter-based uniform noise value
// per (row, corrupted attribute) and corrupts a row iff the pattern matches
// the clean row and the noise falls below p.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stress/dataset.h"

namespace stress {

// lower <= value <= upper for numeric attributes (either side may be open);
// `equals` for categorical attributes. MISSING never satisfies a condition.
struct RangeCondition {
  std::string attribute;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<std::string> equals;

  bool operator==(const RangeCondition&) const = default;
};

struct Pattern {
  std::vector<RangeCondition> conditions;

  bool operator==(const Pattern&) const = default;
};

enum class ErrorKind { kMissingValue, kLabelError, kSelectionBias };

struct ErrorType {
  ErrorKind kind = ErrorKind::kMissingValue;
  // Missing-value target. Empty means "let the search pick the target".
  std::string target;
  // Label-error class domain, in vocabulary order.
  std::vector<std::string> classes;

  static ErrorType MissingValue(std::string target);
  static ErrorType LabelError(std::vector<std::string> classes);
  static ErrorType SelectionBias();

  // Short tag used in template keys: MV(wage), LE, SB.
  std::string Tag() const;
  bool multiclass() const { return kind == ErrorKind::kLabelError && classes.size() > 2; }

  bool operator==(const ErrorType&) const = default;
};

// Label-error type over the label vocabulary of `dataset`.
ErrorType LabelErrorFor(const Dataset& dataset);

struct ParamDim {
  enum class Kind { kContinuous, kCategorical };

  std::string name;
  Kind kind = Kind::kContinuous;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::string> choices;  // categorical only; theta stores the index
};

// Product of intervals and finite sets.
struct ParameterSpace {
  std::vector<ParamDim> dims;

  bool Contains(std::span<const double> theta) const;
  size_t size() const { return dims.size(); }
};

using Theta = std::vector<double>;

struct CorruptionTemplate {
  ErrorType error;
  // Pattern attributes in schema order.
  std::vector<std::string> pattern_attributes;
  ParameterSpace space;

  // Canonical identity, e.g. "MV(wage)|age,income". Used for dedup,
  // tie-breaking and seed derivation.
  std::string Key() const;
};

// Parameter layout: dim 0 is p in [0, 1]; each numeric pattern attribute
// contributes "<a>.lower" in [min, max] and "<a>.width" in [0, max - min];
// each categorical one contributes "<a>" over its vocabulary; multi-class
// label errors append one weight "q[<class>]" in [0, 1] per class.
CorruptionTemplate MakeTemplate(const Dataset& dataset, ErrorType error,
                                std::vector<std::string> pattern_attributes);

struct Dcp {
  ErrorType error;
  Pattern pattern;
  double p = 0.0;
  // Multi-class label errors: share of the fired mass sent to each class.
  std::vector<double> proportions;

  bool operator==(const Dcp&) const = default;
};

// Throws StressError(kOutOfSpace) when theta leaves the template's box.
Dcp Instantiate(const CorruptionTemplate& tmpl, std::span<const double> theta);

// Checks that every attribute the Dcp touches exists with a compatible kind.
void CheckCompatible(const Dcp& dcp, const Schema& schema);

bool PatternMatches(const Pattern& pattern, const Dataset& dataset, size_t row);
// One byte per row, 1 where the pattern matches.
std::vector<uint8_t> MatchMask(const Pattern& pattern, const Dataset& dataset);
size_t CountMatches(const Pattern& pattern, const Dataset& dataset);

struct CellRef {
  size_t row;  // index into the source dataset
  size_t attribute;

  bool operator==(const CellRef&) const = default;
};

struct CorruptedDataset {
  Dataset dataset;
  std::vector<size_t> kept_indices;
  std::vector<CellRef> corrupted_cells;
  size_t dropped_rows = 0;

  // Rows touched by any stage (altered or dropped).
  size_t CorruptedRowCount() const;
};

// Noise attribute id of the selection node: one past the last attribute.
inline size_t SelectionNoiseId(const Schema& schema) { return schema.size(); }

CorruptedDataset Apply(const Dcp& dcp, const Dataset& dataset, uint64_t seed);

// Stacked processes. Selection stages run first; every pattern reads the
// clean tuple, because corrupted attributes are sinks of the dependency graph.
CorruptedDataset ApplyProcess(std::span<const Dcp> stages, const Dataset& dataset, uint64_t seed);

// p * |{t : pattern(t)}| / N, exact.
double ExpectedFraction(const Dcp& dcp, const Dataset& dataset);

// Rescales p so that ExpectedFraction <= budget, landing on the budget when
// it binds. budget == 0 yields p = 0.
Dcp ProjectToBudget(const Dcp& dcp, const Dataset& dataset, double budget);

}  // namespace stress

#endif  // STRESS_CORRUPTION_H_
