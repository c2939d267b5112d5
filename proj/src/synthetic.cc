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

#include "stress/synthetic.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "stress/error.h"
#include "stress/rng.h"

namespace stress {
namespace {

class TableBuilder {
 public:
  explicit TableBuilder(Schema schema) : schema_(std::move(schema)) {
    for (const Attribute& a : schema_.attributes) {
      Column column;
      column.kind = a.kind;
      columns_.push_back(std::move(column));
      vocabularies_.push_back(std::make_shared<Vocabulary>());
    }
  }

  // Fixes the code order of a categorical column.
  void Domain(size_t col, const std::vector<std::string>& tokens) {
    for (const auto& t : tokens) vocabularies_[col]->Intern(t);
  }

  void Number(size_t col, double v) { columns_[col].numbers.push_back(v); }
  void Token(size_t col, std::string_view token) {
    columns_[col].codes.push_back(vocabularies_[col]->Intern(token));
  }

  Dataset Build() {
    for (size_t c = 0; c < columns_.size(); ++c) {
      if (columns_[c].kind == AttributeKind::kCategorical) columns_[c].vocabulary = vocabularies_[c];
    }
    return Dataset(schema_, std::move(columns_));
  }

 private:
  Schema schema_;
  std::vector<Column> columns_;
  std::vector<std::shared_ptr<Vocabulary>> vocabularies_;
};

size_t Pick(Rng& rng, std::initializer_list<double> weights) {
  double u = rng.Uniform01();
  size_t i = 0;
  for (double w : weights) {
    if (u < w) return i;
    u -= w;
    ++i;
  }
  return i - 1;
}

}  // namespace

Dataset AdultLike(size_t rows, uint64_t seed) {
  Schema schema;
  schema.attributes = {{"age", AttributeKind::kNumeric},           {"workclass", AttributeKind::kCategorical},
                       {"education_num", AttributeKind::kNumeric}, {"marital", AttributeKind::kCategorical},
                       {"race", AttributeKind::kCategorical},      {"sex", AttributeKind::kCategorical},
                       {"hours", AttributeKind::kNumeric},         {"income", AttributeKind::kCategorical}};
  schema.label = "income";
  schema.sensitive = "sex";
  schema.positive_label = ">50K";
  const std::vector<std::string> workclass = {"Private", "Self-emp", "Gov", "Without-pay"};
  const std::vector<std::string> marital = {"Married", "Never-married", "Divorced"};
  const std::vector<std::string> race = {"White", "Black", "Other"};
  const std::vector<std::string> sex = {"Male", "Female"};

  TableBuilder table(schema);
  table.Domain(1, workclass);
  table.Domain(3, marital);
  table.Domain(4, race);
  table.Domain(5, sex);
  table.Domain(7, {"<=50K", ">50K"});
  Rng rng(seed);
  for (size_t r = 0; r < rows; ++r) {
    const double age = std::clamp(std::round(rng.Normal(40, 12)), 17.0, 90.0);
    const double edu = std::clamp(std::round(rng.Normal(10, 2.5)), 1.0, 16.0);
    const double hours = std::clamp(std::round(rng.Normal(40, 10)), 1.0, 99.0);
    const size_t w = Pick(rng, {0.70, 0.12, 0.13, 0.05});
    const size_t m = Pick(rng, {0.45, 0.35, 0.20});
    const size_t k = Pick(rng, {0.80, 0.12, 0.08});
    const size_t s = Pick(rng, {0.66, 0.34});
    const double logit = -1.85 + 1.6 * (edu - 10) / 2.5 + 0.5 * (m == 0) + 0.3 * (hours - 40) / 10 +
                         0.25 * (age - 40) / 12 + 0.2 * (s == 0) + 0.2 * (w == 1);
    const bool positive = rng.Uniform01() < 1.0 / (1.0 + std::exp(-logit));
    table.Number(0, age);
    table.Token(1, workclass[w]);
    table.Number(2, edu);
    table.Token(3, marital[m]);
    table.Token(4, race[k]);
    table.Token(5, sex[s]);
    table.Number(6, hours);
    table.Token(7, positive ? ">50K" : "<=50K");
  }
  return table.Build();
}

Dataset Planted(size_t rows, uint64_t seed) {
  Schema schema;
  schema.attributes = {{"A", AttributeKind::kCategorical}, {"B", AttributeKind::kCategorical},
                       {"C", AttributeKind::kCategorical}, {"D", AttributeKind::kCategorical},
                       {"y", AttributeKind::kCategorical}};
  schema.label = "y";
  schema.positive_label = "pos";
  TableBuilder table(schema);
  table.Domain(0, {"a0", "a1", "a2"});
  table.Domain(1, {"b0", "b1", "b2"});
  table.Domain(2, {"c0", "c1", "c2"});
  table.Domain(3, {"d0", "d1"});
  table.Domain(4, {"neg", "pos"});
  Rng rng(seed);
  const double rate[3] = {0.85, 0.5, 0.2};
  for (size_t r = 0; r < rows; ++r) {
    const size_t a = Pick(rng, {0.4, 0.35, 0.25});
    table.Token(0, "a" + std::to_string(a));
    table.Token(1, "b" + std::to_string(rng.UniformIndex(3)));
    table.Token(2, "c" + std::to_string(rng.UniformIndex(3)));
    table.Token(3, "d" + std::to_string(rng.UniformIndex(2)));
    table.Token(4, rng.Uniform01() < rate[a] ? "pos" : "neg");
  }
  return table.Build();
}

Dataset RegressionLike(size_t rows, uint64_t seed) {
  Schema schema;
  schema.attributes = {{"x1", AttributeKind::kNumeric},
                       {"x2", AttributeKind::kNumeric},
                       {"x3", AttributeKind::kNumeric},
                       {"g", AttributeKind::kCategorical},
                       {"y", AttributeKind::kNumeric}};
  schema.label = "y";
  TableBuilder table(schema);
  table.Domain(3, {"g0", "g1"});
  Rng rng(seed);
  for (size_t r = 0; r < rows; ++r) {
    const double x1 = rng.Normal(0, 1);
    const double x2 = rng.Normal(0, 1);
    const double x3 = rng.Normal(0, 1);
    const bool g1 = rng.Uniform01() < 0.5;
    table.Number(0, x1);
    table.Number(1, x2);
    table.Number(2, x3);
    table.Token(3, g1 ? "g1" : "g0");
    table.Number(4, 2 * x1 - x2 + 0.5 * x3 + (g1 ? 1.0 : 0.0) + rng.Normal(0, 1));
  }
  return table.Build();
}

Dataset Generate(std::string_view kind, size_t rows, uint64_t seed) {
  if (kind == "adult_like") return AdultLike(rows, seed);
  if (kind == "planted") return Planted(rows, seed);
  if (kind == "regression") return RegressionLike(rows, seed);
  throw StressError(ErrorCode::kInvalidArgument, "unknown generator '" + std::string(kind) + "'");
}

}  // namespace stress
