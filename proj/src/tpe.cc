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

#include "stress/tpe.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "stress/error.h"

namespace stress {

void TpeOptions::Validate() const {
  if (n_init < 1) throw StressError(ErrorCode::kConfig, "n_init must be >= 1");
  if (iterations < n_init) throw StressError(ErrorCode::kConfig, "tpe_iterations must be >= n_init");
  if (!(gamma > 0.0 && gamma < 1.0)) throw StressError(ErrorCode::kConfig, "gamma must lie in (0, 1)");
  if (candidate_pool < 1) throw StressError(ErrorCode::kConfig, "candidate_pool must be >= 1");
  if (repeats < 1) throw StressError(ErrorCode::kConfig, "repeats must be >= 1");
}

Theta SampleUniform(const ParameterSpace& space, Rng& rng) {
  Theta theta(space.size());
  for (size_t d = 0; d < space.size(); ++d) {
    const ParamDim& dim = space.dims[d];
    if (dim.kind == ParamDim::Kind::kCategorical) {
      theta[d] = static_cast<double>(rng.UniformIndex(dim.choices.size()));
    } else {
      theta[d] = dim.upper > dim.lower ? rng.Uniform(dim.lower, dim.upper) : dim.lower;
      theta[d] = std::clamp(theta[d], dim.lower, dim.upper);
    }
  }
  return theta;
}

namespace {

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Parzen estimator of one continuous dimension: truncated Gaussians at the
// observations mixed with a uniform prior, every component weighted equally.
class ContinuousDensity {
 public:
  ContinuousDensity(std::vector<double> points, double lower, double upper)
      : points_(std::move(points)), lower_(lower), upper_(upper) {
    const double n = static_cast<double>(points_.size());
    double mean = 0.0;
    for (double x : points_) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : points_) var += (x - mean) * (x - mean);
    const double stddev = std::sqrt(var / n);
    bandwidth_ = std::max((upper_ - lower_) / 20.0, stddev * std::pow(n, -0.2));
    mass_.resize(points_.size());
    for (size_t i = 0; i < points_.size(); ++i) {
      mass_[i] = NormalCdf((upper_ - points_[i]) / bandwidth_) -
                 NormalCdf((lower_ - points_[i]) / bandwidth_);
      mass_[i] = std::max(mass_[i], 1e-300);
    }
  }

  double LogPdf(double x) const {
    double sum = 1.0 / (upper_ - lower_);
    for (size_t i = 0; i < points_.size(); ++i) {
      const double z = (x - points_[i]) / bandwidth_;
      sum += std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * bandwidth_ * mass_[i]);
    }
    return std::log(sum / static_cast<double>(points_.size() + 1));
  }

  double Sample(Rng& rng) const {
    const size_t k = rng.UniformIndex(points_.size() + 1);
    if (k == points_.size()) return rng.Uniform(lower_, upper_);
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double x = rng.Normal(points_[k], bandwidth_);
      if (x >= lower_ && x <= upper_) return x;
    }
    return std::clamp(points_[k], lower_, upper_);
  }

 private:
  std::vector<double> points_;
  double lower_;
  double upper_;
  double bandwidth_ = 1.0;
  std::vector<double> mass_;
};

// Add-one smoothed frequencies over a finite domain.
class CategoricalDensity {
 public:
  CategoricalDensity(const std::vector<double>& points, size_t choices) : weights_(choices, 1.0) {
    for (double x : points) weights_[static_cast<size_t>(x)] += 1.0;
    total_ = static_cast<double>(points.size() + choices);
  }

  double LogPdf(double x) const { return std::log(weights_[static_cast<size_t>(x)] / total_); }

  double Sample(Rng& rng) const {
    double u = rng.Uniform01() * total_;
    for (size_t c = 0; c < weights_.size(); ++c) {
      if (u < weights_[c]) return static_cast<double>(c);
      u -= weights_[c];
    }
    return static_cast<double>(weights_.size() - 1);
  }

 private:
  std::vector<double> weights_;
  double total_;
};

// Per-dimension densities of one observation group; degenerate continuous
// dimensions (zero-width boxes) are pinned to their single value.
class GroupDensity {
 public:
  GroupDensity(const std::vector<const Trial*>& trials, const ParameterSpace& space) : space_(space) {
    for (size_t d = 0; d < space.size(); ++d) {
      std::vector<double> points;
      points.reserve(trials.size());
      for (const Trial* t : trials) points.push_back(t->theta[d]);
      const ParamDim& dim = space.dims[d];
      if (dim.kind == ParamDim::Kind::kCategorical) {
        categorical_.emplace_back(CategoricalDensity(points, dim.choices.size()));
        continuous_.emplace_back(std::nullopt);
      } else {
        categorical_.emplace_back(std::nullopt);
        if (dim.upper > dim.lower) {
          continuous_.emplace_back(ContinuousDensity(std::move(points), dim.lower, dim.upper));
        } else {
          continuous_.emplace_back(std::nullopt);
        }
      }
    }
  }

  double LogPdf(std::span<const double> theta) const {
    double sum = 0.0;
    for (size_t d = 0; d < space_.size(); ++d) {
      if (categorical_[d]) sum += categorical_[d]->LogPdf(theta[d]);
      if (continuous_[d]) sum += continuous_[d]->LogPdf(theta[d]);
    }
    return sum;
  }

  Theta Sample(Rng& rng) const {
    Theta theta(space_.size());
    for (size_t d = 0; d < space_.size(); ++d) {
      if (categorical_[d]) {
        theta[d] = categorical_[d]->Sample(rng);
      } else if (continuous_[d]) {
        theta[d] = continuous_[d]->Sample(rng);
      } else {
        theta[d] = space_.dims[d].lower;
      }
    }
    return theta;
  }

 private:
  const ParameterSpace& space_;
  std::vector<std::optional<CategoricalDensity>> categorical_;
  std::vector<std::optional<ContinuousDensity>> continuous_;
};

struct HistorySplit {
  std::vector<const Trial*> good;
  std::vector<const Trial*> bad;
};

// Successful trials ordered by psi (stable), cut at the gamma quantile.
std::optional<HistorySplit> SplitHistory(std::span<const Trial> history, const TpeOptions& options) {
  std::vector<const Trial*> ok;
  for (const Trial& t : history) {
    if (!t.failed && std::isfinite(t.psi)) ok.push_back(&t);
  }
  if (ok.size() < options.n_init) return std::nullopt;
  std::stable_sort(ok.begin(), ok.end(), [](const Trial* a, const Trial* b) { return a->psi < b->psi; });
  const auto n_good = std::max<size_t>(
      1, static_cast<size_t>(std::ceil(options.gamma * static_cast<double>(ok.size()))));
  if (n_good >= ok.size()) return std::nullopt;
  HistorySplit split;
  split.good.assign(ok.begin(), ok.begin() + static_cast<std::ptrdiff_t>(n_good));
  split.bad.assign(ok.begin() + static_cast<std::ptrdiff_t>(n_good), ok.end());
  return split;
}

}  // namespace

std::optional<double> TpeLogRatio(std::span<const Trial> history, const ParameterSpace& space,
                                  const TpeOptions& options, std::span<const double> theta) {
  const auto split = SplitHistory(history, options);
  if (!split) return std::nullopt;
  const GroupDensity g(split->good, space);
  const GroupDensity l(split->bad, space);
  return g.LogPdf(theta) - l.LogPdf(theta);
}

Theta TpeSuggest(std::span<const Trial> history, const ParameterSpace& space,
                 const TpeOptions& options, Rng& rng) {
  const auto split = SplitHistory(history, options);
  if (!split) return SampleUniform(space, rng);
  const GroupDensity g(split->good, space);
  const GroupDensity l(split->bad, space);
  Theta best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < options.candidate_pool; ++i) {
    Theta candidate = g.Sample(rng);
    const double score = g.LogPdf(candidate) - l.LogPdf(candidate);
    if (best.empty() || score > best_score) {
      best_score = score;
      best = std::move(candidate);
    }
  }
  return best;
}

Theta ThetaOf(const CorruptionTemplate& tmpl, const Dcp& dcp) {
  const ParameterSpace& space = tmpl.space;
  Theta theta(space.size(), 0.0);
  theta[0] = std::clamp(dcp.p, 0.0, 1.0);
  size_t d = 1;
  for (const auto& name : tmpl.pattern_attributes) {
    const auto it = std::find_if(dcp.pattern.conditions.begin(), dcp.pattern.conditions.end(),
                                 [&](const RangeCondition& c) { return c.attribute == name; });
    if (it == dcp.pattern.conditions.end()) {
      throw StressError(ErrorCode::kSchema, "process has no condition on '" + name + "'");
    }
    const ParamDim& dim = space.dims[d];
    if (dim.kind == ParamDim::Kind::kCategorical) {
      const auto pos = std::find(dim.choices.begin(), dim.choices.end(), it->equals.value_or(""));
      if (pos == dim.choices.end()) {
        throw StressError(ErrorCode::kOutOfSpace, "value of '" + name + "' is not in the domain");
      }
      theta[d] = static_cast<double>(pos - dim.choices.begin());
      d += 1;
    } else {
      const double lower = std::clamp(it->lower.value_or(dim.lower), dim.lower, dim.upper);
      const double upper = it->upper.value_or(dim.lower + space.dims[d + 1].upper);
      theta[d] = lower;
      theta[d + 1] = std::clamp(upper - lower, 0.0, space.dims[d + 1].upper);
      d += 2;
    }
  }
  for (size_t k = 0; k < dcp.proportions.size() && d + k < space.size(); ++k) {
    theta[d + k] = std::clamp(dcp.proportions[k], 0.0, 1.0);
  }
  return theta;
}

TpeResult TpeRun(const CorruptionTemplate& tmpl, const Dataset& data, double budget,
                 const Evaluator& evaluate, const TpeOptions& options, uint64_t seed,
                 std::span<const Trial> prior, std::span<const Theta> initial) {
  options.Validate();
  Rng rng(seed);
  std::vector<Trial> history(prior.begin(), prior.end());
  TpeResult result;
  result.best.psi = std::numeric_limits<double>::infinity();
  result.best.failed = true;
  for (size_t it = 0; it < options.iterations; ++it) {
    const auto start = std::chrono::steady_clock::now();
    Trial trial;
    trial.theta = it < initial.size() ? initial[it] : TpeSuggest(history, tmpl.space, options, rng);
    trial.dcp = ProjectToBudget(Instantiate(tmpl, trial.theta), data, budget);
    trial.theta[0] = trial.dcp.p;
    try {
      double sum = 0.0;
      for (uint32_t r = 0; r < options.repeats; ++r) sum += evaluate(trial.dcp, r);
      trial.psi = sum / static_cast<double>(options.repeats);
      if (std::isnan(trial.psi)) throw StressError(ErrorCode::kMetric, "objective is NaN");
    } catch (const std::exception&) {
      trial.psi = std::numeric_limits<double>::infinity();
      trial.failed = true;
    }
    trial.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!trial.failed && (result.best.failed || trial.psi < result.best.psi)) result.best = trial;
    if (result.trials.empty() && trial.failed && result.best.failed) result.best = trial;
    history.push_back(trial);
    result.trials.push_back(std::move(trial));
  }
  return result;
}

}  // namespace stress
