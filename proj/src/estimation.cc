// Copyright 2026 The refprice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "refprice/estimation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "refprice/error.h"

namespace refprice {

namespace {

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double RegimeBound(const GameConfig& config, Regime regime) {
  return regime == Regime::kLower ? config.lower_bound : config.upper_bound;
}

// p whose regime mean equals m. Lower: (E - m) / (m - A); upper:
// (m - E) / (B - m). Not clamped.
double MeanToP(const GameConfig& config, Regime regime, double m) {
  const double e = config.estimate;
  return regime == Regime::kLower ? (e - m) / (m - config.lower_bound)
                                  : (m - e) / (config.upper_bound - m);
}

// Rounded points this many steps from E or closer use bin probabilities.
constexpr double kBinnedSteps = 64.0;

bool Binned(const BidSample& sample, const GameConfig& config, double y) {
  return sample.resolution > 0.0 &&
         std::abs(y - config.estimate) <= kBinnedSteps * sample.resolution;
}

// Log of the average regime density over the rounding bin of y, clipped to
// the regime's side of E.
double BinnedLogDensity(const GameConfig& config, double y, double h, double p,
                        Regime regime) {
  const double e = config.estimate;
  double lo = y - h / 2.0;
  double hi = y + h / 2.0;
  if (regime == Regime::kLower) {
    hi = std::min(hi, e);
    lo = std::max(lo, config.lower_bound);
  } else {
    lo = std::max(lo, e);
    hi = std::min(hi, config.upper_bound);
  }
  const double mass = RegimeCdf(config, hi, p, regime) - RegimeCdf(config, lo, p, regime);
  return std::log(mass / (hi - lo));
}

// Counts of observations per reasoning level. The level does not depend on
// p, so the likelihood reduces to a weighted sum over distinct levels.
// Binned points are returned separately.
std::map<int, int> LevelCounts(const BidSample& sample, const GameConfig& config,
                               Regime regime, std::vector<double>* binned) {
  std::map<int, int> counts;
  for (double y : sample.deviations) {
    const int level = LevelIndex(config, y, regime);
    if (Binned(sample, config, y)) {
      binned->push_back(y);
    } else {
      ++counts[level];
    }
  }
  return counts;
}

double LevelLogLikelihood(const std::map<int, int>& counts, double width,
                          double p) {
  const double r = 2.0 * (1.0 - p);
  double total = 0.0;
  for (const auto& [level, count] : counts) {
    const int terms = level + 1;
    double sum;
    if (r == 1.0) {
      sum = terms;
    } else if (r == 0.0) {
      sum = 1.0;
    } else {
      sum = std::expm1(terms * std::log1p(r - 1.0)) / (r - 1.0);
    }
    total += count * std::log(p * sum / width);
  }
  return total;
}

}  // namespace

std::pair<BidSample, BidSample> SplitRegimes(const BidSample& sample) {
  BidSample upper;
  BidSample lower;
  upper.resolution = lower.resolution = sample.resolution;
  const bool labelled = sample.tender_ids.size() == sample.deviations.size();
  for (std::size_t i = 0; i < sample.deviations.size(); ++i) {
    BidSample& side = sample.deviations[i] > 0.0 ? upper : lower;
    side.deviations.push_back(sample.deviations[i]);
    if (labelled) side.tender_ids.push_back(sample.tender_ids[i]);
  }
  return {std::move(upper), std::move(lower)};
}

double EstimateQ(const BidSample& sample) {
  if (sample.deviations.empty()) {
    throw Error(ErrorKind::kInvalidInput, "cannot estimate q from an empty sample");
  }
  const auto positive = std::count_if(sample.deviations.begin(),
                                      sample.deviations.end(),
                                      [](double y) { return y > 0.0; });
  return static_cast<double>(positive) / static_cast<double>(sample.size());
}

double LogLikelihood(const BidSample& sample, double p, const GameConfig& config,
                     Regime regime) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "p must be in (0, 1]");
  }
  double total = 0.0;
  for (double y : sample.deviations) {
    // LevelIndex rejects points outside the support.
    LevelIndex(config, y, regime);
    total += Binned(sample, config, y)
                 ? BinnedLogDensity(config, y, sample.resolution, p, regime)
                 : std::log(RegimeDensity(config, y, p, regime));
  }
  return total;
}

MleFit MleP(const BidSample& sample, const GameConfig& config, Regime regime,
            const MleOptions& options) {
  if (sample.deviations.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty regime sample");
  }
  if (!(options.p_lo > 0.0 && options.p_lo < options.p_hi && options.p_hi <= 1.0) ||
      options.grid_points < 3) {
    throw Error(ErrorKind::kInvalidInput, "bad MLE search options");
  }
  std::vector<double> binned;
  const auto counts = LevelCounts(sample, config, regime, &binned);
  const double width = std::abs(RegimeBound(config, regime) - config.estimate);
  auto objective = [&](double p) {
    double total = LevelLogLikelihood(counts, width, p);
    for (double y : binned) {
      total += BinnedLogDensity(config, y, sample.resolution, p, regime);
    }
    return total;
  };

  std::vector<double> grid;
  const int points = options.grid_points;
  for (int i = 0; i < points; ++i) {
    grid.push_back(options.p_lo +
                   (options.p_hi - options.p_lo) * i / static_cast<double>(points - 1));
  }
  // Fixed starting points join the scan.
  for (double start : {0.1, 0.5, 0.9}) {
    if (start > options.p_lo && start < options.p_hi) grid.push_back(start);
  }
  std::sort(grid.begin(), grid.end());

  std::size_t best = 0;
  double best_value = -INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double value = objective(grid[i]);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }

  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > options.tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  MleFit fit{grid[best], best_value};
  for (double candidate : {a, b, (a + b) / 2.0}) {
    const double value = objective(candidate);
    if (value > fit.log_likelihood) fit = {candidate, value};
  }
  return fit;
}

double MomentP(const BidSample& sample, const GameConfig& config, Regime regime) {
  if (sample.deviations.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty regime sample");
  }
  const double m = Mean(sample.deviations);
  const double e = config.estimate;
  const bool inside = regime == Regime::kLower
                          ? config.lower_bound < m && m < e
                          : e < m && m < config.upper_bound;
  if (!inside) {
    throw Error(ErrorKind::kDegenerateSample,
                "regime mean is not strictly inside the support");
  }
  return std::min(MeanToP(config, regime, m), 1.0);
}

ConfidenceInterval MomentConfidenceInterval(const BidSample& sample,
                                            const GameConfig& config,
                                            Regime regime, double alpha) {
  if (sample.size() < 2) {
    throw Error(ErrorKind::kInvalidInput, "need at least two observations");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "alpha must be in (0, 1)");
  }
  const double m = Mean(sample.deviations);
  double ss = 0.0;
  for (double y : sample.deviations) ss += (y - m) * (y - m);
  const double sd = std::sqrt(ss / static_cast<double>(sample.size() - 1));
  if (!(sd > 0.0)) {
    throw Error(ErrorKind::kDegenerateSample, "zero sample variance");
  }
  const boost::math::normal_distribution<double> standard;
  const double z = boost::math::quantile(standard, 1.0 - alpha / 2.0);
  const double half = z * sd / std::sqrt(static_cast<double>(sample.size()));

  auto image = [&](double mean) {
    const double e = config.estimate;
    const double bound = RegimeBound(config, regime);
    // Means at or past the outer bound map to p = 1, at or past E to p = 0.
    if (regime == Regime::kLower ? mean <= bound : mean >= bound) return 1.0;
    if (regime == Regime::kLower ? mean >= e : mean <= e) return 0.0;
    return std::clamp(MeanToP(config, regime, mean), 0.0, 1.0);
  };
  const double at_low = image(m - half);
  const double at_high = image(m + half);
  return {std::min(at_low, at_high), std::max(at_low, at_high)};
}

EstimationResult Estimate(const BidSample& sample, const GameConfig& config,
                          EstimationMethod method, double alpha) {
  EstimationResult result;
  result.q_hat = EstimateQ(sample);
  result.method = method;
  result.alpha = alpha;
  const auto [upper, lower] = SplitRegimes(sample);
  auto fit = [&](const BidSample& part, Regime regime) {
    RegimeEstimate est;
    est.count = static_cast<int>(part.size());
    if (method == EstimationMethod::kMle) {
      const MleFit mle = MleP(part, config, regime);
      est.p_hat = mle.p;
      est.log_likelihood = mle.log_likelihood;
    } else {
      est.p_hat = MomentP(part, config, regime);
      est.log_likelihood = LogLikelihood(part, est.p_hat, config, regime);
    }
    if (part.size() >= 2) {
      try {
        est.ci = MomentConfidenceInterval(part, config, regime, alpha);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kDegenerateSample) throw;
      }
    }
    return est;
  };
  if (!upper.deviations.empty()) result.plus = fit(upper, Regime::kUpper);
  if (!lower.deviations.empty()) result.minus = fit(lower, Regime::kLower);
  return result;
}

}  // namespace refprice
