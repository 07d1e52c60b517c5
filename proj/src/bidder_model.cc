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

#include "refprice/bidder_model.h"

#include <algorithm>
#include <cmath>

#include "refprice/error.h"

namespace refprice {

namespace {

double RegimeWidth(const GameConfig& config, Regime regime) {
  return regime == Regime::kLower ? config.estimate - config.lower_bound
                                   : config.upper_bound - config.estimate;
}

// Distance of the n-th barrier from E.
double BarrierOffset(double width, int n) { return std::ldexp(width, -n); }

// sum_{n=0}^{terms-1} r^n, accurate near r == 1 where the closed form
// (1 - r^terms) / (1 - r) cancels.
double GeometricSum(double r, int terms) {
  if (r == 1.0) return terms;
  if (r == 0.0) return 1.0;
  return std::expm1(terms * std::log1p(r - 1.0)) / (r - 1.0);
}

void CheckP(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "continuation parameter must be in (0, 1]");
  }
}

bool InSupport(const GameConfig& config, double y, Regime regime) {
  return regime == Regime::kLower
             ? config.lower_bound <= y && y <= config.estimate
             : config.estimate <= y && y <= config.upper_bound;
}

}  // namespace

void BidderModelParams::Validate() const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "q must be in [0, 1]");
  }
  CheckP(p_plus);
  CheckP(p_minus);
}

int LevelIndex(const GameConfig& config, double y, Regime regime) {
  if (!InSupport(config, y, regime)) {
    throw Error(ErrorKind::kInvalidInput, "price outside the regime support");
  }
  const double width = RegimeWidth(config, regime);
  const double distance = std::abs(y - config.estimate);
  if (distance == 0.0) return kMaxLevel;
  int n = static_cast<int>(std::clamp(std::floor(std::log2(width / distance)),
                                      0.0, static_cast<double>(kMaxLevel)));
  // log2 can land one off near a barrier; settle on exact comparisons.
  const double e = config.estimate;
  auto inside = [&](int level) {
    const double offset = BarrierOffset(width, level);
    return regime == Regime::kLower ? y >= e - offset : y <= e + offset;
  };
  while (n < kMaxLevel && inside(n + 1)) ++n;
  while (n > 0 && !inside(n)) --n;
  return n;
}

double RegimeDensity(const GameConfig& config, double y, double p,
                     Regime regime) {
  CheckP(p);
  if (!InSupport(config, y, regime)) return 0.0;
  const int level = LevelIndex(config, y, regime);
  const double width = RegimeWidth(config, regime);
  // sum_{n <= level} p (1 - p)^n 2^n / width; (level + 1) / (2 width) at p = 1/2.
  return p * GeometricSum(2.0 * (1.0 - p), level + 1) / width;
}

double RegimeCdf(const GameConfig& config, double y, double p, Regime regime) {
  CheckP(p);
  const double e = config.estimate;
  if (regime == Regime::kLower) {
    if (y < config.lower_bound) return 0.0;
    if (y >= e) return 1.0;
    // Levels 0..iota each contribute p (1-p)^n (y - A_n) / (E - A_n).
    const int level = LevelIndex(config, y, regime);
    return -std::expm1((level + 1) * std::log1p(-p)) -
           (e - y) * RegimeDensity(config, y, p, regime);
  }
  if (y <= e) return 0.0;
  if (y >= config.upper_bound) return 1.0;
  const int level = LevelIndex(config, y, regime);
  return std::exp((level + 1) * std::log1p(-p)) +
         (y - e) * RegimeDensity(config, y, p, regime);
}

double Density(const BidderModelParams& params, const GameConfig& config,
               double y) {
  params.Validate();
  if (y < config.lower_bound || y > config.upper_bound) return 0.0;
  if (y <= config.estimate) {
    return (1.0 - params.q) *
           RegimeDensity(config, y, params.p_minus, Regime::kLower);
  }
  return params.q * RegimeDensity(config, y, params.p_plus, Regime::kUpper);
}

double Cdf(const BidderModelParams& params, const GameConfig& config, double y) {
  params.Validate();
  if (y < config.estimate) {
    return (1.0 - params.q) * RegimeCdf(config, y, params.p_minus, Regime::kLower);
  }
  return (1.0 - params.q) +
         params.q * RegimeCdf(config, y, params.p_plus, Regime::kUpper);
}

Moments RegimeMoments(const GameConfig& config, double p, Regime regime) {
  CheckP(p);
  const double e = config.estimate;
  const double bound =
      regime == Regime::kLower ? config.lower_bound : config.upper_bound;
  const double width = bound - e;
  Moments m;
  if (p == 1.0) {
    // Single uniform level; the general forms agree up to rounding.
    m.mean = (e + bound) / 2.0;
    m.variance = width * width / 12.0;
    return m;
  }
  m.mean = (e + p * bound) / (1.0 + p);
  m.variance = p * (4.0 - p * (1.0 - p)) * width * width /
               (3.0 * (3.0 + p) * (1.0 + p) * (1.0 + p));
  return m;
}

Moments MixtureMoments(const BidderModelParams& params,
                       const GameConfig& config) {
  params.Validate();
  const Moments up = RegimeMoments(config, params.p_plus, Regime::kUpper);
  const Moments down = RegimeMoments(config, params.p_minus, Regime::kLower);
  const double q = params.q;
  Moments m;
  m.mean = q * up.mean + (1.0 - q) * down.mean;
  // Written as within + between variance to avoid cancellation.
  m.variance = q * up.variance + (1.0 - q) * down.variance +
               q * (1.0 - q) * (up.mean - down.mean) * (up.mean - down.mean);
  return m;
}

double PrintedMixtureVariance(const BidderModelParams& params,
                              const GameConfig& config) {
  params.Validate();
  const Moments up = RegimeMoments(config, params.p_plus, Regime::kUpper);
  const Moments down = RegimeMoments(config, params.p_minus, Regime::kLower);
  const double q = params.q;
  const double up2 = up.variance + up.mean * up.mean;
  const double down2 = down.variance + down.mean * down.mean;
  const double mean = q * up.mean + (1.0 - q) * down.mean;
  return q * up2 + (1.0 - q) * down2 + q * (1.0 - q) * up.mean * down.mean -
         mean * mean;
}

double ExpectedReferencePrice(const BidderModelParams& params,
                              const GameConfig& config) {
  return (config.estimate + MixtureMoments(params, config).mean) / 2.0;
}

int SampleLevel(double p, Rng& rng) {
  CheckP(p);
  if (p == 1.0) return 0;
  std::geometric_distribution<int> depth(p);
  return std::min(depth(rng), kMaxLevel);
}

double SampleBid(const BidderModelParams& params, const GameConfig& config,
                 Rng& rng) {
  params.Validate();
  std::bernoulli_distribution upper(params.q);
  const Regime regime = upper(rng) ? Regime::kUpper : Regime::kLower;
  const int level = SampleLevel(params.p(regime), rng);
  const double offset = BarrierOffset(RegimeWidth(config, regime), level);
  const double e = config.estimate;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  return regime == Regime::kLower ? e - offset * u : e + offset * u;
}

double SampleBid(const BidderModelParams& params, const GameConfig& config,
                 Seed seed) {
  Rng rng(seed);
  return SampleBid(params, config, rng);
}

BidProfile SampleProfile(const BidderModelParams& params,
                         const GameConfig& config, int count, Seed seed) {
  if (count < 1) throw Error(ErrorKind::kInvalidInput, "profile size must be >= 1");
  Rng rng(seed);
  BidProfile profile;
  profile.bids.reserve(count);
  for (int i = 0; i < count; ++i) profile.bids.push_back(SampleBid(params, config, rng));
  return profile;
}

}  // namespace refprice
