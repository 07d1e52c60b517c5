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

#ifndef REFPRICE_BIDDER_MODEL_H_
#define REFPRICE_BIDDER_MODEL_H_

#include "refprice/game.h"
#include "refprice/random.h"

namespace refprice {

// Lower bids live on [A, E], upper bids on [E, B].
enum class Regime { kLower, kUpper };

// Level-k bidder: with probability q the bid is drawn in the upper regime.
// In a regime with continuation parameter p the reasoning depth n >= 0 has
// probability p (1 - p)^n, and the bid is uniform between the n-th barrier
// and E.
struct BidderModelParams {
  double q = 0.0;
  double p_plus = 1.0;
  double p_minus = 1.0;

  void Validate() const;
  double p(Regime regime) const {
    return regime == Regime::kUpper ? p_plus : p_minus;
  }
};

// Depths beyond this are indistinguishable from E in double precision.
inline constexpr int kMaxLevel = 1000;

// Lower: largest n with y >= A_n. Upper: largest n with y <= B_n.
// Throws InvalidInput when y is outside the regime's support.
int LevelIndex(const GameConfig& config, double y, Regime regime);

// f- or f+ for continuation parameter p; 0 outside the regime support.
double RegimeDensity(const GameConfig& config, double y, double p,
                     Regime regime);
double RegimeCdf(const GameConfig& config, double y, double p, Regime regime);

// q f+(y) + (1 - q) f-(y). At y == E only the lower branch contributes.
double Density(const BidderModelParams& params, const GameConfig& config,
               double y);
double Cdf(const BidderModelParams& params, const GameConfig& config, double y);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments RegimeMoments(const GameConfig& config, double p, Regime regime);
// Mean per the two-regime blend; variance from the standard mixture
// decomposition q E[(x+)^2] + (1 - q) E[(x-)^2] - mean^2.
Moments MixtureMoments(const BidderModelParams& params, const GameConfig& config);
// The mixture variance with the extra q (1 - q) E(x+) E(x-) term, kept for
// side-by-side reporting only.
double PrintedMixtureVariance(const BidderModelParams& params,
                              const GameConfig& config);

// (E + mixture mean) / 2.
double ExpectedReferencePrice(const BidderModelParams& params,
                              const GameConfig& config);

// Reasoning depth n >= 0 with P(n) = p (1 - p)^n.
int SampleLevel(double p, Rng& rng);
double SampleBid(const BidderModelParams& params, const GameConfig& config,
                 Rng& rng);
double SampleBid(const BidderModelParams& params, const GameConfig& config,
                 Seed seed);
BidProfile SampleProfile(const BidderModelParams& params,
                         const GameConfig& config, int count, Seed seed);

}  // namespace refprice

#endif  // REFPRICE_BIDDER_MODEL_H_
