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

#ifndef REFPRICE_COALITION_H_
#define REFPRICE_COALITION_H_

#include <functional>
#include <optional>

#include "refprice/bidder_model.h"
#include "refprice/game.h"
#include "refprice/random.h"

namespace refprice {

// A colluding group: `high_bidders` members bid B, one member bids
// `designated_bid`, any remaining members also bid B.
struct CoalitionPlan {
  int size = 0;
  int high_bidders = 0;
  double designated_bid = 0.0;
  AwardRule rule = AwardRule::kProcurementMean;
};

struct StealRisk {
  int size = 0;
  double x_star = 0.0;
  // P(one outside bid lands in ]x*, (B+E)/2]).
  double p_single = 0.0;
  // 1 - (1 - p_single)^N, the convention that reproduces the published table.
  double p_any_paper = 0.0;
  // 1 - (1 - p_single)^(N - l): only non-members can steal.
  double p_any_literal = 0.0;
  std::optional<double> mc_win_rate;
  int mc_trials = 0;
};

enum class OutsiderMode { kModel, kUniform, kLowerBound };

using OutsiderSampler = std::function<double(Rng&)>;

// x* = ((N - l) E(x) + (l - 1) B + N E) / (2N - 1), 2 <= l <= N.
double CoalitionBid(const GameConfig& config, const BidderModelParams& params,
                    int size);

StealRisk StealProbabilities(const GameConfig& config,
                             const BidderModelParams& params, int size);

struct CoalitionTrial {
  AuctionOutcome outcome;
  double designated_bid = 0.0;
  bool coalition_won = false;
};

// One tender under the mean rule: members 0..l-2 bid B, member l-1 bids x*,
// the other N - l players are outsiders.
CoalitionTrial RunCoalitionTrial(const GameConfig& config,
                                 const BidderModelParams& params, int size,
                                 OutsiderMode mode, Rng& rng);

// Closed-form risk plus the empirical coalition win rate over `trials`.
StealRisk SimulateCoalition(const GameConfig& config,
                            const BidderModelParams& params, int size,
                            int trials, Seed seed,
                            OutsiderMode mode = OutsiderMode::kModel);

// Smallest plan that controls the median: odd N uses (N+3)/2 members with
// (N+1)/2 at B, even N uses (N+4)/2 members with (N+2)/2 at B. The
// designated member bids (B+E)/2. Requires N >= 3.
CoalitionPlan MedianCoalitionPlan(const GameConfig& config);

OutsiderSampler UniformOutsiders(const GameConfig& config);
OutsiderSampler ModelOutsiders(const GameConfig& config,
                               const BidderModelParams& params);

// Fraction of trials won by the coalition under the median rule. Without
// an explicit plan the MedianCoalitionPlan is used.
double SimulateMedianCoalition(const GameConfig& config, int trials, Seed seed,
                               const OutsiderSampler& outsiders,
                               const std::optional<CoalitionPlan>& plan = {});

}  // namespace refprice

#endif  // REFPRICE_COALITION_H_
