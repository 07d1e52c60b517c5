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

#include "refprice/coalition.h"

#include <algorithm>
#include <cmath>

#include "refprice/error.h"

namespace refprice {

namespace {

void CheckSize(const GameConfig& config, int size) {
  if (size < 2 || size > config.num_players) {
    throw Error(ErrorKind::kInvalidInput, "coalition size must be in [2, N]");
  }
}

void CheckTrials(int trials) {
  if (trials < 1) throw Error(ErrorKind::kInvalidInput, "trials must be >= 1");
}

}  // namespace

double CoalitionBid(const GameConfig& config, const BidderModelParams& params,
                    int size) {
  CheckSize(config, size);
  const double n = config.num_players;
  const double l = size;
  const double outsider_mean = MixtureMoments(params, config).mean;
  return ((n - l) * outsider_mean + (l - 1.0) * config.upper_bound +
          n * config.estimate) /
         (2.0 * n - 1.0);
}

StealRisk StealProbabilities(const GameConfig& config,
                             const BidderModelParams& params, int size) {
  StealRisk risk;
  risk.size = size;
  risk.x_star = CoalitionBid(config, params, size);
  const double ceiling = (config.upper_bound + config.estimate) / 2.0;
  if (risk.x_star < ceiling) {
    risk.p_single = std::clamp(
        Cdf(params, config, ceiling) - Cdf(params, config, risk.x_star), 0.0, 1.0);
  }
  const double keep = 1.0 - risk.p_single;
  risk.p_any_paper = 1.0 - std::pow(keep, config.num_players);
  risk.p_any_literal = 1.0 - std::pow(keep, config.num_players - size);
  return risk;
}

CoalitionTrial RunCoalitionTrial(const GameConfig& config,
                                 const BidderModelParams& params, int size,
                                 OutsiderMode mode, Rng& rng) {
  GameConfig mean_rule = config;
  mean_rule.award_rule = AwardRule::kProcurementMean;
  CoalitionTrial trial;
  trial.designated_bid = CoalitionBid(config, params, size);

  BidProfile bids;
  bids.bids.assign(size - 1, config.upper_bound);
  bids.bids.push_back(trial.designated_bid);
  std::uniform_real_distribution<double> uniform(config.lower_bound,
                                                 config.upper_bound);
  for (int j = size; j < config.num_players; ++j) {
    switch (mode) {
      case OutsiderMode::kModel:
        bids.bids.push_back(SampleBid(params, config, rng));
        break;
      case OutsiderMode::kUniform:
        bids.bids.push_back(uniform(rng));
        break;
      case OutsiderMode::kLowerBound:
        bids.bids.push_back(config.lower_bound);
        break;
    }
  }
  trial.outcome = DetermineWinner(mean_rule, bids, rng());
  trial.coalition_won = trial.outcome.winner < size;
  return trial;
}

StealRisk SimulateCoalition(const GameConfig& config,
                            const BidderModelParams& params, int size,
                            int trials, Seed seed, OutsiderMode mode) {
  CheckTrials(trials);
  StealRisk risk = StealProbabilities(config, params, size);
  Rng rng(seed);
  int wins = 0;
  for (int t = 0; t < trials; ++t) {
    if (RunCoalitionTrial(config, params, size, mode, rng).coalition_won) ++wins;
  }
  risk.mc_win_rate = static_cast<double>(wins) / trials;
  risk.mc_trials = trials;
  return risk;
}

CoalitionPlan MedianCoalitionPlan(const GameConfig& config) {
  const int n = config.num_players;
  if (n < 3) throw Error(ErrorKind::kInvalidInput, "median plan needs N >= 3");
  CoalitionPlan plan;
  plan.rule = AwardRule::kProcurementMedian;
  plan.designated_bid = (config.upper_bound + config.estimate) / 2.0;
  if (n % 2 == 1) {
    plan.size = (n + 3) / 2;
    plan.high_bidders = (n + 1) / 2;
  } else {
    plan.size = (n + 4) / 2;
    plan.high_bidders = (n + 2) / 2;
  }
  return plan;
}

OutsiderSampler UniformOutsiders(const GameConfig& config) {
  const double lo = config.lower_bound;
  const double hi = config.upper_bound;
  return [lo, hi](Rng& rng) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
}

OutsiderSampler ModelOutsiders(const GameConfig& config,
                               const BidderModelParams& params) {
  params.Validate();
  return [config, params](Rng& rng) { return SampleBid(params, config, rng); };
}

double SimulateMedianCoalition(const GameConfig& config, int trials, Seed seed,
                               const OutsiderSampler& outsiders,
                               const std::optional<CoalitionPlan>& plan) {
  CheckTrials(trials);
  const CoalitionPlan used = plan ? *plan : MedianCoalitionPlan(config);
  if (used.size < 1 || used.size > config.num_players ||
      used.high_bidders < 0 || used.high_bidders > used.size - 1) {
    throw Error(ErrorKind::kInvalidInput, "inconsistent coalition plan");
  }
  GameConfig median_rule = config;
  median_rule.award_rule = AwardRule::kProcurementMedian;

  Rng rng(seed);
  int wins = 0;
  BidProfile bids;
  for (int t = 0; t < trials; ++t) {
    // Member 0 is the designated bidder; all other members bid B.
    bids.bids.assign(1, used.designated_bid);
    bids.bids.resize(used.size, config.upper_bound);
    for (int j = used.size; j < config.num_players; ++j) {
      bids.bids.push_back(outsiders(rng));
    }
    const AuctionOutcome outcome = DetermineWinner(median_rule, bids, rng());
    if (outcome.winner < used.size) ++wins;
  }
  return static_cast<double>(wins) / trials;
}

}  // namespace refprice
