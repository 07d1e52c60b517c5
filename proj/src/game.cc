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

#include "refprice/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "refprice/error.h"

namespace refprice {

double RelativeLowerThreshold(ContractKind kind) {
  return kind == ContractKind::kWorks ? -0.20 : -0.25;
}

double RelativeUpperThreshold(ContractKind /*kind*/) { return 0.20; }

GameConfig GameConfig::FromPercentBounds(double estimate, int num_players,
                                         ContractKind kind, AwardRule rule) {
  if (!(estimate > 0.0)) {
    throw Error(ErrorKind::kInvalidInput,
                "percentage bounds need a positive estimate");
  }
  GameConfig config;
  config.estimate = estimate;
  config.lower_bound = estimate * (1.0 + RelativeLowerThreshold(kind));
  config.upper_bound = estimate * (1.0 + RelativeUpperThreshold(kind));
  config.num_players = num_players;
  config.award_rule = rule;
  config.contract_kind = kind;
  config.Validate();
  return config;
}

void GameConfig::Validate() const {
  if (!std::isfinite(estimate) || !std::isfinite(lower_bound) ||
      !std::isfinite(upper_bound)) {
    throw Error(ErrorKind::kInvalidInput, "non-finite price in game config");
  }
  if (!(lower_bound < estimate && estimate < upper_bound)) {
    throw Error(ErrorKind::kInvalidInput, "bounds must satisfy A < E < B");
  }
  if (num_players < 2) {
    throw Error(ErrorKind::kInvalidInput, "need at least two players");
  }
  if (!(tick >= 0.0) || !std::isfinite(tick)) {
    throw Error(ErrorKind::kInvalidInput, "tick must be a finite value >= 0");
  }
}

bool RationalInterval::Contains(double x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

double RoundToTick(double price, double tick) {
  if (tick <= 0.0) return price;
  // Decimal ticks (0.01, 1e-8) are handled through the integral inverse so
  // that the result is the double nearest to the decimal value.
  const double inverse = std::round(1.0 / tick);
  if (inverse >= 1.0 && std::abs(inverse * tick - 1.0) < 1e-12) {
    return std::round(price * inverse) / inverse;
  }
  return std::round(price / tick) * tick;
}

double Median(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::kInvalidInput, "median of an empty list");
  }
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / 2.0;
}

namespace {

double Aggregate(AwardRule rule, const std::vector<double>& bids) {
  if (rule == AwardRule::kProcurementMedian) return Median(bids);
  return std::accumulate(bids.begin(), bids.end(), 0.0) /
         static_cast<double>(bids.size());
}

}  // namespace

double ReferencePrice(const GameConfig& config, const BidProfile& bids) {
  if (bids.bids.empty()) {
    throw Error(ErrorKind::kInvalidInput, "reference price of an empty bid list");
  }
  for (double x : bids.bids) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::kInvalidInput, "non-finite bid");
    }
  }
  return (config.estimate + Aggregate(config.award_rule, bids.bids)) / 2.0;
}

bool Admissible(const GameConfig& config, double bid) {
  return config.lower_bound <= bid && bid <= config.upper_bound;
}

AuctionOutcome DetermineWinner(const GameConfig& config,
                               const BidProfile& bids, Seed seed) {
  AuctionOutcome outcome;
  std::vector<double> rounded;
  std::vector<int> admitted;
  rounded.reserve(bids.bids.size());
  for (std::size_t i = 0; i < bids.bids.size(); ++i) {
    const double x = bids.bids[i];
    if (!std::isfinite(x)) throw Error(ErrorKind::kInvalidInput, "non-finite bid");
    rounded.push_back(RoundToTick(x, config.tick));
    if (Admissible(config, rounded.back())) {
      admitted.push_back(static_cast<int>(i));
    } else {
      outcome.excluded.push_back(static_cast<int>(i));
    }
  }
  if (admitted.empty()) {
    throw Error(ErrorKind::kNoAdmissibleBids, "every bid was excluded");
  }

  BidProfile admissible{{}, bids.unit};
  for (int i : admitted) admissible.bids.push_back(rounded[i]);
  const double p = ReferencePrice(config, admissible);
  outcome.reference_price = p;

  double best = 0.0;
  if (config.award_rule == AwardRule::kGuessingGame) {
    double best_distance = INFINITY;
    for (int i : admitted) {
      const double d = std::abs(rounded[i] - p);
      if (d < best_distance) {
        best_distance = d;
        best = rounded[i];
      }
    }
    // Equidistant bids on both sides of P are a tie as well.
    for (int i : admitted) {
      if (std::abs(rounded[i] - p) == best_distance) {
        outcome.tie_group.push_back(i);
      }
    }
  } else {
    bool found_default = false;
    for (int i : admitted) {
      if (rounded[i] <= p && (!found_default || rounded[i] > best)) {
        best = rounded[i];
        found_default = true;
      }
    }
    if (!found_default) {
      best = INFINITY;
      for (int i : admitted) best = std::min(best, rounded[i]);
    }
    for (int i : admitted) {
      if (rounded[i] == best) outcome.tie_group.push_back(i);
    }
  }

  if (outcome.tie_group.size() > 1) {
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(
        0, outcome.tie_group.size() - 1);
    outcome.winner = outcome.tie_group[pick(rng)];
    outcome.tie_broken_by_lot = true;
  } else {
    outcome.winner = outcome.tie_group.front();
  }
  outcome.side = rounded[outcome.winner] <= p ? AwardSide::kByDefault
                                              : AwardSide::kByExcess;
  return outcome;
}

double FixMap(const GameConfig& config, double z) {
  const double n = config.num_players;
  return (n * config.estimate + (n - 1.0) * z) / (2.0 * n - 1.0);
}

double FixIter(const GameConfig& config, double z, int n) {
  if (n < 0) throw Error(ErrorKind::kInvalidInput, "negative step count");
  const double players = config.num_players;
  const double ratio = (players - 1.0) / (2.0 * players - 1.0);
  // ((2N-1)^n - (N-1)^n) E + (N-1)^n Z over (2N-1)^n, written around E.
  return config.estimate + std::pow(ratio, n) * (z - config.estimate);
}

std::pair<double, double> BarrierSequences(const GameConfig& config, int n) {
  if (n < 0) throw Error(ErrorKind::kInvalidInput, "negative step count");
  const double e = config.estimate;
  return {e + std::ldexp(config.lower_bound - e, -n),
          e + std::ldexp(config.upper_bound - e, -n)};
}

std::vector<RationalInterval> Eliminate(const GameConfig& config, int steps,
                                        EliminationSchedule schedule) {
  if (steps < 1) throw Error(ErrorKind::kInvalidInput, "steps must be >= 1");
  std::vector<RationalInterval> out;
  out.reserve(steps);
  for (int n = 1; n <= steps; ++n) {
    RationalInterval interval;
    interval.step = n;
    if (schedule == EliminationSchedule::kKnownN) {
      // The top endpoint is weakly dominated by bidding just below it.
      interval.lo = FixIter(config, config.lower_bound, n);
      interval.hi = FixIter(config, config.upper_bound, n);
      const double ratio = std::pow((config.num_players - 1.0) /
                                        (2.0 * config.num_players - 1.0), n);
      interval.below = ratio * (config.estimate - config.lower_bound);
      interval.above = ratio * (config.upper_bound - config.estimate);
      interval.lo_closed = true;
      interval.hi_closed = false;
    } else {
      std::tie(interval.lo, interval.hi) = BarrierSequences(config, n);
      interval.below = std::ldexp(config.estimate - config.lower_bound, -n);
      interval.above = std::ldexp(config.upper_bound - config.estimate, -n);
      interval.lo_closed = false;
      interval.hi_closed = false;
    }
    out.push_back(interval);
  }
  return out;
}

EquilibriumResult EquilibriumAnalysis(const GameConfig& config) {
  switch (config.award_rule) {
    case AwardRule::kGuessingGame:
    case AwardRule::kProcurementMedian:
      return {true, config.estimate};
    case AwardRule::kProcurementMean:
      return {false, 0.0};
  }
  return {false, 0.0};
}

}  // namespace refprice
