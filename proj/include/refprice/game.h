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

#ifndef REFPRICE_GAME_H_
#define REFPRICE_GAME_H_

#include <utility>
#include <vector>

#include "refprice/random.h"

namespace refprice {

enum class AwardRule { kGuessingGame, kProcurementMean, kProcurementMedian };

// Drives the lower admissibility threshold: -20% for works, -25% for
// supplies and services. The upper threshold is +20% for both.
enum class ContractKind { kWorks, kSuppliesServices };

// The auction environment. Prices are either currency amounts or relative
// deviations (x - E) / E; every operation is agnostic to the unit.
struct GameConfig {
  double estimate = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  int num_players = 2;
  AwardRule award_rule = AwardRule::kProcurementMean;
  ContractKind contract_kind = ContractKind::kSuppliesServices;
  // Bids are rounded to a multiple of this before comparison. 0 disables.
  double tick = 0.01;

  // Bounds from the decree percentages: B = 1.20 E, A = 0.80 E (works) or
  // 0.75 E (supplies and services). Requires E > 0.
  static GameConfig FromPercentBounds(double estimate, int num_players,
                                      ContractKind kind,
                                      AwardRule rule = AwardRule::kProcurementMean);

  // Throws InvalidInput unless A < E < B, N >= 2 and tick >= 0.
  void Validate() const;
};

// Relative lower/upper thresholds for a contract kind (-0.20/-0.25, +0.20).
double RelativeLowerThreshold(ContractKind kind);
double RelativeUpperThreshold(ContractKind kind);

enum class PriceUnit { kAbsolute, kRelativeDeviation };

struct BidProfile {
  std::vector<double> bids;
  PriceUnit unit = PriceUnit::kAbsolute;
};

// An elimination step's surviving interval of bids.
struct RationalInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;
  int step = 0;
  // Distances of lo and hi from E. Deep rounds put both endpoints within an
  // ulp of E, so the width is taken from these instead of hi - lo.
  double below = 0.0;
  double above = 0.0;

  double width() const { return below + above; }
  bool Contains(double x) const;
};

enum class AwardSide { kByDefault, kByExcess };

struct AuctionOutcome {
  double reference_price = 0.0;
  int winner = -1;               // 0-based index into the bid profile
  std::vector<int> excluded;     // inadmissible bids, rule (1)
  std::vector<int> tie_group;    // all bids sharing the winning price
  bool tie_broken_by_lot = false;
  AwardSide side = AwardSide::kByDefault;
};

enum class EliminationSchedule { kKnownN, kUnknownN };

struct EquilibriumResult {
  bool has_nash = false;
  double price = 0.0;  // meaningful only when has_nash
};

// Rounds to the nearest multiple of tick; identity when tick == 0.
double RoundToTick(double price, double tick);

// Midpoint of the two middle order statistics for even sizes.
double Median(std::vector<double> values);

// (E + mean(bids)) / 2, or (E + median(bids)) / 2 under the median rule.
// Uses every bid given; exclusion is the caller's concern.
double ReferencePrice(const GameConfig& config, const BidProfile& bids);

bool Admissible(const GameConfig& config, double bid);

// Rules (1)-(4). The reference price is formed from admissible bids only.
// Under the guessing-game rule the bid closest to P in absolute distance
// wins instead of the closest-by-default criterion.
AuctionOutcome DetermineWinner(const GameConfig& config,
                               const BidProfile& bids, Seed seed);

// Unique solution of x = (E + ((N-1) Z + x) / N) / 2.
double FixMap(const GameConfig& config, double z);
// n-fold composition of FixMap, evaluated in closed form.
double FixIter(const GameConfig& config, double z, int n);

// (A_n, B_n) = (((2^n - 1) E + A) / 2^n, ((2^n - 1) E + B) / 2^n).
std::pair<double, double> BarrierSequences(const GameConfig& config, int n);

// Rational intervals for steps 1..steps. KnownN gives [Fix^n(A), Fix^n(B)),
// UnknownN gives ]A_n, B_n[.
std::vector<RationalInterval> Eliminate(const GameConfig& config, int steps,
                                        EliminationSchedule schedule);

EquilibriumResult EquilibriumAnalysis(const GameConfig& config);

}  // namespace refprice

#endif  // REFPRICE_GAME_H_
