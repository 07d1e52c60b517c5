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

// Desk-scale search for pure Nash equilibria of the award game on a price
// grid. A profile survives only if no player can raise their probability of
// winning by moving to another grid point or by one tick either way.

#ifndef REFPRICE_TESTS_WITNESS_H_
#define REFPRICE_TESTS_WITNESS_H_

#include <algorithm>
#include <vector>

#include "refprice/game.h"

namespace refprice::oracle {

inline double WinShare(const GameConfig& config, const std::vector<double>& bids,
                       int player) {
  const AuctionOutcome out = DetermineWinner(config, {bids, PriceUnit::kAbsolute}, 0);
  const auto& group = out.tie_group;
  if (std::find(group.begin(), group.end(), player) == group.end()) return 0.0;
  return 1.0 / static_cast<double>(group.size());
}

// True when some player has a strictly better unilateral deviation.
inline bool HasProfitableDeviation(const GameConfig& config,
                                   const std::vector<double>& grid,
                                   std::vector<double> bids) {
  for (int i = 0; i < static_cast<int>(bids.size()); ++i) {
    const double current = WinShare(config, bids, i);
    if (current == 1.0) continue;
    const double own = bids[i];
    std::vector<double> moves = {own - config.tick, own + config.tick};
    moves.insert(moves.end(), grid.begin(), grid.end());
    for (double y : moves) {
      if (y == own || y < config.lower_bound || y > config.upper_bound) continue;
      bids[i] = RoundToTick(y, config.tick);
      const bool better = WinShare(config, bids, i) > current;
      bids[i] = own;
      if (better) return true;
    }
  }
  return false;
}

struct WitnessReport {
  long profiles = 0;
  long equilibria = 0;
  std::vector<double> first_equilibrium;
};

// Scans every profile with nondecreasing coordinates; the game is symmetric,
// so this covers all profiles up to relabeling.
inline WitnessReport ScanForEquilibria(const GameConfig& config, int points) {
  std::vector<double> grid;
  for (int k = 0; k < points; ++k) {
    grid.push_back(RoundToTick(
        config.lower_bound +
            (config.upper_bound - config.lower_bound) * k / (points - 1),
        config.tick));
  }
  WitnessReport report;
  const int n = config.num_players;
  std::vector<int> index(n, 0);
  for (;;) {
    std::vector<double> bids(n);
    for (int i = 0; i < n; ++i) bids[i] = grid[index[i]];
    ++report.profiles;
    if (!HasProfitableDeviation(config, grid, bids)) {
      if (report.equilibria++ == 0) report.first_equilibrium = bids;
    }
    int pos = n - 1;
    while (pos >= 0 && index[pos] == points - 1) --pos;
    if (pos < 0) break;
    ++index[pos];
    for (int j = pos + 1; j < n; ++j) index[j] = index[pos];
  }
  return report;
}

}  // namespace refprice::oracle

#endif  // REFPRICE_TESTS_WITNESS_H_
