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

#ifndef REFPRICE_DYNAMICS_H_
#define REFPRICE_DYNAMICS_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "refprice/game.h"
#include "refprice/random.h"

namespace refprice {

// Bid vector of a repeated game at step t.
struct DynamicsState {
  int t = 0;
  std::vector<double> x;
};

// Per-player production costs; the best response is floored at C_i.
struct CostVector {
  std::vector<double> c;
};

enum class NoiseDistribution { kNormal, kUniform };

// Shading noise eps_t subtracted from the best response each round.
// kUniform draws on [mean - sqrt(3) sd, mean + sqrt(3) sd].
struct NoiseSpec {
  std::vector<double> mean;
  std::vector<double> stddev;
  NoiseDistribution distribution = NoiseDistribution::kNormal;
};

struct StationaryLaw {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double price_mean = 0.0;
  double price_variance = 0.0;
  // (2N-1)^2 / (N (3N-2)) * sum sigma^2 as printed in the source model.
  // It equals the variance of the bid sum, not of the reference price.
  double price_variance_printed = 0.0;
};

struct StochasticOptions {
  std::optional<CostVector> costs;
  // Clamp every bid to [A, B] after the noise draw.
  bool truncate_to_bounds = false;
};

// Reference price (sum x + N E) / (2N) of a bid vector.
double StatePrice(const GameConfig& config, const DynamicsState& state);

// x_i' = (sum_{j != i} x_j + N E) / (2N - 1), then max(C_i, x_i') if costs.
DynamicsState BestResponseStep(const GameConfig& config,
                               const DynamicsState& state);
DynamicsState BestResponseStep(const GameConfig& config,
                               const DynamicsState& state,
                               const CostVector& costs);

// n-step linear dynamics through the closed-form power of the
// off-diagonal ones matrix.
DynamicsState ClosedFormTrajectory(const GameConfig& config,
                                   const DynamicsState& x0, int n);

// ((N-1)/(2N-1))^n P0 + (1 - ((N-1)/(2N-1))^n) E.
double PriceRecursion(const GameConfig& config, double p0, int n);

// Unique fixed point of the cost-floored best response. Players whose cost
// is at least the common level of the others bid their cost.
DynamicsState CostFixedPoint(const GameConfig& config, const CostVector& costs);

// X_t = H(G(X_{t-1}) - eps_t). Returns states t = 0..steps.
std::vector<DynamicsState> SimulateStochastic(const GameConfig& config,
                                              const DynamicsState& x0,
                                              const NoiseSpec& noise, int steps,
                                              Seed seed,
                                              const StochasticOptions& options = {});

// Limiting normal law of the untruncated, cost-free noisy dynamics.
StationaryLaw ComputeStationaryLaw(const GameConfig& config,
                                   const NoiseSpec& noise);

}  // namespace refprice

#endif  // REFPRICE_DYNAMICS_H_
