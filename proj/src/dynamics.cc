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

#include "refprice/dynamics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refprice/error.h"

namespace refprice {

namespace {

void CheckSize(const GameConfig& config, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(config.num_players)) {
    throw Error(ErrorKind::kInvalidInput,
                std::string(what) + " must have one entry per player");
  }
}

double Contraction(const GameConfig& config) {
  const double n = config.num_players;
  return (n - 1.0) / (2.0 * n - 1.0);
}

// The unfloored best response G.
std::vector<double> Respond(const GameConfig& config,
                            const std::vector<double>& x) {
  const double n = config.num_players;
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  std::vector<double> next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    next[i] = (total - x[i] + n * config.estimate) / (2.0 * n - 1.0);
  }
  return next;
}

void Floor(const CostVector& costs, std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::max(costs.c[i], x[i]);
}

void CheckCosts(const GameConfig& config, const CostVector& costs) {
  CheckSize(config, costs.c.size(), "cost vector");
  for (double c : costs.c) {
    if (!(c >= 0.0)) throw Error(ErrorKind::kInvalidInput, "costs must be >= 0");
  }
}

}  // namespace

double StatePrice(const GameConfig& config, const DynamicsState& state) {
  const double n = config.num_players;
  const double total = std::accumulate(state.x.begin(), state.x.end(), 0.0);
  return (total + n * config.estimate) / (2.0 * n);
}

DynamicsState BestResponseStep(const GameConfig& config,
                               const DynamicsState& state) {
  CheckSize(config, state.x.size(), "state");
  return {state.t + 1, Respond(config, state.x)};
}

DynamicsState BestResponseStep(const GameConfig& config,
                               const DynamicsState& state,
                               const CostVector& costs) {
  CheckCosts(config, costs);
  DynamicsState next = BestResponseStep(config, state);
  Floor(costs, next.x);
  return next;
}

DynamicsState ClosedFormTrajectory(const GameConfig& config,
                                   const DynamicsState& x0, int n) {
  CheckSize(config, x0.x.size(), "state");
  if (n < 0) throw Error(ErrorKind::kInvalidInput, "negative step count");
  const double players = config.num_players;
  const double rho = Contraction(config);
  const double alt = -1.0 / (2.0 * players - 1.0);
  const double rho_n = std::pow(rho, n);
  const double alt_n = std::pow(alt, n);

  // A^n / (2N-1)^n = j_coef J + i_coef I.
  const double j_coef = (rho_n - alt_n) / players;
  const double i_coef = alt_n;
  // The E term: (1/2) (c J + d I) E with J acting on the ones vector.
  const double c = (1.0 - 2.0 * rho_n + alt_n) / players;
  const double d = 1.0 - alt_n;
  const double e_term = 0.5 * (c * players + d) * config.estimate;

  const double total = std::accumulate(x0.x.begin(), x0.x.end(), 0.0);
  DynamicsState out{x0.t + n, std::vector<double>(x0.x.size())};
  for (std::size_t i = 0; i < x0.x.size(); ++i) {
    out.x[i] = j_coef * total + i_coef * x0.x[i] + e_term;
  }
  return out;
}

double PriceRecursion(const GameConfig& config, double p0, int n) {
  if (n < 0) throw Error(ErrorKind::kInvalidInput, "negative step count");
  const double w = std::pow(Contraction(config), n);
  return w * p0 + (1.0 - w) * config.estimate;
}

DynamicsState CostFixedPoint(const GameConfig& config, const CostVector& costs) {
  CheckCosts(config, costs);
  const double players = config.num_players;
  std::vector<bool> floored(costs.c.size());
  for (std::size_t i = 0; i < costs.c.size(); ++i) {
    floored[i] = costs.c[i] > config.estimate;
  }
  // Common bid of the unconstrained players: (sum_F C_j + N E) / (N + M).
  // A floored player must have C_j >= that level; drop the ones that do not
  // and recompute. The level only rises, so this terminates.
  double level = config.estimate;
  for (;;) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < costs.c.size(); ++i) {
      if (floored[i]) {
        sum += costs.c[i];
        ++count;
      }
    }
    level = (sum + players * config.estimate) / (players + count);
    bool changed = false;
    for (std::size_t i = 0; i < costs.c.size(); ++i) {
      if (floored[i] && costs.c[i] < level) {
        floored[i] = false;
        changed = true;
      }
    }
    if (!changed) break;
  }
  DynamicsState out{0, std::vector<double>(costs.c.size())};
  for (std::size_t i = 0; i < costs.c.size(); ++i) {
    out.x[i] = floored[i] ? costs.c[i] : level;
  }
  return out;
}

std::vector<DynamicsState> SimulateStochastic(const GameConfig& config,
                                              const DynamicsState& x0,
                                              const NoiseSpec& noise, int steps,
                                              Seed seed,
                                              const StochasticOptions& options) {
  CheckSize(config, x0.x.size(), "state");
  CheckSize(config, noise.mean.size(), "noise mean");
  CheckSize(config, noise.stddev.size(), "noise stddev");
  for (double s : noise.stddev) {
    if (!(s >= 0.0)) throw Error(ErrorKind::kInvalidInput, "noise stddev must be >= 0");
  }
  if (steps < 1) throw Error(ErrorKind::kInvalidInput, "steps must be >= 1");
  if (options.costs) CheckCosts(config, *options.costs);

  Rng rng(seed);
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double uniform_scale = std::sqrt(3.0);

  std::vector<DynamicsState> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  path.push_back(x0);
  for (int t = 1; t <= steps; ++t) {
    std::vector<double> x = Respond(config, path.back().x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double z = noise.distribution == NoiseDistribution::kNormal
                           ? standard_normal(rng)
                           : uniform_scale * unit(rng);
      x[i] -= noise.mean[i] + noise.stddev[i] * z;
    }
    if (options.costs) Floor(*options.costs, x);
    if (options.truncate_to_bounds) {
      for (double& v : x) v = std::clamp(v, config.lower_bound, config.upper_bound);
    }
    path.push_back({x0.t + t, std::move(x)});
  }
  return path;
}

StationaryLaw ComputeStationaryLaw(const GameConfig& config,
                                   const NoiseSpec& noise) {
  const int n = config.num_players;
  CheckSize(config, noise.mean.size(), "noise mean");
  CheckSize(config, noise.stddev.size(), "noise stddev");
  if (noise.distribution != NoiseDistribution::kNormal) {
    throw Error(ErrorKind::kInvalidInput, "stationary law needs normal noise");
  }
  const double players = n;
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  // Companion matrix of the VAR(1): A / (2N-1).
  const Eigen::MatrixXd companion = (ones - identity) / (2.0 * players - 1.0);

  Eigen::VectorXd shading(n);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
  double sigma_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    shading(i) = noise.mean[i];
    sigma(i, i) = noise.stddev[i] * noise.stddev[i];
    sigma_sum += sigma(i, i);
  }
  const Eigen::VectorXd drift =
      Eigen::VectorXd::Constant(n, players * config.estimate / (2.0 * players - 1.0)) -
      shading;

  StationaryLaw law;
  law.mean = (identity - companion).partialPivLu().solve(drift);

  // Omega = sum_k M^k Sigma (M^k)^T by squaring; spectral radius of M is
  // (N-1)/(2N-1) < 1/2, so a few dozen doublings reach machine precision.
  Eigen::MatrixXd omega = sigma;
  Eigen::MatrixXd power = companion;
  for (int k = 0; k < 64; ++k) {
    const Eigen::MatrixXd next = omega + power * omega * power.transpose();
    const double delta = (next - omega).cwiseAbs().maxCoeff();
    omega = next;
    power = power * power;
    if (delta == 0.0 || power.cwiseAbs().maxCoeff() == 0.0) break;
  }
  law.covariance = (omega + omega.transpose()) / 2.0;

  law.price_mean = (law.mean.sum() + players * config.estimate) / (2.0 * players);
  law.price_variance = law.covariance.sum() / (4.0 * players * players);
  law.price_variance_printed = (2.0 * players - 1.0) * (2.0 * players - 1.0) /
                               (players * (3.0 * players - 2.0)) * sigma_sum;
  return law;
}

}  // namespace refprice
