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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "refprice/error.h"

namespace refprice {
namespace {

GameConfig Config(int n, double e = 100.0) {
  GameConfig c;
  c.estimate = e;
  c.lower_bound = 0.75 * e;
  c.upper_bound = 1.2 * e;
  c.num_players = n;
  return c;
}

double MaxGap(const std::vector<double>& a, const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

TEST(BestResponseTest, Examples) {
  const GameConfig c = Config(2);
  EXPECT_EQ(BestResponseStep(c, {0, {100, 100}}).x, (std::vector<double>{100, 100}));
  const DynamicsState next = BestResponseStep(c, {0, {90, 110}});
  EXPECT_EQ(next.t, 1);
  EXPECT_NEAR(next.x[0], 310.0 / 3.0, 1e-12);
  EXPECT_NEAR(next.x[1], 290.0 / 3.0, 1e-12);
  const DynamicsState floored = BestResponseStep(c, {0, {90, 110}}, {{108, 0}});
  EXPECT_DOUBLE_EQ(floored.x[0], 108.0);
  EXPECT_NEAR(floored.x[1], 290.0 / 3.0, 1e-12);
  EXPECT_THROW(BestResponseStep(c, {0, {1, 2, 3}}), Error);
  EXPECT_THROW(BestResponseStep(c, {0, {1, 2}}, {{-1, 0}}), Error);
}

TEST(BestResponseTest, IsTheArgmaxOfWinningAgainstOthers) {
  // x_i' equals P evaluated with x_i' itself: the highest bid still <= P.
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 8; ++n) {
    const GameConfig c = Config(n);
    std::uniform_real_distribution<double> u(75, 120);
    DynamicsState s{0, {}};
    for (int i = 0; i < n; ++i) s.x.push_back(u(rng));
    const DynamicsState next = BestResponseStep(c, s);
    for (int i = 0; i < n; ++i) {
      DynamicsState mixed = s;
      mixed.x[i] = next.x[i];
      EXPECT_NEAR(StatePrice(c, mixed), next.x[i], 1e-12);
    }
  }
}

TEST(ClosedFormTest, MatchesIteration) {
  std::mt19937_64 rng(8);
  for (int n = 2; n <= 20; ++n) {
    const GameConfig c = Config(n);
    std::uniform_real_distribution<double> u(75, 120);
    DynamicsState x0{0, {}};
    for (int i = 0; i < n; ++i) x0.x.push_back(u(rng));
    EXPECT_EQ(ClosedFormTrajectory(c, x0, 0).x, x0.x);
    DynamicsState it = x0;
    for (int k = 1; k <= 50; ++k) {
      it = BestResponseStep(c, it);
      EXPECT_LE(MaxGap(ClosedFormTrajectory(c, x0, k).x, it.x), 1e-10);
    }
    for (double v : ClosedFormTrajectory(c, x0, 400).x) EXPECT_NEAR(v, 100.0, 1e-9);
  }
}

TEST(PriceRecursionTest, Examples) {
  const GameConfig c = Config(2);
  EXPECT_DOUBLE_EQ(PriceRecursion(c, 100.0, 17), 100.0);
  EXPECT_NEAR(PriceRecursion(c, 95.0, 1), 95.0 / 3.0 + 200.0 / 3.0, 1e-12);
  EXPECT_NEAR(PriceRecursion(c, 95.0, 500), 100.0, 1e-12);
}

TEST(PriceRecursionTest, GeometricRateAlongTrajectories) {
  for (int n : {2, 5, 10}) {
    const GameConfig c = Config(n);
    const double ratio = (n - 1.0) / (2.0 * n - 1.0);
    DynamicsState s{0, std::vector<double>(n)};
    for (int i = 0; i < n; ++i) s.x[i] = 75.0 + 45.0 * i / (n - 1);
    const double p0 = StatePrice(c, s);
    for (int k = 1; k <= 30; ++k) {
      s = BestResponseStep(c, s);
      EXPECT_NEAR(std::abs(StatePrice(c, s) - 100.0),
                  std::pow(ratio, k) * std::abs(p0 - 100.0), 1e-12);
      EXPECT_NEAR(PriceRecursion(c, p0, k), StatePrice(c, s), 1e-12);
    }
  }
}

TEST(CostFixedPointTest, Examples) {
  const GameConfig c2 = Config(2);
  EXPECT_EQ(CostFixedPoint(c2, {{50, 90}}).x, (std::vector<double>{100, 100}));
  const DynamicsState two = CostFixedPoint(c2, {{110, 0}});
  EXPECT_DOUBLE_EQ(two.x[0], 110.0);
  EXPECT_NEAR(two.x[1], 310.0 / 3.0, 1e-12);
  const DynamicsState three = CostFixedPoint(Config(3), {{120, 110, 0}});
  EXPECT_DOUBLE_EQ(three.x[0], 120.0);
  EXPECT_DOUBLE_EQ(three.x[1], 110.0);
  EXPECT_NEAR(three.x[2], 106.0, 1e-12);
}

TEST(CostFixedPointTest, CostBetweenEstimateAndCommonLevel) {
  // C_2 = 101 sits above E but below the level the others settle at, so
  // player 2 is not held at its floor.
  const GameConfig c = Config(3);
  const CostVector costs{{200, 101, 0}};
  const DynamicsState fixed = CostFixedPoint(c, costs);
  EXPECT_DOUBLE_EQ(fixed.x[0], 200.0);
  EXPECT_NEAR(fixed.x[1], 125.0, 1e-12);
  EXPECT_NEAR(fixed.x[2], 125.0, 1e-12);
  const DynamicsState again = BestResponseStep(c, fixed, costs);
  EXPECT_LE(MaxGap(again.x, fixed.x), 1e-12);
}

TEST(CostFixedPointTest, IterationConverges) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + rep % 9;
    const GameConfig c = Config(n);
    std::uniform_real_distribution<double> cost(0.0, 130.0);
    std::uniform_real_distribution<double> start(75.0, 120.0);
    CostVector costs;
    DynamicsState s{0, {}};
    for (int i = 0; i < n; ++i) {
      costs.c.push_back(cost(rng));
      s.x.push_back(start(rng));
    }
    const DynamicsState fixed = CostFixedPoint(c, costs);
    for (int k = 0; k < 400; ++k) s = BestResponseStep(c, s, costs);
    EXPECT_LE(MaxGap(s.x, fixed.x), 1e-10) << "rep " << rep;
  }
}

TEST(CostFixedPointTest, FlooredMapContracts) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 7;
    const GameConfig c = Config(n);
    const double ratio = (n - 1.0) / (2.0 * n - 1.0);
    std::uniform_real_distribution<double> u(60.0, 130.0);
    CostVector costs;
    DynamicsState x{0, {}}, y{0, {}};
    for (int i = 0; i < n; ++i) {
      costs.c.push_back(u(rng));
      x.x.push_back(u(rng));
      y.x.push_back(u(rng));
    }
    const double before = MaxGap(x.x, y.x);
    const double after = MaxGap(BestResponseStep(c, x, costs).x,
                                BestResponseStep(c, y, costs).x);
    EXPECT_LE(after, ratio * before * (1.0 + 1e-12) + 1e-12);
  }
}

TEST(StochasticTest, ZeroNoiseFollowsClosedForm) {
  const GameConfig c = Config(4);
  const DynamicsState x0{0, {80, 90, 110, 115}};
  const NoiseSpec quiet{{0, 0, 0, 0}, {0, 0, 0, 0}};
  const auto path = SimulateStochastic(c, x0, quiet, 30, 1);
  ASSERT_EQ(path.size(), 31u);
  for (int k = 0; k <= 30; ++k) {
    EXPECT_LE(MaxGap(path[k].x, ClosedFormTrajectory(c, x0, k).x), 1e-10);
  }
}

TEST(StochasticTest, ConstantShadingConvergesToStationaryMean) {
  const GameConfig c = Config(3);
  const NoiseSpec noise{{0.5, 1.0, -0.25}, {0, 0, 0}};
  const auto path = SimulateStochastic(c, {0, {100, 100, 100}}, noise, 200, 0);
  const StationaryLaw law = ComputeStationaryLaw(c, noise);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(path.back().x[i], law.mean(i), 1e-10);
  EXPECT_NEAR(law.price_mean, 100.0 - 5.0 / 18.0 * 1.25, 1e-12);
}

TEST(StochasticTest, ReplayAndFloors) {
  const GameConfig c = Config(3);
  const NoiseSpec noise{{0, 0, 0}, {3, 3, 3}};
  StochasticOptions opts;
  opts.costs = CostVector{{98, 0, 101}};
  const auto a = SimulateStochastic(c, {0, {90, 100, 110}}, noise, 500, 42, opts);
  const auto b = SimulateStochastic(c, {0, {90, 100, 110}}, noise, 500, 42, opts);
  for (std::size_t t = 0; t < a.size(); ++t) {
    ASSERT_EQ(a[t].x, b[t].x);
    if (t > 0) {
      for (int i = 0; i < 3; ++i) EXPECT_GE(a[t].x[i], opts.costs->c[i]);
    }
  }
  StochasticOptions clamp;
  clamp.truncate_to_bounds = true;
  const NoiseSpec loud{{0, 0, 0}, {40, 40, 40}};
  for (const auto& s : SimulateStochastic(c, {0, {90, 100, 110}}, loud, 500, 7, clamp)) {
    for (double v : s.x) {
      EXPECT_GE(v, 75.0);
      EXPECT_LE(v, 120.0);
    }
  }
}

TEST(StationaryLawTest, Examples) {
  const GameConfig c = Config(2);
  const StationaryLaw shaded = ComputeStationaryLaw(c, {{1, 1}, {0, 0}});
  EXPECT_NEAR(shaded.price_mean, 99.25, 1e-12);
  EXPECT_NEAR(shaded.price_variance, 0.0, 1e-15);
  const StationaryLaw noisy = ComputeStationaryLaw(c, {{0, 0}, {1, 1}});
  EXPECT_NEAR(noisy.price_variance, 9.0 / 128.0 * 2.0, 1e-12);
  EXPECT_NEAR(noisy.price_variance_printed, 9.0 / 8.0 * 2.0, 1e-12);
  const StationaryLaw still = ComputeStationaryLaw(c, {{0, 0}, {0, 0}});
  EXPECT_NEAR(still.mean(0), 100.0, 1e-12);
  EXPECT_NEAR(still.price_mean, 100.0, 1e-12);
  EXPECT_THROW(ComputeStationaryLaw(c, {{0, 0}, {1, 1}, NoiseDistribution::kUniform}),
               Error);
}

TEST(StationaryLawTest, CovarianceMatchesKroneckerSolve) {
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 8; ++n) {
    const GameConfig c = Config(n);
    NoiseSpec noise{std::vector<double>(n, 0.0), {}};
    std::uniform_real_distribution<double> u(0.1, 2.0);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      noise.stddev.push_back(u(rng));
      sigma(i, i) = noise.stddev[i] * noise.stddev[i];
      total += sigma(i, i);
    }
    const Eigen::MatrixXd m =
        (Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n)) / (2.0 * n - 1.0);
    const Eigen::MatrixXd expected = oracle::LyapunovByKronecker(m, sigma);
    const StationaryLaw law = ComputeStationaryLaw(c, noise);
    EXPECT_LE((law.covariance - expected).cwiseAbs().maxCoeff(), 1e-12);
    const double nn = n;
    EXPECT_NEAR(law.price_variance,
                (2 * nn - 1) * (2 * nn - 1) / (4 * nn * nn * nn * (3 * nn - 2)) * total,
                1e-12);
  }
}

TEST(StationaryLawTest, SimulationAgrees) {
  const GameConfig c = Config(2);
  const NoiseSpec noise{{0.5, -0.2}, {1.0, 2.0}};
  const StationaryLaw law = ComputeStationaryLaw(c, noise);
  const auto path = SimulateStochastic(c, {0, {100, 100}}, noise, 101000, 9);
  double sum = 0.0, sq = 0.0;
  int count = 0;
  for (std::size_t t = 1001; t < path.size(); ++t) {
    const double p = StatePrice(c, path[t]);
    sum += p;
    sq += p * p;
    ++count;
  }
  const double mean = sum / count;
  const double var = sq / count - mean * mean;
  // Prices are AR(1) with coefficient rho; inflate the standard error.
  const double rho = 1.0 / 3.0;
  const double se = std::sqrt(law.price_variance / count * (1 + rho) / (1 - rho));
  EXPECT_NEAR(mean, law.price_mean, 3.0 * se);
  EXPECT_NEAR(var / law.price_variance, 1.0, 0.05);
}

}  // namespace
}  // namespace refprice
