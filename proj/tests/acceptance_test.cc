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

// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when
// any criterion fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.h"
#include "refprice/bidder_model.h"
#include "refprice/coalition.h"
#include "refprice/dynamics.h"
#include "refprice/estimation.h"
#include "refprice/game.h"
#include "refprice/tender_io.h"
#include "witness.h"

namespace refprice {
namespace {

int failures = 0;

void Report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s  C%-2d %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

GameConfig Normalized(int n = 10) {
  GameConfig c;
  c.estimate = 0.0;
  c.lower_bound = -0.25;
  c.upper_bound = 0.20;
  c.num_players = n;
  c.tick = 1e-6;
  return c;
}

GameConfig Services(int n, AwardRule rule = AwardRule::kProcurementMean) {
  return GameConfig::FromPercentBounds(100.0, n, ContractKind::kSuppliesServices, rule);
}

const BidderModelParams kFitted{8.0 / 74.0, 0.236527, 0.34617};

void TableThreeBids() {
  const double expected[] = {-0.01188, 0.00145, 0.01478, 0.02811, 0.04143};
  double worst = 0.0;
  for (int l = 2; l <= 6; ++l) {
    worst = std::max(worst, std::abs(CoalitionBid(Normalized(), kFitted, l) - expected[l - 2]));
  }
  Report(1, worst <= 5e-5, "coalition bid x* for l=2..6", Fmt("max |err| = %.2e (tol 5e-5)", worst));
}

void TableThreeRisks() {
  const double single[] = {0.25734, 0.07229, 0.03634, 0.02268, 0.01871};
  const double any[] = {0.94892, 0.52782, 0.30935, 0.20500, 0.17209};
  double worst_single = 0.0, worst_any = 0.0;
  std::string got = "p_single =";
  for (int l = 2; l <= 6; ++l) {
    const StealRisk r = StealProbabilities(Normalized(), kFitted, l);
    worst_single = std::max(worst_single, std::abs(r.p_single - single[l - 2]));
    worst_any = std::max(worst_any, std::abs(r.p_any_paper - any[l - 2]));
    got += Fmt(" %.5f", r.p_single);
  }
  Report(2, worst_single <= 1e-3 && worst_any <= 1e-3,
         "steal probabilities for l=2..6 (exponent N)",
         Fmt("max |err| p_single = %.2e, p_any = %.2e (tol 1e-3); ", worst_single,
             worst_any) +
             got);
}

void DeterministicDynamics() {
  double rate_err = 0.0;
  for (int n : {2, 5, 10}) {
    const GameConfig c = Services(n);
    const double rho = (n - 1.0) / (2.0 * n - 1.0);
    DynamicsState s{0, {}};
    for (int i = 0; i < n; ++i) s.x.push_back(75.0 + 45.0 * i / (n - 1));
    s.x[0] = 120.0;
    const double gap0 = std::abs(StatePrice(c, s) - c.estimate);
    for (int k = 1; k <= 30; ++k) {
      s = BestResponseStep(c, s);
      rate_err = std::max(rate_err, std::abs(std::abs(StatePrice(c, s) - c.estimate) -
                                             std::pow(rho, k) * gap0));
    }
  }
  double closed_err = 0.0;
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 20; ++n) {
    const GameConfig c = Services(n);
    std::uniform_real_distribution<double> u(c.lower_bound, c.upper_bound);
    DynamicsState x0{0, {}};
    for (int i = 0; i < n; ++i) x0.x.push_back(u(rng));
    DynamicsState it = x0;
    for (int k = 1; k <= 50; ++k) {
      it = BestResponseStep(c, it);
      const DynamicsState cf = ClosedFormTrajectory(c, x0, k);
      for (int i = 0; i < n; ++i) closed_err = std::max(closed_err, std::abs(cf.x[i] - it.x[i]));
    }
  }
  Report(3, rate_err <= 1e-12 && closed_err <= 1e-10, "deterministic dynamics",
         Fmt("price-rate err = %.2e (tol 1e-12), closed-form gap = %.2e (tol 1e-10)",
             rate_err, closed_err));
}

void CostFixedPoints() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int straddling = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::uniform_int_distribution<int> players(2, 12);
    const int n = players(rng);
    std::uniform_real_distribution<double> est(50.0, 5000.0);
    const GameConfig c =
        GameConfig::FromPercentBounds(est(rng), n, ContractKind::kSuppliesServices);
    std::uniform_real_distribution<double> cost(0.0, 1.3 * c.estimate);
    std::uniform_real_distribution<double> start(c.lower_bound, c.upper_bound);
    CostVector costs;
    DynamicsState s{0, {}};
    for (int i = 0; i < n; ++i) {
      costs.c.push_back(cost(rng));
      s.x.push_back(start(rng));
    }
    const DynamicsState fixed = CostFixedPoint(c, costs);
    for (int k = 0; k < 500; ++k) s = BestResponseStep(c, s, costs);
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(s.x[i] - fixed.x[i]) / c.estimate);
      straddling += costs.c[i] > c.estimate && fixed.x[i] != costs.c[i];
    }
  }
  Report(4, worst <= 1e-10, "cost fixed point, 100 random instances",
         Fmt("max relative gap = %.2e (tol 1e-10); floors above E released: %.0f", worst,
             straddling));
}

void DensityNormalization() {
  const GameConfig c = Normalized();
  // Stop at the level-400 barriers: the core holds mass (1-p)^401 < 1e-18 but
  // an unbounded density that no quadrature rule can sample.
  constexpr int kCore = 400;
  std::vector<double> breaks;
  for (int n = 0; n <= kCore; ++n) {
    const auto [a, b] = BarrierSequences(c, n);
    breaks.push_back(a);
    breaks.push_back(b);
  }
  const auto [core_lo, core_hi] = BarrierSequences(c, kCore);
  double worst = 0.0;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (Regime regime : {Regime::kLower, Regime::kUpper}) {
      auto f = [&](double y) { return RegimeDensity(c, y, p, regime); };
      const double mass = regime == Regime::kLower
                              ? oracle::IntegrateOutside(f, c.lower_bound, c.estimate, breaks,
                                                         core_lo, core_hi)
                              : oracle::IntegrateOutside(f, c.estimate, c.upper_bound, breaks,
                                                         core_lo, core_hi);
      worst = std::max(worst, std::abs(mass - 1.0));
    }
  }
  Report(5, worst <= 1e-6, "density integrates to 1", Fmt("max |mass - 1| = %.2e (tol 1e-6)", worst));
}

void MomentFidelity() {
  const GameConfig c = Normalized();
  std::mt19937_64 pick(6);
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  double worst_z = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const BidderModelParams m{prob(pick) / 2.0, prob(pick), prob(pick)};
    const Moments expected = MixtureMoments(m, c);
    const int draws = 1000000;
    Rng rng(7000 + rep);
    std::vector<double> y(draws);
    double sum = 0.0;
    for (double& v : y) sum += v = SampleBid(m, c, rng);
    const double mean = sum / draws;
    double m2 = 0.0, m4 = 0.0;
    for (double v : y) {
      const double d = (v - mean) * (v - mean);
      m2 += d;
      m4 += d * d;
    }
    m2 /= draws;
    m4 /= draws;
    const double se_mean = std::sqrt(expected.variance / draws);
    const double se_var = std::sqrt((m4 - m2 * m2) / draws);
    worst_z = std::max({worst_z, std::abs(mean - expected.mean) / se_mean,
                        std::abs(m2 - expected.variance) / se_var});
  }
  const Moments lo = RegimeMoments(c, 1.0, Regime::kLower);
  const Moments up = RegimeMoments(c, 1.0, Regime::kUpper);
  const bool limits = lo.mean == (c.estimate + c.lower_bound) / 2.0 &&
                      lo.variance == (c.estimate - c.lower_bound) *
                                         (c.estimate - c.lower_bound) / 12.0 &&
                      up.mean == (c.estimate + c.upper_bound) / 2.0 &&
                      up.variance == (c.upper_bound - c.estimate) *
                                         (c.upper_bound - c.estimate) / 12.0;
  Report(6, worst_z <= 3.0 && limits, "closed-form moments vs 1e6 draws",
         Fmt("max |z| = %.2f over 5 triples (tol 3); uniform limits exact: ", worst_z) +
             (limits ? "yes" : "no"));
}

void EstimatorRoundTrip() {
  const GameConfig c = Normalized();
  const BidSample s{SampleProfile({0.10, 0.25, 0.35}, c, 100000, 99).bids, {}};
  const EstimationResult mle = Estimate(s, c, EstimationMethod::kMle);
  const EstimationResult mom = Estimate(s, c, EstimationMethod::kMoments);
  double worst = 0.0;
  for (const auto* r : {&mle, &mom}) {
    worst = std::max({worst, std::abs(r->q_hat - 0.10), std::abs(r->plus->p_hat - 0.25),
                      std::abs(r->minus->p_hat - 0.35)});
  }
  const bool ll = mle.plus->log_likelihood >= mom.plus->log_likelihood &&
                  mle.minus->log_likelihood >= mom.minus->log_likelihood;
  Report(7, worst <= 0.02 && ll, "estimator round trip, M=1e5",
         Fmt("max |err| = %.4f (tol 0.02); MLE p+ %.4f p- %.4f; moments p+ %.4f",
             worst, mle.plus->p_hat, mle.minus->p_hat, mom.plus->p_hat) +
             Fmt(" p- %.4f; MLE loglik >= moment loglik: ", mom.minus->p_hat) +
             (ll ? "yes" : "no"));
}

void Coverage() {
  const GameConfig c = Normalized();
  int lower_hits = 0, upper_hits = 0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    const BidSample lo{SampleProfile({0.0, 1.0, 0.35}, c, 200, 20000 + r).bids, {}};
    const BidSample up{SampleProfile({1.0, 0.35, 1.0}, c, 200, 40000 + r).bids, {}};
    const auto a = MomentConfidenceInterval(lo, c, Regime::kLower, 0.01);
    const auto b = MomentConfidenceInterval(up, c, Regime::kUpper, 0.01);
    lower_hits += a.lo <= 0.35 && 0.35 <= a.hi;
    upper_hits += b.lo <= 0.35 && 0.35 <= b.hi;
  }
  const double lo_rate = static_cast<double>(lower_hits) / reps;
  const double up_rate = static_cast<double>(upper_hits) / reps;
  Report(8, lo_rate >= 0.97 && up_rate >= 0.97, "99% CI coverage, 500 x M=200",
         Fmt("lower %.3f, upper %.3f (need >= 0.97)", lo_rate, up_rate));
}

void StationaryLawCheck(const std::string& data_dir) {
  const int n = 5;
  const GameConfig c = Services(n);
  const NoiseSpec noise{{0.4, -0.1, 0.2, 0.0, 0.3}, {1.0, 0.5, 2.0, 1.5, 0.8}};
  const StationaryLaw law = ComputeStationaryLaw(c, noise);
  const int burn = 1000, steps = 100000;
  const auto path = SimulateStochastic(c, {0, std::vector<double>(n, 100.0)}, noise,
                                       burn + steps, 314);
  double sum = 0.0, sq = 0.0;
  for (int t = burn + 1; t <= burn + steps; ++t) {
    const double p = StatePrice(c, path[t]);
    sum += p;
    sq += p * p;
  }
  const double mean = sum / steps;
  const double var = sq / steps - mean * mean;
  double eps = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    eps += noise.mean[i];
    s2 += noise.stddev[i] * noise.stddev[i];
  }
  const double nn = n;
  const double mean_formula = c.estimate - (2 * nn - 1) / (2 * nn * nn) * eps;
  const double var_formula = (2 * nn - 1) * (2 * nn - 1) / (4 * nn * nn * nn * (3 * nn - 2)) * s2;
  const double rho = (nn - 1) / (2 * nn - 1);
  const double se = std::sqrt(var_formula / steps * (1 + rho) / (1 - rho));
  const bool mean_ok = std::abs(mean - mean_formula) <= 3 * se &&
                       std::abs(law.price_mean - mean_formula) < 1e-12;
  const bool var_ok = std::abs(var / var_formula - 1.0) <= 0.05 &&
                      std::abs(law.price_variance - var_formula) < 1e-12;

  const DeviationIngest agg =
      IngestDeviationsFile(data_dir + "/deviations_74.csv", -0.25, 0.20);
  const bool q_ok = EstimateQ(agg.sample) == 8.0 / 74.0 && agg.sample.size() == 74;
  Report(9, mean_ok && var_ok && q_ok, "stationary price law, 1e5 steps",
         Fmt("mean %.5f vs %.5f (3 SE = %.5f); ", mean, mean_formula, 3 * se) +
             Fmt("variance %.6f vs derived %.6f (%.2f%%), printed formula %.6f; ", var,
                 var_formula, 100 * (var / var_formula - 1), law.price_variance_printed) +
             Fmt("74-row sample q = %.5f", EstimateQ(agg.sample)));
}

void NoNashWitness() {
  const oracle::WitnessReport two = oracle::ScanForEquilibria(Services(2), 101);
  const oracle::WitnessReport three = oracle::ScanForEquilibria(Services(3), 101);
  Report(10, two.equilibria == 0 && three.equilibria == 0,
         "no pure equilibrium on a 101-point grid, mean rule",
         Fmt("N=2: %.0f profiles, %.0f survive; N=3: %.0f profiles, %.0f survive",
             two.profiles, two.equilibria, three.profiles, three.equilibria));
}

void MedianManipulation() {
  bool ok = true;
  std::string detail;
  for (int n : {3, 5, 7, 10}) {
    const GameConfig c = Normalized(n);
    const CoalitionPlan plan = MedianCoalitionPlan(c);
    const double full = SimulateMedianCoalition(c, 10000, 500 + n, UniformOutsiders(c));
    CoalitionPlan smaller = plan;
    smaller.size -= 1;
    smaller.high_bidders -= 1;
    const double sub =
        SimulateMedianCoalition(c, 10000, 900 + n, UniformOutsiders(c), smaller);
    ok = ok && full == 1.0 && sub < 1.0;
    detail += Fmt("N=%.0f l=%.0f rate %.4f, l-1 rate %.4f; ", n, plan.size, full, sub);
  }
  Report(11, ok, "median plan wins every trial", detail);
}

void EliminationSchedules() {
  bool interleave = true, shrink = true;
  for (const GameConfig& base : {Services(2), Normalized()}) {
    for (int n : {2, 5, 10}) {
      GameConfig c = base;
      c.num_players = n;
      const auto known = Eliminate(c, 40, EliminationSchedule::kKnownN);
      const auto unknown = Eliminate(c, 40, EliminationSchedule::kUnknownN);
      for (int k = 0; k < 40; ++k) {
        interleave = interleave && unknown[k].lo < known[k].lo &&
                     known[k].lo <= known[k].hi && known[k].hi < unknown[k].hi;
        if (k > 0) {
          shrink = shrink && known[k].width() < known[k - 1].width() &&
                   unknown[k].width() < unknown[k - 1].width();
        }
      }
    }
  }
  Report(12, interleave && shrink, "elimination schedules, n <= 40",
         std::string("interleaving ") + (interleave ? "holds" : "broken") +
             ", widths " + (shrink ? "strictly decreasing" : "not monotone"));
}

}  // namespace
}  // namespace refprice

int main(int argc, char** argv) {
  const std::string data_dir = argc > 1 ? argv[1] : REFPRICE_SOURCE_DIR "/data";
  using namespace refprice;
  TableThreeBids();
  TableThreeRisks();
  DeterministicDynamics();
  CostFixedPoints();
  DensityNormalization();
  MomentFidelity();
  EstimatorRoundTrip();
  Coverage();
  StationaryLawCheck(data_dir);
  NoNashWitness();
  MedianManipulation();
  EliminationSchedules();
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
