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

#ifndef REFPRICE_ESTIMATION_H_
#define REFPRICE_ESTIMATION_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "refprice/bidder_model.h"
#include "refprice/game.h"

namespace refprice {

// Observed bids as deviations from the estimate, usually (x - E) / E. The
// config passed alongside must be in the same unit (E = 0 for deviations).
struct BidSample {
  std::vector<double> deviations;
  std::vector<std::string> tender_ids;  // empty or one label per deviation
  // Rounding step of the deviations, 0 when they are exact. Points within a
  // few steps of E enter the likelihood as bin probabilities, since the
  // density diverges at E when p < 1/2.
  double resolution = 0.0;

  std::size_t size() const { return deviations.size(); }
};

enum class EstimationMethod { kMle, kMoments };

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct MleFit {
  double p = 0.0;
  double log_likelihood = 0.0;
};

struct MleOptions {
  double p_lo = 1e-4;
  double p_hi = 1.0;
  int grid_points = 200;
  double tolerance = 1e-12;
};

struct RegimeEstimate {
  int count = 0;
  double p_hat = 0.0;
  double log_likelihood = 0.0;
  std::optional<ConfidenceInterval> ci;  // absent for fewer than two points
};

struct EstimationResult {
  double q_hat = 0.0;
  std::optional<RegimeEstimate> plus;   // absent when no positive deviation
  std::optional<RegimeEstimate> minus;  // absent when no nonpositive deviation
  EstimationMethod method = EstimationMethod::kMle;
  double alpha = 0.01;
};

// {upper, lower}: strictly positive deviations, then the rest.
std::pair<BidSample, BidSample> SplitRegimes(const BidSample& sample);

// Share of strictly positive deviations.
double EstimateQ(const BidSample& sample);

double LogLikelihood(const BidSample& sample, double p, const GameConfig& config,
                     Regime regime);

// Bounded 1-D maximization of LogLikelihood in p: coarse grid scan, then a
// golden-section refinement around the best grid cell.
MleFit MleP(const BidSample& sample, const GameConfig& config, Regime regime,
            const MleOptions& options = {});

// Inverts the regime mean (E + p bound) / (1 + p); clamped to (0, 1].
double MomentP(const BidSample& sample, const GameConfig& config, Regime regime);

// CLT band on the regime mean mapped through the MomentP inverse. The
// mapping is monotone in the mean, so the image is an interval; it is
// returned with lo <= hi and clamped to [0, 1].
ConfidenceInterval MomentConfidenceInterval(const BidSample& sample,
                                            const GameConfig& config,
                                            Regime regime, double alpha);

EstimationResult Estimate(const BidSample& sample, const GameConfig& config,
                          EstimationMethod method, double alpha = 0.01);

}  // namespace refprice

#endif  // REFPRICE_ESTIMATION_H_
