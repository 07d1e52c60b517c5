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

#include "refprice/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "refprice/coalition.h"
#include "refprice/dynamics.h"
#include "refprice/error.h"
#include "refprice/estimation.h"
#include "refprice/tender_io.h"

namespace refprice {

using nlohmann::json;

const char* AwardRuleName(AwardRule rule) {
  switch (rule) {
    case AwardRule::kGuessingGame:
      return "GuessingGame";
    case AwardRule::kProcurementMean:
      return "ProcurementMean";
    case AwardRule::kProcurementMedian:
      return "ProcurementMedian";
  }
  return "?";
}

const char* ContractKindName(ContractKind kind) {
  return kind == ContractKind::kWorks ? "Works" : "SuppliesServices";
}

namespace {

AwardRule ParseRule(const std::string& s) {
  if (s == "GuessingGame" || s == "guessing") return AwardRule::kGuessingGame;
  if (s == "ProcurementMean" || s == "mean") return AwardRule::kProcurementMean;
  if (s == "ProcurementMedian" || s == "median") return AwardRule::kProcurementMedian;
  throw Error(ErrorKind::kInvalidInput, "unknown rule '" + s + "'");
}

ContractKind ParseKind(const std::string& s) {
  if (s == "Works" || s == "works") return ContractKind::kWorks;
  if (s == "SuppliesServices" || s == "supplies_services") {
    return ContractKind::kSuppliesServices;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown contract_kind '" + s + "'");
}

void CheckPrecision(const RunConfig& config) {
  const GameConfig& g = config.game;
  if (!(config.precision >= 0.0) ||
      config.precision > (g.upper_bound - g.lower_bound) / 100.0) {
    throw Error(ErrorKind::kInvalidInput,
                "precision must be >= 0 and at most 1% of the bid range; "
                "normalized configs need a small precision such as 1e-6");
  }
}

std::string Price(const RunConfig& config, double value) {
  return FormatPrice(value, config.precision);
}

json PriceList(const RunConfig& config, const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(Price(config, v));
  return out;
}

json GameJson(const RunConfig& config) {
  const GameConfig& g = config.game;
  return {{"E", Price(config, g.estimate)},
          {"A", Price(config, g.lower_bound)},
          {"B", Price(config, g.upper_bound)},
          {"N", g.num_players},
          {"rule", AwardRuleName(g.award_rule)},
          {"contract_kind", ContractKindName(g.contract_kind)},
          {"precision", config.precision}};
}

json Envelope(const std::string& command, const RunConfig& config) {
  return {{"command", command}, {"seed", config.seed}, {"game", GameJson(config)}};
}

const BidderModelParams& RequireModel(const RunConfig& config,
                                      const std::string& command) {
  if (!config.model) {
    throw Error(ErrorKind::kUsageError,
                command + " needs model parameters (config key 'model')");
  }
  return *config.model;
}

std::vector<double> Broadcast(const std::vector<double>& v, int n,
                              const char* what) {
  if (v.size() == 1) return std::vector<double>(n, v[0]);
  if (v.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::kUsageError,
                std::string(what) + " needs 1 or N values");
  }
  return v;
}

// Relative-deviation game used for estimation and histograms.
GameConfig DeviationGame(const RunConfig& config) {
  GameConfig g = config.game;
  if (g.estimate != 0.0) {
    g.estimate = 0.0;
    g.lower_bound = RelativeLowerThreshold(g.contract_kind);
    g.upper_bound = RelativeUpperThreshold(g.contract_kind);
  }
  g.tick = 0.0;
  return g;
}

struct LoadedSample {
  BidSample sample;
  int rows_read = 0;
  int rows_dropped = 0;
};

std::optional<LoadedSample> LoadSample(const RunConfig& config,
                                       const CommandArgs& args) {
  if (!args.tenders_path.empty()) {
    const TenderIngest in =
        IngestTendersFile(args.tenders_path, config.game.contract_kind);
    return LoadedSample{in.sample, in.rows_read, in.rows_dropped};
  }
  if (!args.deviations_path.empty()) {
    const GameConfig g = DeviationGame(config);
    const DeviationIngest in =
        IngestDeviationsFile(args.deviations_path, g.lower_bound, g.upper_bound);
    return LoadedSample{in.sample, in.rows_read, in.rows_dropped};
  }
  return std::nullopt;
}

json OutcomeJson(const RunConfig& config, const std::string& id,
                 const GameConfig& game, const BidProfile& bids,
                 const AuctionOutcome& outcome) {
  return {{"tender_id", id},
          {"estimate", Price(config, game.estimate)},
          {"bounds", {Price(config, game.lower_bound), Price(config, game.upper_bound)}},
          {"bids", PriceList(config, bids.bids)},
          {"reference_price", Price(config, outcome.reference_price)},
          {"winner", outcome.winner},
          {"winning_bid", Price(config, bids.bids[outcome.winner])},
          {"side", outcome.side == AwardSide::kByDefault ? "ByDefault" : "ByExcess"},
          {"excluded", outcome.excluded},
          {"tie_group", outcome.tie_group},
          {"tie_broken_by_lot", outcome.tie_broken_by_lot}};
}

CommandResult WinnerCommand(const RunConfig& config, const CommandArgs& args) {
  CommandResult result;
  result.document = Envelope("winner", config);
  json tenders = json::array();
  if (!args.tenders_path.empty()) {
    const TenderIngest in =
        IngestTendersFile(args.tenders_path, config.game.contract_kind);
    for (std::size_t k = 0; k < in.tenders.size(); ++k) {
      const TenderRecord& t = in.tenders[k];
      GameConfig game = config.game;
      game.estimate = t.estimate;
      game.lower_bound = t.estimate * (1.0 + RelativeLowerThreshold(t.contract_kind));
      game.upper_bound = t.estimate * (1.0 + RelativeUpperThreshold(t.contract_kind));
      game.num_players = std::max<int>(2, static_cast<int>(t.bids.size()));
      game.tick = config.precision;
      const BidProfile bids{t.bids, PriceUnit::kAbsolute};
      tenders.push_back(OutcomeJson(config, t.tender_id, game, bids,
                                    DetermineWinner(game, bids, SplitSeed(config.seed, k))));
    }
  } else if (!args.bids.empty()) {
    GameConfig game = config.game;
    game.num_players = std::max<int>(2, static_cast<int>(args.bids.size()));
    game.tick = config.precision;
    const BidProfile bids{args.bids, PriceUnit::kAbsolute};
    tenders.push_back(
        OutcomeJson(config, "cli", game, bids, DetermineWinner(game, bids, config.seed)));
  } else {
    throw Error(ErrorKind::kUsageError, "winner needs --bids or --tenders");
  }
  result.document["tenders"] = std::move(tenders);
  return result;
}

CommandResult EliminateCommand(const RunConfig& config, const CommandArgs& args) {
  CommandResult result;
  result.document = Envelope("eliminate", config);
  const bool known = args.schedule == EliminationSchedule::kKnownN;
  result.document["schedule"] = known ? "KnownN" : "UnknownN";
  json rows = json::array();
  for (const RationalInterval& r : Eliminate(config.game, args.steps, args.schedule)) {
    rows.push_back({{"step", r.step},
                    {"lo", Price(config, r.lo)},
                    {"hi", Price(config, r.hi)},
                    {"lo_closed", r.lo_closed},
                    {"hi_closed", r.hi_closed},
                    {"width", r.width()}});
  }
  result.document["intervals"] = std::move(rows);
  const EquilibriumResult eq = EquilibriumAnalysis(config.game);
  result.document["equilibrium"] =
      eq.has_nash ? json{{"kind", "UniqueNash"}, {"price", Price(config, eq.price)}}
                  : json{{"kind", "NoNashEquilibrium"}};
  return result;
}

CommandResult DynamicsCommand(const RunConfig& config, const CommandArgs& args) {
  const GameConfig& game = config.game;
  const int n = game.num_players;
  if (args.steps < 1) throw Error(ErrorKind::kUsageError, "--steps must be >= 1");
  CommandResult result;
  result.document = Envelope("dynamics", config);

  DynamicsState x0;
  if (args.x0.empty()) {
    for (int i = 0; i < n; ++i) {
      x0.x.push_back(game.lower_bound +
                     (game.upper_bound - game.lower_bound) * i / std::max(1, n - 1));
    }
  } else {
    x0.x = Broadcast(args.x0, n, "--x0");
  }
  std::optional<CostVector> costs;
  if (!args.costs.empty()) costs = CostVector{Broadcast(args.costs, n, "--costs")};

  std::vector<DynamicsState> path;
  const bool noisy = !args.noise_mean.empty();
  if (noisy) {
    NoiseSpec noise{Broadcast(args.noise_mean, n, "--eps"),
                    args.noise_sd.empty() ? std::vector<double>(n, 0.0)
                                          : Broadcast(args.noise_sd, n, "--sigma")};
    StochasticOptions options{costs, args.truncate};
    path = SimulateStochastic(game, x0, noise, args.steps, config.seed, options);
    if (!costs && !args.truncate) {
      const StationaryLaw law = ComputeStationaryLaw(game, noise);
      json cov = json::array();
      for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) row.push_back(law.covariance(i, j));
        cov.push_back(std::move(row));
      }
      std::vector<double> mean(law.mean.data(), law.mean.data() + n);
      result.document["stationary_law"] = {
          {"mean", PriceList(config, mean)},
          {"covariance", std::move(cov)},
          {"price_mean", Price(config, law.price_mean)},
          {"price_variance_derived", law.price_variance},
          {"price_variance_printed", law.price_variance_printed}};
    }
    const int burn = std::min(args.burn_in, args.steps - 1);
    double sum = 0.0;
    double sum_sq = 0.0;
    int count = 0;
    for (std::size_t t = burn + 1; t < path.size(); ++t) {
      const double p = StatePrice(game, path[t]);
      sum += p;
      sum_sq += p * p;
      ++count;
    }
    const double mean = sum / count;
    const double var = count > 1 ? (sum_sq - count * mean * mean) / (count - 1) : 0.0;
    result.document["simulated"] = {{"burn_in", burn},
                                    {"samples", count},
                                    {"price_mean", Price(config, mean)},
                                    {"price_variance", var}};
  } else {
    path.push_back(x0);
    for (int t = 0; t < args.steps; ++t) {
      path.push_back(costs ? BestResponseStep(game, path.back(), *costs)
                           : BestResponseStep(game, path.back()));
    }
    if (!costs) {
      const DynamicsState closed = ClosedFormTrajectory(game, x0, args.steps);
      double gap = 0.0;
      for (int i = 0; i < n; ++i) {
        gap = std::max(gap, std::abs(closed.x[i] - path.back().x[i]));
      }
      result.document["closed_form_gap"] = gap;
      result.document["price_recursion"] =
          Price(config, PriceRecursion(game, StatePrice(game, x0), args.steps));
    }
  }
  if (costs) result.document["cost_fixed_point"] = PriceList(config, CostFixedPoint(game, *costs).x);
  result.document["steps"] = args.steps;
  result.document["final_state"] = PriceList(config, path.back().x);
  result.document["final_price"] = Price(config, StatePrice(game, path.back()));

  std::ostringstream csv;
  csv << "t";
  for (int i = 1; i <= n; ++i) csv << ",x_" << i;
  csv << ",price\n";
  for (const DynamicsState& s : path) {
    csv << s.t;
    for (double v : s.x) csv << ',' << Price(config, v);
    csv << ',' << Price(config, StatePrice(game, s)) << '\n';
  }
  result.artifacts.push_back({"dynamics_trajectory.csv", csv.str()});
  return result;
}

CommandResult SampleCommand(const RunConfig& config, const CommandArgs& args) {
  const BidderModelParams& model = RequireModel(config, "sample");
  if (args.count < 1) throw Error(ErrorKind::kUsageError, "--count must be >= 1");
  const GameConfig& game = config.game;
  CommandResult result;
  result.document = Envelope("sample", config);

  std::vector<TenderRecord> tenders;
  BidSample flat;
  double sum = 0.0;
  int above = 0;
  for (int k = 0; k < args.count; ++k) {
    char id[32];
    std::snprintf(id, sizeof id, "T%04d", k + 1);
    BidProfile profile =
        SampleProfile(model, game, game.num_players, SplitSeed(config.seed, k));
    for (double& x : profile.bids) {
      x = RoundToTick(x, config.precision);
      sum += x;
      if (x > game.estimate) ++above;
      flat.deviations.push_back(x);
    }
    tenders.push_back({id, game.estimate, profile.bids, game.contract_kind});
  }
  const int draws = args.count * game.num_players;
  std::ostringstream csv;
  std::string name;
  if (game.estimate > 0.0) {
    WriteTenders(csv, tenders, config.precision);
    name = "sample_tenders.csv";
  } else {
    WriteDeviations(csv, flat, config.precision);
    name = "sample_deviations.csv";
  }
  result.artifacts.push_back({name, csv.str()});
  result.document["tenders"] = args.count;
  result.document["bids_per_tender"] = game.num_players;
  result.document["draws"] = draws;
  result.document["mean_bid"] = Price(config, sum / draws);
  result.document["share_above_estimate"] = static_cast<double>(above) / draws;
  result.document["artifact"] = name;
  return result;
}

json RegimeJson(const std::optional<RegimeEstimate>& est) {
  if (!est) return nullptr;
  json out = {{"count", est->count},
              {"p_hat", est->p_hat},
              {"mean_level", 1.0 / est->p_hat},
              {"log_likelihood", est->log_likelihood}};
  out["ci"] = est->ci ? json{{"lo", est->ci->lo}, {"hi", est->ci->hi}} : json(nullptr);
  return out;
}

CommandResult EstimateCommand(const RunConfig& config, const CommandArgs& args) {
  const auto loaded = LoadSample(config, args);
  if (!loaded) {
    throw Error(ErrorKind::kUsageError, "estimate needs --tenders or --deviations");
  }
  if (loaded->sample.deviations.empty()) {
    throw Error(ErrorKind::kInvalidInput, "every row was out of bounds");
  }
  const GameConfig game = DeviationGame(config);
  CommandResult result;
  result.document = Envelope("estimate", config);
  result.document["rows_read"] = loaded->rows_read;
  result.document["rows_dropped"] = loaded->rows_dropped;
  result.document["M"] = loaded->sample.size();
  result.document["alpha"] = args.alpha;
  result.document["relative_bounds"] = {game.lower_bound, game.upper_bound};
  for (const auto& [key, method] :
       {std::pair{"mle", EstimationMethod::kMle},
        std::pair{"moments", EstimationMethod::kMoments}}) {
    const EstimationResult est = Estimate(loaded->sample, game, method, args.alpha);
    result.document["q_hat"] = est.q_hat;
    result.document[key] = {{"plus", RegimeJson(est.plus)},
                            {"minus", RegimeJson(est.minus)}};
  }
  return result;
}

CommandResult CoalitionCommand(const RunConfig& config, const CommandArgs& args) {
  const BidderModelParams& model = RequireModel(config, "coalition");
  if (args.l_min < 2 || args.l_max < args.l_min ||
      args.l_max > config.game.num_players) {
    throw Error(ErrorKind::kUsageError, "need 2 <= --l-min <= --l-max <= N");
  }
  CommandResult result;
  result.document = Envelope("coalition", config);
  result.document["game"]["rule"] = AwardRuleName(AwardRule::kProcurementMean);
  GameConfig game = config.game;
  game.tick = config.precision;
  json rows = json::array();
  for (int l = args.l_min; l <= args.l_max; ++l) {
    const StealRisk risk =
        args.trials > 0
            ? SimulateCoalition(game, model, l, args.trials, SplitSeed(config.seed, l))
            : StealProbabilities(game, model, l);
    json row = {{"l", l},
                {"x_star", Price(config, risk.x_star)},
                {"p_single", risk.p_single},
                {"p_any_paper", risk.p_any_paper},
                {"p_any_literal", risk.p_any_literal}};
    if (risk.mc_win_rate) {
      row["mc_win_rate"] = *risk.mc_win_rate;
      row["mc_trials"] = risk.mc_trials;
    }
    rows.push_back(std::move(row));
  }
  result.document["outsider_mean"] = Price(config, MixtureMoments(model, game).mean);
  result.document["rows"] = std::move(rows);
  return result;
}

CommandResult MedianCoalitionCommand(const RunConfig& base, const CommandArgs& args) {
  RunConfig config = base;
  config.game.award_rule = AwardRule::kProcurementMedian;
  GameConfig game = config.game;
  game.tick = config.precision;
  CoalitionPlan plan = MedianCoalitionPlan(game);
  if (args.coalition_size > 0) {
    if (args.coalition_size > game.num_players) {
      throw Error(ErrorKind::kUsageError, "--size exceeds N");
    }
    plan.size = args.coalition_size;
    plan.high_bidders = args.coalition_size - 1;
  }
  OutsiderSampler sampler;
  if (args.sampler == "uniform") {
    sampler = UniformOutsiders(game);
  } else if (args.sampler == "model") {
    sampler = ModelOutsiders(game, RequireModel(config, "median-coalition"));
  } else if (args.sampler == "lower") {
    sampler = [lo = game.lower_bound](Rng&) { return lo; };
  } else if (args.sampler == "upper") {
    sampler = [hi = game.upper_bound](Rng&) { return hi; };
  } else {
    throw Error(ErrorKind::kUsageError, "unknown --sampler '" + args.sampler + "'");
  }
  const int trials = args.trials > 0 ? args.trials : 10000;
  CommandResult result;
  result.document = Envelope("median-coalition", config);
  result.document["plan"] = {{"size", plan.size},
                             {"high_bidders", plan.high_bidders},
                             {"designated_bid", Price(config, plan.designated_bid)}};
  result.document["sampler"] = args.sampler;
  result.document["trials"] = trials;
  result.document["win_rate"] =
      SimulateMedianCoalition(game, trials, config.seed, sampler, plan);
  return result;
}

CommandResult DensityCommand(const RunConfig& config, const CommandArgs& args) {
  const BidderModelParams& model = RequireModel(config, "density");
  if (args.grid < 2) throw Error(ErrorKind::kUsageError, "--grid must be >= 2");
  const GameConfig& game = config.game;
  CommandResult result;
  result.document = Envelope("density", config);
  const Moments m = MixtureMoments(model, game);
  result.document["model"] = {{"q", model.q}, {"p_plus", model.p_plus},
                              {"p_minus", model.p_minus}};
  result.document["mean"] = Price(config, m.mean);
  result.document["variance"] = m.variance;
  result.document["variance_printed"] = PrintedMixtureVariance(model, game);
  result.document["expected_reference_price"] =
      Price(config, ExpectedReferencePrice(model, game));
  result.document["grid_points"] = args.grid;

  std::ostringstream csv;
  csv << "y,density,cdf\n";
  char buf[64];
  for (int i = 0; i < args.grid; ++i) {
    const double y = game.lower_bound +
                     (game.upper_bound - game.lower_bound) * i / (args.grid - 1);
    csv << Price(config, y);
    std::snprintf(buf, sizeof buf, ",%.10g", Density(model, game, y));
    csv << buf;
    std::snprintf(buf, sizeof buf, ",%.10g\n", Cdf(model, game, y));
    csv << buf;
  }
  result.artifacts.push_back({"density.csv", csv.str()});

  if (const auto loaded = LoadSample(config, args)) {
    const GameConfig dev = DeviationGame(config);
    const auto bins = Histogram(loaded->sample, args.bins, dev.lower_bound, dev.upper_bound);
    std::ostringstream hist;
    WriteHistogram(hist, bins, config.precision);
    result.artifacts.push_back({"histogram.csv", hist.str()});
    result.document["histogram"] = {{"bins", args.bins},
                                    {"M", loaded->sample.size()},
                                    {"rows_dropped", loaded->rows_dropped}};
  }
  return result;
}

}  // namespace

RunConfig DefaultRunConfig() {
  RunConfig config;
  config.game.estimate = 0.0;
  config.game.lower_bound = -0.25;
  config.game.upper_bound = 0.20;
  config.game.num_players = 10;
  config.game.award_rule = AwardRule::kProcurementMean;
  config.game.contract_kind = ContractKind::kSuppliesServices;
  config.precision = 1e-6;
  config.game.tick = config.precision;
  config.model = BidderModelParams{8.0 / 74.0, 0.236527, 0.34617};
  return config;
}

RunConfig ParseRunConfig(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::kInvalidInput, "config must be an object");
  RunConfig config = DefaultRunConfig();
  GameConfig& g = config.game;
  try {
    if (doc.contains("contract_kind")) g.contract_kind = ParseKind(doc.at("contract_kind"));
    if (doc.contains("rule")) g.award_rule = ParseRule(doc.at("rule"));
    if (doc.contains("N")) g.num_players = doc.at("N").get<int>();
    if (doc.contains("E")) g.estimate = doc.at("E").get<double>();
    const std::string mode = doc.contains("bounds")
                                 ? doc.at("bounds").value("mode", std::string("absolute"))
                                 : std::string("absolute");
    if (mode == "percent") {
      const json& b = doc.at("bounds");
      const double lo = b.value("A", 100.0 * RelativeLowerThreshold(g.contract_kind));
      const double hi = b.value("B", 100.0 * RelativeUpperThreshold(g.contract_kind));
      g.lower_bound = g.estimate * (1.0 + lo / 100.0);
      g.upper_bound = g.estimate * (1.0 + hi / 100.0);
      config.precision = 0.01;
    } else if (mode == "absolute") {
      if (doc.contains("bounds")) {
        g.lower_bound = doc.at("bounds").at("A").get<double>();
        g.upper_bound = doc.at("bounds").at("B").get<double>();
      }
    } else {
      throw Error(ErrorKind::kInvalidInput, "bounds.mode must be percent or absolute");
    }
    if (doc.contains("model")) {
      const json& m = doc.at("model");
      if (m.is_null()) {
        config.model.reset();
      } else {
        config.model = BidderModelParams{m.at("q").get<double>(),
                                         m.at("p_plus").get<double>(),
                                         m.at("p_minus").get<double>()};
        config.model->Validate();
      }
    }
    if (doc.contains("precision")) config.precision = doc.at("precision").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, std::string("config: ") + e.what());
  }
  g.tick = config.precision;
  g.Validate();
  CheckPrecision(config);
  return config;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, std::string("config: ") + e.what());
  }
  return ParseRunConfig(doc);
}

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {
      "winner", "eliminate", "dynamics", "sample",
      "estimate", "coalition", "median-coalition", "density"};
  return names;
}

CommandResult RunCommand(const std::string& command, const RunConfig& config,
                         const CommandArgs& args) {
  config.game.Validate();
  CheckPrecision(config);
  if (command == "winner") return WinnerCommand(config, args);
  if (command == "eliminate") return EliminateCommand(config, args);
  if (command == "dynamics") return DynamicsCommand(config, args);
  if (command == "sample") return SampleCommand(config, args);
  if (command == "estimate") return EstimateCommand(config, args);
  if (command == "coalition") return CoalitionCommand(config, args);
  if (command == "median-coalition") return MedianCoalitionCommand(config, args);
  if (command == "density") return DensityCommand(config, args);
  throw Error(ErrorKind::kUsageError, "unknown command '" + command + "'");
}

}  // namespace refprice
