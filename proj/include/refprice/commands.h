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

#ifndef REFPRICE_COMMANDS_H_
#define REFPRICE_COMMANDS_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "refprice/bidder_model.h"
#include "refprice/game.h"
#include "refprice/random.h"

namespace refprice {

enum class OutputFormat { kJson, kCsv };

struct RunConfig {
  GameConfig game;
  std::optional<BidderModelParams> model;
  Seed seed = 0;
  std::string out_dir;
  // Currency precision for rounding and serialization; also the tie tick.
  double precision = 0.01;
  OutputFormat format = OutputFormat::kJson;
};

// Normalized services setup: E = 0, A = -0.25, B = 0.20, N = 10, mean
// rule, precision 1e-6, model (8/74, 0.236527, 0.34617).
RunConfig DefaultRunConfig();

// Config document keys: E, bounds {mode: "percent"|"absolute", A, B}, N,
// rule, contract_kind, model {q, p_plus, p_minus}, precision. Missing keys
// keep their DefaultRunConfig value; percent bounds are given in percent
// (-25, 20) and default to the contract kind's thresholds.
RunConfig ParseRunConfig(const nlohmann::json& doc);
RunConfig LoadRunConfig(const std::string& path);

struct CommandArgs {
  std::vector<double> bids;
  std::string tenders_path;
  std::string deviations_path;
  int steps = 10;
  EliminationSchedule schedule = EliminationSchedule::kKnownN;
  std::vector<double> x0;
  std::vector<double> costs;
  std::vector<double> noise_mean;
  std::vector<double> noise_sd;
  bool truncate = false;
  int burn_in = 1000;
  int count = 1;
  double alpha = 0.01;
  int l_min = 2;
  int l_max = 6;
  int trials = 0;
  std::string sampler = "uniform";
  int coalition_size = 0;  // 0: the minimal median plan
  int grid = 451;
  int bins = 18;
};

struct CsvArtifact {
  std::string name;
  std::string content;
};

struct CommandResult {
  nlohmann::json document;
  std::vector<CsvArtifact> artifacts;
};

const std::vector<std::string>& CommandNames();

// Dispatches one subcommand. Missing command inputs raise UsageError.
CommandResult RunCommand(const std::string& command, const RunConfig& config,
                         const CommandArgs& args);

const char* AwardRuleName(AwardRule rule);
const char* ContractKindName(ContractKind kind);

}  // namespace refprice

#endif  // REFPRICE_COMMANDS_H_
