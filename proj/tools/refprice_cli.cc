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

// Command-line front end. Usage:
//
//   refprice [--config cfg.json] [--seed 7] [--out dir] [--format json|csv] \
//       <command> [command flags]
//
// The JSON document goes to stdout unless --out is given, in which case it
// is written to <out>/<command>.json with CSV artifacts beside it.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "refprice/commands.h"
#include "refprice/error.h"

namespace {

int ExitCode(refprice::ErrorKind kind) {
  switch (kind) {
    case refprice::ErrorKind::kUsageError:
      return 2;
    case refprice::ErrorKind::kParseError:
      return 3;
    case refprice::ErrorKind::kInvalidInput:
      return 4;
    default:
      return 5;
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw refprice::Error(refprice::ErrorKind::kInvalidInput,
                          "cannot write " + path.string());
  }
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference-price auction toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  refprice::Seed seed = 0;
  std::string out_dir;
  std::string format = "json";
  app.add_option("--config", config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "stdout format")
      ->check(CLI::IsMember({"json", "csv"}));

  refprice::CommandArgs args;
  std::string schedule = "known";

  auto* winner = app.add_subcommand("winner", "award one or more tenders");
  winner->add_option("--bids", args.bids, "bid prices")->delimiter(',');
  winner->add_option("--tenders", args.tenders_path, "TenderCSV file");

  auto* eliminate =
      app.add_subcommand("eliminate", "iterated elimination intervals");
  eliminate->add_option("--steps", args.steps, "number of rounds");
  eliminate->add_option("--schedule", schedule, "known or unknown N")
      ->check(CLI::IsMember({"known", "unknown"}));

  auto* dynamics = app.add_subcommand("dynamics", "repeated best responses");
  dynamics->add_option("--steps", args.steps, "rounds to simulate");
  dynamics->add_option("--x0", args.x0, "initial bids (1 or N)")
      ->delimiter(',');
  dynamics->add_option("--costs", args.costs, "cost floors (1 or N)")
      ->delimiter(',');
  dynamics->add_option("--eps", args.noise_mean, "noise means (1 or N)")
      ->delimiter(',');
  dynamics->add_option("--sigma", args.noise_sd, "noise std devs (1 or N)")
      ->delimiter(',');
  dynamics->add_flag("--truncate", args.truncate, "clamp bids to [A, B]");
  dynamics->add_option("--burn-in", args.burn_in, "rounds skipped in stats");

  auto* sample = app.add_subcommand("sample", "draw synthetic tenders");
  sample->add_option("--count", args.count, "number of tenders");

  auto* estimate = app.add_subcommand("estimate", "fit the bidder model");
  estimate->add_option("--tenders", args.tenders_path, "TenderCSV file");
  estimate->add_option("--deviations", args.deviations_path,
                       "DeviationCSV file");
  estimate->add_option("--alpha", args.alpha, "CI level is 1 - alpha");

  auto* coalition = app.add_subcommand("coalition", "mean-rule steal risk");
  coalition->add_option("--l-min", args.l_min, "smallest coalition");
  coalition->add_option("--l-max", args.l_max, "largest coalition");
  coalition->add_option("--trials", args.trials, "Monte Carlo trials");

  auto* median =
      app.add_subcommand("median-coalition", "median-rule manipulation");
  median->add_option("--trials", args.trials, "Monte Carlo trials");
  median->add_option("--sampler", args.sampler, "outsider bids")
      ->check(CLI::IsMember({"uniform", "model", "lower", "upper"}));
  median->add_option("--size", args.coalition_size,
                     "coalition size (default: minimal plan)");

  auto* density = app.add_subcommand("density", "model density on a grid");
  density->add_option("--grid", args.grid, "grid points");
  density->add_option("--tenders", args.tenders_path, "TenderCSV histogram");
  density->add_option("--deviations", args.deviations_path,
                      "DeviationCSV histogram");
  density->add_option("--bins", args.bins, "histogram bins");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version are successes; anything else is a usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    refprice::RunConfig config = config_path.empty()
                                     ? refprice::DefaultRunConfig()
                                     : refprice::LoadRunConfig(config_path);
    config.seed = seed;
    config.out_dir = out_dir;
    config.format = format == "csv" ? refprice::OutputFormat::kCsv
                                    : refprice::OutputFormat::kJson;
    args.schedule = schedule == "unknown"
                        ? refprice::EliminationSchedule::kUnknownN
                        : refprice::EliminationSchedule::kKnownN;

    const refprice::CommandResult result =
        refprice::RunCommand(command, config, args);
    const std::string doc = result.document.dump(2) + "\n";
    if (!out_dir.empty()) {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      WriteFile(dir / (command + ".json"), doc);
      for (const auto& artifact : result.artifacts) {
        WriteFile(dir / artifact.name, artifact.content);
      }
    } else if (config.format == refprice::OutputFormat::kCsv) {
      if (result.artifacts.empty()) {
        throw refprice::Error(refprice::ErrorKind::kUsageError,
                              command + " has no CSV output; use --format json");
      }
      std::cout << result.artifacts.front().content;
    } else {
      std::cout << doc;
    }
  } catch (const refprice::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.kind() == refprice::ErrorKind::kUsageError) {
      std::cerr << app.get_subcommand(command)->help();
    }
    return ExitCode(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
