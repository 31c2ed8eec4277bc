// Copyright 2026 The rulegen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rulegen: generate test scripts from rule-based test strategies.
//
//   rulegen generate --bundle bundles/phonecall/manifest.json --out out
//   rulegen validate --strategy my.rules

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "rulegen/pipeline.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("rulegen");
  logger->set_pattern("%^%l%$: %v");
  const char* level = std::getenv("RULEGEN_LOG");
  logger->set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
  spdlog::set_default_logger(logger);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Rule-based test case generator"};
  app.require_subcommand(1);

  rulegen::RunConfig config;
  std::vector<std::string> strategies, goals;
  std::string bundle, out_dir = config.out_dir.string(), trace, stats;

  auto* gen = app.add_subcommand("generate", "Run the strategy and write trace, stats and scripts");
  gen->add_option("--strategy", strategies, "Strategy file (.rules, .mm); repeatable");
  gen->add_option("--goals", goals, "Goal file (.goals, .rules, .mm); repeatable");
  gen->add_option("--bundle", bundle, "Bundle manifest (JSON)");
  gen->add_option("--seed", config.seed, "Shuffle seed");
  gen->add_flag("--prune,!--no-prune", config.prune, "Skip iterations that cannot reach new goal values");
  gen->add_option("--out", out_dir, "Output directory");
  gen->add_option("--trace", trace, "Trace file (default <out>/trace.txt)");
  gen->add_option("--stats", stats, "Statistics file (default <out>/stats.json)");
  gen->add_option("--max", config.max_combinations, "Abort after this many combinations");

  auto* val = app.add_subcommand("validate", "Check strategy files for errors");
  val->add_option("--strategy", strategies, "Strategy file (.rules, .mm); repeatable");
  val->add_option("--bundle", bundle, "Bundle manifest whose defaults precede the strategies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rulegen::kExitConfig;
  }

  config.strategies.assign(strategies.begin(), strategies.end());
  config.goals.assign(goals.begin(), goals.end());
  if (!bundle.empty()) config.bundle = bundle;
  config.out_dir = out_dir;
  if (!trace.empty()) config.trace = trace;
  if (!stats.empty()) config.stats = stats;

  if (gen->parsed()) return rulegen::generate(config, std::cout, std::cerr);
  return rulegen::validate_cmd(config, std::cout, std::cerr);
}
