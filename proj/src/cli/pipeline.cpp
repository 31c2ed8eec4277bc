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

#include "rulegen/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "rulegen/phonecall.hpp"

namespace rulegen {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> path_list(const json& j, const char* key, const fs::path& base) {
  std::vector<fs::path> out;
  if (!j.contains(key)) return out;
  for (const auto& item : j.at(key)) out.push_back(base / item.get<std::string>());
  return out;
}

}  // namespace

BundleManifest load_manifest(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  try {
    BundleManifest m;
    m.name = j.value("name", "");
    m.model = j.at("model").get<std::string>();
    m.solver = j.value("solver", m.model);
    const auto& focus = j.at("focus");
    m.focus.function = focus.at("function").get<std::string>();
    m.focus.params = focus.at("params").get<std::vector<std::string>>();
    if (focus.contains("args")) {
      for (const auto& [param, key] : focus.at("args").items()) m.focus.args.emplace(param, PropertyKey(key.get<std::string>()));
    }
    if (j.contains("interface")) {
      for (const auto& f : j.at("interface")) m.interface.insert(f.get<std::string>());
    }
    if (j.contains("template")) m.template_path = base / j.at("template").get<std::string>();
    m.defaults = path_list(j, "defaults", base);
    m.strategies = path_list(j, "strategies", base);
    m.goals = path_list(j, "goals", base);
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

BundleComponents bundle_components(const std::string& model, const std::string& solver) {
  if (model != "phonecall") throw ConfigError("unknown model '" + model + "'");
  if (solver != "phonecall") throw ConfigError("unknown solver '" + solver + "'");
  return {std::make_shared<phonecall::PhoneModel>(), std::make_shared<phonecall::PhoneSolver>(),
          phonecall::functions()};
}

namespace {

// Everything generate and validate need, loaded before any output exists.
struct Loaded {
  std::optional<BundleManifest> manifest;
  BundleComponents components;
  RuleSet rules;
  std::vector<Goal> goals;
  std::vector<CoverageRequest> coverage;
  std::vector<PropertyKey> name_parts;
  std::vector<Diagnostic> diagnostics;
  std::optional<ScriptTemplate> script_template;
};

StrategyDocument load_doc(const fs::path& path) {
  try {
    auto doc = load_strategy(path);
    spdlog::debug("loaded {}: {} rules, {} goals", path.string(), doc.rules.size(), doc.goals.size());
    return doc;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Loaded load(const RunConfig& config, bool with_goals) {
  Loaded l;
  if (config.bundle) {
    l.manifest = load_manifest(*config.bundle);
    l.components = bundle_components(l.manifest->model, l.manifest->solver);
    if (l.manifest->template_path) {
      try {
        l.script_template.emplace(read_text(*l.manifest->template_path));
      } catch (const TemplateError& e) {
        throw ConfigError(l.manifest->template_path->string() + ": " + e.what());
      }
    }
  }
  l.rules.functions = l.components.functions ? l.components.functions
                                             : std::make_shared<FunctionTable>(FunctionTable::with_builtins());

  std::vector<fs::path> strategies = config.strategies;
  std::vector<fs::path> goal_files = config.goals;
  if (strategies.empty() && l.manifest) {
    strategies = l.manifest->strategies;
    if (goal_files.empty()) goal_files = l.manifest->goals;
  }
  if (strategies.empty()) throw ConfigError("no strategy given");
  if (!with_goals) goal_files.clear();

  std::vector<fs::path> files;
  if (l.manifest) files = l.manifest->defaults;
  files.insert(files.end(), strategies.begin(), strategies.end());
  files.insert(files.end(), goal_files.begin(), goal_files.end());

  std::set<std::string> goal_names;
  for (const auto& f : files) {
    auto doc = load_doc(f);
    l.rules.append(doc.rules);
    for (auto& d : doc.diagnostics) l.diagnostics.push_back(std::move(d));
    for (const auto& k : doc.name_parts) {
      if (std::find(l.name_parts.begin(), l.name_parts.end(), k) == l.name_parts.end()) l.name_parts.push_back(k);
    }
    if (!with_goals) continue;
    for (auto& g : doc.goals) {
      if (!goal_names.insert(g.name).second) throw ConfigError(f.string() + ": duplicate goal '" + g.name + "'");
      l.goals.push_back(std::move(g));
    }
    for (auto& c : doc.coverage) {
      if (!goal_names.insert(c.name).second) throw ConfigError(f.string() + ": duplicate goal '" + c.name + "'");
      l.coverage.push_back(std::move(c));
    }
  }

  if (!l.coverage.empty() && !l.components.model) throw ConfigError("coverage goals need a bundle model");
  if (!l.coverage.empty()) {
    auto model_goals = coverage_goals_from_model(*l.components.model);
    auto find = [&](const char* name) -> const Goal* {
      for (const auto& g : model_goals) {
        if (g.name == name) return &g;
      }
      return nullptr;
    };
    for (const auto& c : l.coverage) {
      std::optional<Goal> g;
      switch (c.kind) {
        case CoverageKind::kStatements: if (auto* p = find(kStatementGoal)) g = *p; break;
        case CoverageKind::kMcdc: if (auto* p = find(kMcdcGoal)) g = *p; break;
        case CoverageKind::kBoundaries: if (auto* p = find(kBoundaryGoal)) g = *p; break;
        case CoverageKind::kPaths: g = path_coverage_goal(); break;
      }
      if (!g) {
        spdlog::warn("{}: model has nothing to cover for '{}'", c.location.to_string(), c.name);
        continue;
      }
      g->name = c.name;
      g->location = c.location;
      l.goals.push_back(std::move(*g));
    }
  }

  auto rule_diagnostics = validate(l.rules);
  l.diagnostics.insert(l.diagnostics.end(), rule_diagnostics.begin(), rule_diagnostics.end());
  return l;
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& err) {
  for (const auto& d : diagnostics) err << d.to_string() << "\n";
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

int generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Loaded l;
  try {
    l = load(config, true);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  print_diagnostics(l.diagnostics, err);
  if (has_errors(l.diagnostics)) return kExitValidation;

  const fs::path trace_path = config.trace.value_or(config.out_dir / "trace.txt");
  const fs::path stats_path = config.stats.value_or(config.out_dir / "stats.json");
  std::ofstream trace, stats;
  try {
    fs::create_directories(config.out_dir);
    trace = open_output(trace_path);
    stats = open_output(stats_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    GoalEngine goals(l.goals, l.rules.functions);
    AssemblySpec spec;
    const bool assemble = static_cast<bool>(l.components.model);
    if (assemble) {
      spec.focus = l.manifest->focus;
      spec.interface = l.manifest->interface;
      spec.name_parts = l.name_parts;
    }
    std::unique_ptr<GoalPruner> pruner;
    if (config.prune && !l.goals.empty()) {
      auto derived = assemble ? synthesized_reads(spec, *l.components.solver)
                              : std::map<PropertyKey, std::set<PropertyKey>>{};
      pruner = std::make_unique<GoalPruner>(goals, l.rules, std::move(derived));
    }

    RunOptions options;
    options.seed = config.seed;
    options.max_combinations = config.max_combinations;
    options.observer = pruner.get();

    std::uint64_t scripts = 0;
    RunSummary summary = run(l.rules, options, [&](CombinationContext& c) {
      // The trace shows the engine's stream, before assembly resolves more.
      trace << c.combination().trace_line() << "\n";
      std::optional<TestCaseRecord> record;
      if (assemble) record = assemble_test_case(c, *l.components.model, *l.components.solver, spec);
      if (!goals.select(c) || !record || !l.script_template) return;
      std::ofstream script = open_output(config.out_dir / ("tc_" + std::to_string(record->id) + ".txt"));
      script << l.script_template->render(*record);
      ++scripts;
    });

    stats << report_json(goals, {summary.emitted, summary.skipped, config.seed});
    auto [achieved, total] = goals.finite_totals();
    out << "emitted=" << summary.emitted << " skipped=" << summary.skipped << " selected=" << goals.selected().size()
        << " goals_achieved=" << achieved << "/" << total << "\n";
    spdlog::info("wrote {} scripts to {}", scripts, config.out_dir.string());
    if (!trace || !stats) throw Error("write failed");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int validate_cmd(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Loaded l;
  try {
    l = load(config, false);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  print_diagnostics(l.diagnostics, out);
  if (has_errors(l.diagnostics)) return kExitValidation;
  out << "ok: " << l.rules.rules.size() << " rules\n";
  return kExitOk;
}

}  // namespace rulegen
