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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rulegen/frontend.hpp"
#include "rulegen/sutkit.hpp"

namespace rulegen {

// Bad command line, unreadable or unparseable input, broken manifest.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitRuntime = 4;

struct RunConfig {
  std::vector<std::filesystem::path> strategies;  // later files override earlier ones
  std::vector<std::filesystem::path> goals;
  std::optional<std::filesystem::path> bundle;  // manifest.json
  std::uint64_t seed = 0;
  bool prune = false;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> trace;  // default <out>/trace.txt
  std::optional<std::filesystem::path> stats;  // default <out>/stats.json
  std::uint64_t max_combinations = 1'000'000;
};

// Bundle manifest. Relative paths are resolved against the manifest's
// directory. `strategies` and `goals` are used only when the command line
// names no strategy.
struct BundleManifest {
  std::string name;
  std::string model;
  std::string solver;
  FocusCall focus;
  std::set<std::string> interface;
  std::optional<std::filesystem::path> template_path;
  std::vector<std::filesystem::path> defaults;
  std::vector<std::filesystem::path> strategies;
  std::vector<std::filesystem::path> goals;
};

// Throws ConfigError.
BundleManifest load_manifest(const std::filesystem::path& path);

// Model, solver and strategy functions of a built-in bundle.
struct BundleComponents {
  std::shared_ptr<const ModelInterface> model;
  std::shared_ptr<const SolverInterface> solver;
  FunctionTablePtr functions;
};

// Known names: "phonecall". Throws ConfigError.
BundleComponents bundle_components(const std::string& model, const std::string& solver);

// Runs the whole pipeline and prints the summary line to `out`, diagnostics
// to `err`. Returns one of the kExit codes.
int generate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Prints the diagnostics of the given strategy files, preceded by the bundle
// defaults if a manifest is given.
int validate_cmd(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace rulegen
