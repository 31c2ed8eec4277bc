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

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rulegen/combination.hpp"
#include "rulegen/errors.hpp"
#include "rulegen/rules.hpp"

namespace rulegen {

// Rules sharing a target and a WHEN set form one stack.
struct StackKey {
  PropertyKey target;
  std::set<PropertyKey> when;

  friend bool operator==(const StackKey&, const StackKey&) = default;
  friend auto operator<=>(const StackKey&, const StackKey&) = default;
};

struct DependencyGraph {
  // A -> {B, ...}: some rule targeting A references B from WHEN, IF or THEN.
  std::map<PropertyKey, std::set<PropertyKey>> edges;
  // Definition indices per stack, in definition order.
  std::map<StackKey, std::vector<int>> stacks;
  std::map<PropertyKey, std::vector<int>> default_stacks;
};

// Throws CyclicDependencyError on a self-reference or a cycle in the
// WHEN-trigger relation between iteration rules.
DependencyGraph build_graph(const RuleSet& rule_set);

enum class Severity { kWarning, kError };

enum class DiagnosticKind {
  kReassignment,
  kEmptyRuleSet,
  kUnknownFunction,
  kReservedCharacter,
  kCyclicDependency,
  kParse,
  kIgnoredContent,
};

const char* to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  Severity severity;
  std::string message;
  SourceLocation location;

  std::string to_string() const;
};

bool has_errors(std::span<const Diagnostic> diagnostics);

std::vector<Diagnostic> validate(const RuleSet& rule_set);

// Consulted by the engine while iterating; implemented by the goal engine.
class PruningObserver {
 public:
  virtual ~PruningObserver() = default;
  // Abandon everything not yet explored.
  virtual bool stop_all() = 0;
  // Drop the remaining values of a frame for `target`. Only asked after the
  // frame produced at least one leaf in its current pass.
  virtual bool collapse(const PropertyKey& target) = 0;
};

class RuleView;

// Handed to the sink for each emitted combination. Valid only during the
// callback.
class CombinationContext {
 public:
  CombinationContext(Combination& combination, std::shared_ptr<const RuleView> view,
                     const FunctionTable& functions);

  Combination& combination() { return combination_; }
  const Combination& combination() const { return combination_; }
  const FunctionTable& functions() const { return functions_; }

  // Bound value, or the first applicable default, which is then recorded in
  // the combination. Throws EvalError(kUnresolvableProperty).
  Value resolve(const PropertyKey& key);
  PropertyResolver resolver();

 private:
  Combination& combination_;
  std::shared_ptr<const RuleView> view_;
  const FunctionTable& functions_;
};

using CombinationSink = std::function<void(CombinationContext&)>;

// A complete pass of one iteration frame (no truncation by pruning or by the
// enclosing group finishing).
struct PassRecord {
  std::string frame_path;
  PropertyKey target;
  std::uint64_t pass;
  std::vector<Value> assigned;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::uint64_t max_combinations = 0;  // 0 = unlimited
  PruningObserver* observer = nullptr;
  std::function<void(const PassRecord&)> on_pass;
};

struct RunSummary {
  std::uint64_t emitted = 0;
  std::uint64_t skipped = 0;  // frame values abandoned on the observer's request
};

class CapExceededError : public Error {
 public:
  explicit CapExceededError(std::uint64_t cap);
};

// Forward-chains iteration rules and emits each leaf of the iteration tree.
// Sibling frames triggered by one assignment advance in lockstep; see
// README.md for the full semantics.
RunSummary run(const RuleSet& rule_set, const RunOptions& options, const CombinationSink& sink);

// Backward chaining on its own: the bound value of `key` in `env`, else the
// first applicable default rule's value, which is appended to `env`.
Value resolve(const PropertyKey& key, Bindings& env, const RuleSet& rule_set);

}  // namespace rulegen
