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

#include <algorithm>

#include "rulegen/engine.hpp"

namespace rulegen {

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kReassignment: return "Reassignment";
    case DiagnosticKind::kEmptyRuleSet: return "EmptyRuleSet";
    case DiagnosticKind::kUnknownFunction: return "UnknownFunction";
    case DiagnosticKind::kReservedCharacter: return "ReservedCharacter";
    case DiagnosticKind::kCyclicDependency: return "CyclicDependency";
    case DiagnosticKind::kParse: return "ParseError";
    case DiagnosticKind::kIgnoredContent: return "IgnoredContent";
  }
  return "?";
}

std::string Diagnostic::to_string() const {
  std::string out = location.empty() ? std::string() : location.to_string() + ": ";
  out += severity == Severity::kError ? "error: " : "warning: ";
  out += rulegen::to_string(kind);
  out += ": " + message;
  return out;
}

bool has_errors(std::span<const Diagnostic> diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::kError; });
}

namespace {

std::string describe_when(const std::set<PropertyKey>& when) {
  if (when.empty()) return "empty WHEN";
  std::string out = "WHEN ";
  bool first = true;
  for (const auto& k : when) {
    if (!first) out += ",";
    out += k.display();
    first = false;
  }
  return out;
}

void check_functions(const Rule& rule, const FunctionTable& functions, std::vector<Diagnostic>& out) {
  std::set<std::string> names;
  auto collect = [&](const ExprPtr& e) {
    if (!e) return;
    auto called = called_functions(*e);
    names.insert(called.begin(), called.end());
  };
  if (rule.is_iteration()) {
    collect(rule.iteration().condition);
    collect(rule.iteration().values);
  } else {
    collect(rule.fallback().condition);
    collect(rule.fallback().value);
  }
  for (const auto& n : names) {
    if (!functions.contains(n)) {
      out.push_back({DiagnosticKind::kUnknownFunction, Severity::kError,
                     "rule for " + rule.target().display() + " calls unregistered function '" + n + "'",
                     rule.location()});
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate(const RuleSet& rule_set) {
  std::vector<Diagnostic> out;
  if (rule_set.empty()) {
    out.push_back({DiagnosticKind::kEmptyRuleSet, Severity::kWarning, "rule set contains no rules", {}});
    return out;
  }

  for_each_rule(rule_set.rules, [&](const Rule& r) {
    check_functions(r, *rule_set.functions, out);
    if (r.is_iteration() && r.iteration().when.count(r.target())) {
      out.push_back({DiagnosticKind::kCyclicDependency, Severity::kError,
                     "iteration rule for " + r.target().display() + " lists its own target in WHEN",
                     r.location()});
    }
  });

  try {
    build_graph(rule_set);
  } catch (const CyclicDependencyError& e) {
    out.push_back({DiagnosticKind::kCyclicDependency, Severity::kError, e.what(), {}});
  }

  // Unconditional iteration rules are the ones that certainly fire once
  // their WHEN set is assigned. Only top-level rules take part: injected
  // rules override on purpose.
  std::vector<const IterationRule*> unconditional;
  for (const auto& r : rule_set.rules) {
    if (r.is_iteration() && !r.iteration().condition) unconditional.push_back(&r.iteration());
  }
  for (std::size_t i = 0; i < unconditional.size(); ++i) {
    for (std::size_t j = i + 1; j < unconditional.size(); ++j) {
      const IterationRule& a = *unconditional[i];
      const IterationRule& b = *unconditional[j];
      if (a.target != b.target) continue;
      if (a.when == b.when) {
        // Within one stack a later file overrides an earlier one; a repeat
        // inside the same file is a mistake.
        if (a.location.file != b.location.file) continue;
        out.push_back({DiagnosticKind::kReassignment, Severity::kError,
                       "two unconditional iteration rules for " + a.target.display() + " with " +
                           describe_when(a.when) + " in one file; the earlier one (" + a.location.to_string() +
                           ") can never fire",
                       b.location});
        continue;
      }
      const bool a_in_b = std::includes(b.when.begin(), b.when.end(), a.when.begin(), a.when.end());
      const bool b_in_a = std::includes(a.when.begin(), a.when.end(), b.when.begin(), b.when.end());
      if (a_in_b || b_in_a) {
        out.push_back({DiagnosticKind::kReassignment, Severity::kError,
                       "iteration rules for " + a.target.display() + " with " + describe_when(a.when) + " and " +
                           describe_when(b.when) + " both fire once the larger WHEN set is assigned (other rule at " +
                           a.location.to_string() + ")",
                       b.location});
      }
    }
  }
  return out;
}

}  // namespace rulegen
