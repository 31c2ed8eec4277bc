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

#include <memory>
#include <set>
#include <variant>
#include <vector>

#include "rulegen/errors.hpp"
#include "rulegen/expression.hpp"
#include "rulegen/value.hpp"

namespace rulegen {

struct Rule;

// WHEN/IF/THEN rule assigning a list of candidate values to `target`.
struct IterationRule {
  PropertyKey target;
  std::set<PropertyKey> when;
  ExprPtr condition;  // may be null
  ExprPtr values;     // must evaluate to a List
  bool shuffled = false;
  std::vector<Rule> injected;  // live while this rule's frame iterates
  int definition_index = 0;
  SourceLocation location;
};

// IF/THEN rule computing one value for `target` when it is requested but
// unassigned.
struct DefaultRule {
  PropertyKey target;
  ExprPtr condition;  // may be null
  ExprPtr value;
  int definition_index = 0;
  SourceLocation location;
};

struct Rule {
  std::variant<IterationRule, DefaultRule> body;

  bool is_iteration() const { return std::holds_alternative<IterationRule>(body); }
  const IterationRule& iteration() const { return std::get<IterationRule>(body); }
  const DefaultRule& fallback() const { return std::get<DefaultRule>(body); }

  const PropertyKey& target() const;
  int definition_index() const;
  const SourceLocation& location() const;
  // Keys referenced from the WHEN, IF and THEN parts.
  std::set<PropertyKey> references() const;
};

// Structural equality ignoring definition_index and source location.
bool same_rule(const Rule& a, const Rule& b);

// Ordered rule set plus the function table its expressions call into.
struct RuleSet {
  std::vector<Rule> rules;
  FunctionTablePtr functions;

  RuleSet();
  RuleSet(std::vector<Rule> r, FunctionTablePtr f);

  bool empty() const { return rules.empty(); }
  // Appends `other`'s rules after ours, renumbering definition indices so
  // later rules keep overriding earlier ones.
  void append(const std::vector<Rule>& other);
  int next_definition_index() const;
};

// Visits every rule, including injected ones, in definition order.
template <class F>
void for_each_rule(const std::vector<Rule>& rules, F&& f) {
  for (const auto& r : rules) {
    f(r);
    if (r.is_iteration()) for_each_rule(r.iteration().injected, f);
  }
}

}  // namespace rulegen
