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

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "rulegen/engine.hpp"

namespace rulegen {

struct IterationStack {
  StackKey key;
  // Definition order; rules injected at run time follow the static ones.
  std::vector<const IterationRule*> rules;
  int order = 0;  // smallest definition index
};

// The rules visible at one point of a run: the static rule set plus whatever
// enclosing frames injected.
class RuleView {
 public:
  static std::shared_ptr<const RuleView> base(const RuleSet& rule_set);

  // View with `rules` appended. `fresh` receives the stacks those rules
  // joined or created.
  std::shared_ptr<const RuleView> with(const std::vector<Rule>& rules, std::set<StackKey>& fresh) const;

  // Union of the injections of several views built on the same base.
  static std::shared_ptr<const RuleView> merge(const std::vector<std::shared_ptr<const RuleView>>& views);

  const std::vector<IterationStack>& stacks() const { return stacks_; }
  const std::vector<const DefaultRule*>* defaults_for(const PropertyKey& key) const;
  const RuleSet& rule_set() const { return *rule_set_; }

 private:
  void add(const Rule& rule);
  void sort_stacks();

  const RuleSet* rule_set_ = nullptr;
  std::vector<IterationStack> stacks_;
  std::map<PropertyKey, std::vector<const DefaultRule*>> defaults_;
  std::vector<const Rule*> injected_;
};

// Evaluates default rules for `key` against `env` in reverse definition
// order. Every default computed on the way (including nested requests) is
// appended to `env` with origin kDefault. `resolving` guards against cycles.
Value resolve_with_defaults(const PropertyKey& key, Bindings& env, const RuleView& view,
                            const FunctionTable& functions, std::vector<PropertyKey>& resolving);

// Evaluates a rule condition. Null means true; a missing property makes the
// condition false.
bool condition_holds(const ExprPtr& condition, Bindings& env, const RuleView& view,
                     const FunctionTable& functions, const SourceLocation& where, const char* context);

}  // namespace rulegen
