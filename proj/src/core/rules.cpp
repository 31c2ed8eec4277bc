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

#include "rulegen/rules.hpp"

#include <algorithm>

namespace rulegen {

const PropertyKey& Rule::target() const {
  return is_iteration() ? iteration().target : fallback().target;
}

int Rule::definition_index() const {
  return is_iteration() ? iteration().definition_index : fallback().definition_index;
}

const SourceLocation& Rule::location() const {
  return is_iteration() ? iteration().location : fallback().location;
}

std::set<PropertyKey> Rule::references() const {
  std::set<PropertyKey> out;
  auto add = [&](const ExprPtr& e) {
    if (!e) return;
    auto refs = referenced_properties(*e);
    out.insert(refs.begin(), refs.end());
  };
  if (is_iteration()) {
    const auto& r = iteration();
    out.insert(r.when.begin(), r.when.end());
    add(r.condition);
    add(r.values);
  } else {
    add(fallback().condition);
    add(fallback().value);
  }
  return out;
}

bool same_rule(const Rule& a, const Rule& b) {
  if (a.is_iteration() != b.is_iteration()) return false;
  if (a.is_iteration()) {
    const auto& x = a.iteration();
    const auto& y = b.iteration();
    return x.target == y.target && x.when == y.when && same_expr(x.condition, y.condition) &&
           same_expr(x.values, y.values) && x.shuffled == y.shuffled &&
           std::equal(x.injected.begin(), x.injected.end(), y.injected.begin(), y.injected.end(), same_rule);
  }
  const auto& x = a.fallback();
  const auto& y = b.fallback();
  return x.target == y.target && same_expr(x.condition, y.condition) && same_expr(x.value, y.value);
}

RuleSet::RuleSet() : functions(std::make_shared<const FunctionTable>(FunctionTable::with_builtins())) {}

RuleSet::RuleSet(std::vector<Rule> r, FunctionTablePtr f) : rules(std::move(r)), functions(std::move(f)) {
  if (!functions) functions = std::make_shared<const FunctionTable>(FunctionTable::with_builtins());
}

int RuleSet::next_definition_index() const {
  int next = 0;
  for_each_rule(rules, [&](const Rule& r) { next = std::max(next, r.definition_index() + 1); });
  return next;
}

namespace {
void renumber(Rule& r, int& next) {
  if (r.is_iteration()) {
    auto& it = std::get<IterationRule>(r.body);
    it.definition_index = next++;
    for (auto& inj : it.injected) renumber(inj, next);
  } else {
    std::get<DefaultRule>(r.body).definition_index = next++;
  }
}
}  // namespace

void RuleSet::append(const std::vector<Rule>& other) {
  int next = next_definition_index();
  for (Rule r : other) {
    renumber(r, next);
    rules.push_back(std::move(r));
  }
}

}  // namespace rulegen
