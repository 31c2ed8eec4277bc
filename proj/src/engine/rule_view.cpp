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

#include "rule_view.hpp"

#include <algorithm>

namespace rulegen {

std::shared_ptr<const RuleView> RuleView::base(const RuleSet& rule_set) {
  auto view = std::make_shared<RuleView>();
  view->rule_set_ = &rule_set;
  for (const auto& r : rule_set.rules) view->add(r);
  view->sort_stacks();
  return view;
}

void RuleView::add(const Rule& rule) {
  if (!rule.is_iteration()) {
    defaults_[rule.target()].push_back(&rule.fallback());
    return;
  }
  const IterationRule& it = rule.iteration();
  StackKey key{it.target, it.when};
  for (auto& s : stacks_) {
    if (s.key == key) {
      s.rules.push_back(&it);
      s.order = std::min(s.order, it.definition_index);
      return;
    }
  }
  stacks_.push_back({std::move(key), {&it}, it.definition_index});
}

void RuleView::sort_stacks() {
  std::stable_sort(stacks_.begin(), stacks_.end(),
                   [](const IterationStack& a, const IterationStack& b) { return a.order < b.order; });
}

std::shared_ptr<const RuleView> RuleView::with(const std::vector<Rule>& rules, std::set<StackKey>& fresh) const {
  auto view = std::make_shared<RuleView>(*this);
  for (const auto& r : rules) {
    view->add(r);
    view->injected_.push_back(&r);
    if (r.is_iteration()) fresh.insert(StackKey{r.iteration().target, r.iteration().when});
  }
  view->sort_stacks();
  return view;
}

std::shared_ptr<const RuleView> RuleView::merge(const std::vector<std::shared_ptr<const RuleView>>& views) {
  if (views.empty()) return nullptr;
  bool all_same = std::all_of(views.begin(), views.end(), [&](const auto& v) { return v == views.front(); });
  if (all_same) return views.front();
  auto merged = RuleView::base(*views.front()->rule_set_);
  auto out = std::const_pointer_cast<RuleView>(merged);
  std::set<const Rule*> seen;
  for (const auto& v : views) {
    for (const Rule* r : v->injected_) {
      if (!seen.insert(r).second) continue;
      out->add(*r);
      out->injected_.push_back(r);
    }
  }
  out->sort_stacks();
  return merged;
}

const std::vector<const DefaultRule*>* RuleView::defaults_for(const PropertyKey& key) const {
  auto it = defaults_.find(key);
  return it == defaults_.end() ? nullptr : &it->second;
}

namespace {

PropertyResolver make_resolver(Bindings& env, const RuleView& view, const FunctionTable& functions,
                               std::vector<PropertyKey>& resolving) {
  return [&env, &view, &functions, &resolving](const PropertyKey& key) {
    return resolve_with_defaults(key, env, view, functions, resolving);
  };
}

}  // namespace

bool condition_holds(const ExprPtr& condition, Bindings& env, const RuleView& view,
                     const FunctionTable& functions, const SourceLocation& where, const char* context) {
  if (!condition) return true;
  std::vector<PropertyKey> resolving;
  try {
    Value v = evaluate_expression(*condition, env, make_resolver(env, view, functions, resolving), functions);
    if (!v.is_bool()) {
      throw EvalError(EvalErrorKind::kTypeMismatch, "if",
                      std::string("condition evaluated to ") + to_string(v.kind()) + ", expected Bool");
    }
    return v.as_bool();
  } catch (const EvalError& e) {
    if (e.kind() == EvalErrorKind::kUnresolvableProperty) return false;
    throw RuleError(where, context, e);
  }
}

Value resolve_with_defaults(const PropertyKey& key, Bindings& env, const RuleView& view,
                            const FunctionTable& functions, std::vector<PropertyKey>& resolving) {
  if (const Binding* b = find_binding(env, key)) return b->value;
  if (std::find(resolving.begin(), resolving.end(), key) != resolving.end()) {
    throw EvalError(EvalErrorKind::kUnresolvableProperty, key.name(),
                    "default rules for " + key.display() + " depend on themselves");
  }
  const auto* stack = view.defaults_for(key);
  if (stack) {
    resolving.push_back(key);
    struct Pop {
      std::vector<PropertyKey>& v;
      ~Pop() { v.pop_back(); }
    } pop{resolving};
    for (auto it = stack->rbegin(); it != stack->rend(); ++it) {
      const DefaultRule& rule = **it;
      if (rule.condition) {
        bool holds = false;
        try {
          Value c = evaluate_expression(*rule.condition, env, make_resolver(env, view, functions, resolving),
                                        functions);
          holds = c.as_bool();
        } catch (const EvalError& e) {
          if (e.kind() != EvalErrorKind::kUnresolvableProperty) {
            throw RuleError(rule.location, "IF of default " + key.display(), e);
          }
        }
        if (!holds) continue;
      }
      Value v;
      try {
        v = evaluate_expression(*rule.value, env, make_resolver(env, view, functions, resolving), functions);
      } catch (const EvalError& e) {
        if (e.kind() == EvalErrorKind::kUnresolvableProperty) throw;
        throw RuleError(rule.location, "THEN of default " + key.display(), e);
      }
      // A nested request may have resolved `key` already through another path.
      if (const Binding* b = find_binding(env, key)) return b->value;
      env.push_back({key, v, BindingOrigin::kDefault});
      return v;
    }
  }
  throw EvalError(EvalErrorKind::kUnresolvableProperty, key.name(),
                  "no value or applicable default for " + key.display());
}

}  // namespace rulegen
