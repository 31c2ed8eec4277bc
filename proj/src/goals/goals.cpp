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

#include "rulegen/goals.hpp"

#include <algorithm>

namespace rulegen {

const char* to_string(GoalKind kind) { return kind == GoalKind::kFinite ? "finite" : "infinite"; }

Goal Goal::finite(std::string name, std::vector<Value> checklist, ExprPtr function) {
  std::vector<Value> unique;
  std::unordered_map<Value, bool, ValueHash> seen;
  for (auto& v : checklist) {
    if (seen.emplace(v, true).second) unique.push_back(std::move(v));
  }
  if (unique.empty()) throw Error("finite goal '" + name + "' has an empty check list");
  Goal g;
  g.name = std::move(name);
  g.kind = GoalKind::kFinite;
  g.checklist = std::move(unique);
  g.function = std::move(function);
  return g;
}

Goal Goal::infinite(std::string name, ExprPtr function) {
  Goal g;
  g.name = std::move(name);
  g.kind = GoalKind::kInfinite;
  g.function = std::move(function);
  return g;
}

bool Goal::in_checklist(const Value& v) const {
  return kind == GoalKind::kInfinite || std::find(checklist.begin(), checklist.end(), v) != checklist.end();
}

GoalState::GoalState(const Goal& goal) : goal_(&goal) {}

bool GoalState::record(const Value& v, std::uint64_t id) {
  const bool expected = goal_->in_checklist(v);
  auto& list = expected ? achieved_ : unexpected_;
  auto& index = expected ? achieved_index_ : unexpected_index_;
  auto [it, inserted] = index.emplace(v, list.size());
  if (inserted) list.push_back({v, id, 0});
  ++list[it->second].hits;
  return inserted && expected;
}

std::uint64_t GoalState::hits(const Value& v) const {
  if (auto it = achieved_index_.find(v); it != achieved_index_.end()) return achieved_[it->second].hits;
  if (auto it = unexpected_index_.find(v); it != unexpected_index_.end()) return unexpected_[it->second].hits;
  return 0;
}

bool GoalState::saturated() const {
  return goal_->kind == GoalKind::kFinite && achieved_.size() == goal_->checklist.size();
}

std::vector<Value> GoalState::unachieved() const {
  std::vector<Value> out;
  for (const auto& v : goal_->checklist) {
    if (!achieved_index_.count(v)) out.push_back(v);
  }
  return out;
}

std::set<Value, ValueLess> GoalState::achieved_set() const {
  std::set<Value, ValueLess> out;
  for (const auto& h : achieved_) out.insert(h.value);
  return out;
}

GoalError::GoalError(const std::string& goal, const std::string& message)
    : Error("goal '" + goal + "': " + message) {}

GoalEngine::GoalEngine(std::vector<Goal> goals, FunctionTablePtr functions)
    : goals_(std::move(goals)), functions_(std::move(functions)) {
  if (!functions_) functions_ = std::make_shared<const FunctionTable>(FunctionTable::with_builtins());
  std::set<std::string> names;
  for (const auto& g : goals_) {
    if (!g.function) throw GoalError(g.name, "missing goal function");
    if (!names.insert(g.name).second) throw GoalError(g.name, "duplicate goal name");
  }
  states_.reserve(goals_.size());
  for (const auto& g : goals_) states_.emplace_back(g);
}

const GoalState* GoalEngine::state(const std::string& goal_name) const {
  for (const auto& s : states_) {
    if (s.goal().name == goal_name) return &s;
  }
  return nullptr;
}

Importance GoalEngine::evaluate(const Combination& combination, const PropertyResolver& resolver) {
  ++evaluated_;
  Importance result;
  for (auto& state : states_) {
    const Goal& goal = state.goal();
    Value v;
    try {
      v = evaluate_expression(*goal.function, combination.bindings(), resolver, *functions_);
    } catch (const EvalError& e) {
      if (e.kind() == EvalErrorKind::kUnresolvableProperty) continue;
      throw GoalError(goal.name, e.what());
    } catch (const RuleError& e) {
      throw GoalError(goal.name, e.what());
    }
    auto record = [&](const Value& item) {
      if (state.record(item, combination.id())) {
        result.important = true;
        result.newly_achieved.emplace_back(goal.name, item);
      }
    };
    if (v.is_list()) {
      for (const auto& item : v.as_list()) record(item);
    } else {
      record(v);
    }
  }
  return result;
}

bool GoalEngine::select(const Combination& combination, const PropertyResolver& resolver) {
  const bool important = evaluate(combination, resolver).important || goals_.empty();
  if (important) selected_.push_back(combination.id());
  return important;
}

bool GoalEngine::select(CombinationContext& context) { return select(context.combination(), context.resolver()); }

std::pair<std::size_t, std::size_t> GoalEngine::finite_totals() const {
  std::size_t achieved = 0;
  std::size_t total = 0;
  for (const auto& s : states_) {
    if (s.goal().kind != GoalKind::kFinite) continue;
    achieved += s.achieved().size();
    total += s.goal().checklist.size();
  }
  return {achieved, total};
}

bool GoalEngine::all_finite_saturated() const {
  return std::all_of(states_.begin(), states_.end(),
                     [](const GoalState& s) { return s.goal().kind != GoalKind::kFinite || s.saturated(); });
}

bool GoalEngine::has_infinite() const {
  return std::any_of(goals_.begin(), goals_.end(), [](const Goal& g) { return g.kind == GoalKind::kInfinite; });
}

}  // namespace rulegen
