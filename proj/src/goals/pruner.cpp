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

#include "rulegen/goals.hpp"

namespace rulegen {

namespace {

void expr_refs(const ExprPtr& e, std::set<PropertyKey>& out) {
  if (!e) return;
  auto refs = referenced_properties(*e);
  out.insert(refs.begin(), refs.end());
}

}  // namespace

GoalPruner::GoalPruner(const GoalEngine& goals, const RuleSet& rule_set,
                       std::map<PropertyKey, std::set<PropertyKey>> derived_reads)
    : goals_(goals), derived_reads_(std::move(derived_reads)) {
  for (const auto& g : goals_.goals()) {
    if (has_nullary_call(*g.function)) collapse_supported_ = false;
  }

  // `injector` is the target of the rule whose frame injects `rules`.
  auto walk = [&](auto&& self, const std::vector<Rule>& rules, const PropertyKey* injector) -> void {
    for (const auto& r : rules) {
      const PropertyKey& target = r.target();
      auto refs = r.references();
      reads_[target].insert(refs.begin(), refs.end());
      if (injector) reads_[target].insert(*injector);
      if (r.is_iteration() && has_nullary_call(*r.iteration().values)) collapse_supported_ = false;
      if (!r.is_iteration()) continue;
      const auto& it = r.iteration();
      if (it.when.size() > 1) collapse_supported_ = false;
      if (injector) groups_[*injector].insert(target);
      if (it.when.empty() && !injector) root_group_.insert(target);
      for (const auto& k : it.when) groups_[k].insert(target);
      self(self, it.injected, &target);
    }
  };
  walk(walk, rule_set.rules, nullptr);
}

bool GoalPruner::stop_all() {
  return !goals_.goals().empty() && !goals_.has_infinite() && goals_.all_finite_saturated();
}

bool GoalPruner::collapse(const PropertyKey& target) {
  if (!collapse_supported_ || goals_.goals().empty()) return false;
  const auto& relevant = refresh();
  return relevant.count(target) == 0 && separable_;
}

const std::set<PropertyKey>& GoalPruner::refresh() {
  std::size_t saturated = 0;
  for (const auto& s : goals_.states()) saturated += s.saturated() ? 1 : 0;
  if (saturated == cached_saturated_) return relevant_;
  cached_saturated_ = saturated;

  relevant_.clear();
  std::vector<PropertyKey> work;
  for (const auto& s : goals_.states()) {
    if (s.saturated()) continue;
    std::set<PropertyKey> refs;
    expr_refs(s.goal().function, refs);
    work.insert(work.end(), refs.begin(), refs.end());
  }
  while (!work.empty()) {
    PropertyKey k = std::move(work.back());
    work.pop_back();
    if (!relevant_.insert(k).second) continue;
    for (const auto* source : {&reads_, &derived_reads_}) {
      auto it = source->find(k);
      if (it == source->end()) continue;
      for (const auto& next : it->second) {
        if (!relevant_.count(next)) work.push_back(next);
      }
    }
  }
  separable_ = groups_separable(relevant_);
  return relevant_;
}

std::set<PropertyKey> GoalPruner::subtree(const PropertyKey& target, std::set<PropertyKey>& visiting) const {
  std::set<PropertyKey> out{target};
  if (!visiting.insert(target).second) return out;
  if (auto it = groups_.find(target); it != groups_.end()) {
    for (const auto& child : it->second) {
      auto sub = subtree(child, visiting);
      out.insert(sub.begin(), sub.end());
    }
  }
  visiting.erase(target);
  return out;
}

// Collapsing a frame changes how many steps its enclosing groups take, and
// with that how lockstep siblings pair up. That is harmless only while each
// group has at most one sibling the goals can observe.
bool GoalPruner::groups_separable(const std::set<PropertyKey>& relevant) const {
  auto check = [&](const std::set<PropertyKey>& members) {
    int observed = 0;
    for (const auto& m : members) {
      std::set<PropertyKey> visiting;
      auto sub = subtree(m, visiting);
      if (std::any_of(sub.begin(), sub.end(), [&](const PropertyKey& k) { return relevant.count(k) > 0; })) {
        ++observed;
      }
    }
    return observed <= 1;
  };
  if (!check(root_group_)) return false;
  return std::all_of(groups_.begin(), groups_.end(), [&](const auto& entry) { return check(entry.second); });
}

}  // namespace rulegen
