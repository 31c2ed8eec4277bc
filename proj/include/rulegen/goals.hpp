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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "rulegen/engine.hpp"

namespace rulegen {

enum class GoalKind { kFinite, kInfinite };

const char* to_string(GoalKind kind);

// A check list plus a function over combinations. A List result reports
// several values at once; anything else counts as a single value.
struct Goal {
  std::string name;
  GoalKind kind = GoalKind::kFinite;
  std::vector<Value> checklist;  // finite goals only; duplicates removed
  ExprPtr function;
  SourceLocation location;

  // Throws rulegen::Error on an empty check list.
  static Goal finite(std::string name, std::vector<Value> checklist, ExprPtr function);
  static Goal infinite(std::string name, ExprPtr function);

  bool in_checklist(const Value& v) const;
};

struct ValueHit {
  Value value;
  std::uint64_t first_id = 0;
  std::uint64_t hits = 0;
};

// Per-goal record of every value a goal function returned.
class GoalState {
 public:
  explicit GoalState(const Goal& goal);

  const Goal& goal() const { return *goal_; }
  // Check-list values hit so far, in first-hit order. For infinite goals
  // this is every distinct value returned.
  const std::vector<ValueHit>& achieved() const { return achieved_; }
  // Values outside a finite goal's check list.
  const std::vector<ValueHit>& unexpected() const { return unexpected_; }
  std::vector<Value> unachieved() const;
  std::set<Value, ValueLess> achieved_set() const;

  // Records one returned value; true if it was achieved for the first time.
  bool record(const Value& v, std::uint64_t id);

  std::uint64_t hits(const Value& v) const;
  // Finite goal with every check-list value achieved.
  bool saturated() const;

 private:
  const Goal* goal_;
  std::vector<ValueHit> achieved_;
  std::vector<ValueHit> unexpected_;
  std::unordered_map<Value, std::size_t, ValueHash> achieved_index_;
  std::unordered_map<Value, std::size_t, ValueHash> unexpected_index_;
};

struct Importance {
  bool important = false;
  std::vector<std::pair<std::string, Value>> newly_achieved;
};

class GoalError : public Error {
 public:
  GoalError(const std::string& goal, const std::string& message);
};

// Owns the goals and their statistics for one run.
class GoalEngine {
 public:
  GoalEngine(std::vector<Goal> goals, FunctionTablePtr functions);
  GoalEngine(const GoalEngine&) = delete;
  GoalEngine& operator=(const GoalEngine&) = delete;

  const std::vector<Goal>& goals() const { return goals_; }
  const std::vector<GoalState>& states() const { return states_; }
  const GoalState* state(const std::string& goal_name) const;

  // Evaluates every goal on `combination`. Properties absent from it are
  // looked up through `resolver`; a goal whose function needs an
  // unresolvable property returns nothing for this combination.
  Importance evaluate(const Combination& combination, const PropertyResolver& resolver);
  Importance evaluate(CombinationContext& context) { return evaluate(context.combination(), context.resolver()); }

  // evaluate() plus the selection decision; with no goals every combination
  // is selected.
  bool select(CombinationContext& context);
  bool select(const Combination& combination, const PropertyResolver& resolver);

  const std::vector<std::uint64_t>& selected() const { return selected_; }
  std::uint64_t evaluated() const { return evaluated_; }

  // Sum over finite goals of achieved and check-list sizes.
  std::pair<std::size_t, std::size_t> finite_totals() const;
  bool all_finite_saturated() const;
  bool has_infinite() const;

 private:
  std::vector<Goal> goals_;
  std::vector<GoalState> states_;
  FunctionTablePtr functions_;
  std::vector<std::uint64_t> selected_;
  std::uint64_t evaluated_ = 0;
};

struct RunCounters {
  std::uint64_t emitted = 0;
  std::uint64_t skipped = 0;
  std::uint64_t seed = 0;
};

// JSON statistics report; two-space indented, keys in a fixed order.
std::string report_json(const GoalEngine& engine, const RunCounters& counters);

// Goal-directed pruning: abandons the remaining values of frames whose
// property no unsaturated goal can observe, and stops the run once every
// finite goal is saturated (if there are no infinite goals).
//
// `derived_reads` maps properties attached after emission (for example
// model coverage) to the properties they are computed from.
class GoalPruner final : public PruningObserver {
 public:
  GoalPruner(const GoalEngine& goals, const RuleSet& rule_set,
             std::map<PropertyKey, std::set<PropertyKey>> derived_reads = {});

  bool stop_all() override;
  bool collapse(const PropertyKey& target) override;

  // False when the strategy shape rules out collapsing frames at all.
  bool collapse_supported() const { return collapse_supported_; }
  // Properties observable by the currently unsaturated goals.
  const std::set<PropertyKey>& relevant() { return refresh(); }

 private:
  const std::set<PropertyKey>& refresh();
  std::set<PropertyKey> subtree(const PropertyKey& target, std::set<PropertyKey>& visiting) const;
  bool groups_separable(const std::set<PropertyKey>& relevant) const;

  const GoalEngine& goals_;
  std::map<PropertyKey, std::set<PropertyKey>> reads_;  // target -> keys its rules read
  std::map<PropertyKey, std::set<PropertyKey>> derived_reads_;
  // Sibling stack targets fired by an assignment; the empty key is the root.
  std::map<PropertyKey, std::set<PropertyKey>> groups_;
  std::set<PropertyKey> root_group_;
  bool collapse_supported_ = true;

  std::size_t cached_saturated_ = SIZE_MAX;
  std::set<PropertyKey> relevant_;
  bool separable_ = false;
};

}  // namespace rulegen
