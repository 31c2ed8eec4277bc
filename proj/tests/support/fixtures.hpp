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

#include <string>
#include <vector>

#include "rulegen/engine.hpp"
#include "rulegen/rules.hpp"

namespace rulegen::testing {

inline ExprPtr ref(const std::string& k) { return Expr::ref(k); }
inline ExprPtr lit(Value v) { return Expr::literal(std::move(v)); }
inline ExprPtr eq(ExprPtr a, ExprPtr b) { return Expr::binary(BinaryOp::kEq, std::move(a), std::move(b)); }

inline ExprPtr list_of(std::vector<Value> values) {
  std::vector<ExprPtr> items;
  for (auto& v : values) items.push_back(Expr::literal(std::move(v)));
  return Expr::list(std::move(items));
}

inline Rule iterate(const std::string& target, std::set<std::string> when, ExprPtr condition,
                    std::vector<Value> values, bool shuffled = false) {
  IterationRule r;
  r.target = PropertyKey(target);
  for (const auto& w : when) r.when.insert(PropertyKey(w));
  r.condition = std::move(condition);
  r.values = list_of(std::move(values));
  r.shuffled = shuffled;
  return Rule{std::move(r)};
}

inline Rule fallback(const std::string& target, ExprPtr condition, Value value) {
  DefaultRule r;
  r.target = PropertyKey(target);
  r.condition = std::move(condition);
  r.value = lit(std::move(value));
  return Rule{std::move(r)};
}

// The call-price strategy: validity, destinations, durations and the
// International_1 countries, plus the Redland default.
inline RuleSet phone_rules(bool shuffle_durations = false) {
  std::vector<Rule> rules;
  rules.push_back(iterate("isCallValid", {}, nullptr, {true, false}));
  rules.push_back(iterate("destination", {"isCallValid"}, eq(ref("isCallValid"), lit(true)),
                          {"National", "International_1", "International_2"}));
  rules.push_back(iterate("callDuration", {"isCallValid"}, eq(ref("isCallValid"), lit(true)), {1, 60},
                          shuffle_durations));
  rules.push_back(iterate("country", {"destination"}, eq(ref("destination"), lit("International_1")),
                          {"Greenland", "Blueland", "Neverland"}));
  rules.push_back(fallback("country", eq(ref("destination"), lit("International_2")), "Redland"));
  RuleSet set;
  set.append(rules);
  return set;
}

inline std::vector<std::string> trace(const RuleSet& rules, RunOptions options = {}) {
  std::vector<std::string> lines;
  run(rules, options, [&](CombinationContext& c) { lines.push_back(c.combination().trace_line()); });
  return lines;
}

}  // namespace rulegen::testing
