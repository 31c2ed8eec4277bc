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

#include "rulegen/sutkit.hpp"

#include <algorithm>
#include <cstdio>

namespace rulegen {

const char* to_string(BoundaryRelation relation) {
  switch (relation) {
    case BoundaryRelation::kBelow: return "below";
    case BoundaryRelation::kAt: return "at";
    case BoundaryRelation::kAbove: return "above";
  }
  return "?";
}

namespace {

template <class T>
void append_unique(std::vector<T>& into, const T& item) {
  if (std::find(into.begin(), into.end(), item) == into.end()) into.push_back(item);
}

Value pair_value(const std::string& id, Value second) { return Value::map({{"0", id}, {"1", std::move(second)}}); }

}  // namespace

void CoverageRecord::merge(const CoverageRecord& other) {
  statements.insert(other.statements.begin(), other.statements.end());
  for (const auto& d : other.decisions) append_unique(decisions, d);
  for (const auto& c : other.conditions) append_unique(conditions, c);
  for (const auto& b : other.boundaries) append_unique(boundaries, b);
  path.insert(path.end(), other.path.begin(), other.path.end());
}

std::string CoverageRecord::path_hash() const {
  // FNV-1a over the newline-joined path.
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& step : path) {
    for (unsigned char c : step) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= '\n';
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void CoverageRecorder::statement(std::string_view id) {
  record_.statements.emplace(id);
  record_.path.emplace_back(id);
}

bool CoverageRecorder::decision(std::string_view id, bool outcome) {
  append_unique(record_.decisions, {std::string(id), outcome});
  record_.path.push_back(std::string(id) + (outcome ? "=T" : "=F"));
  return outcome;
}

bool CoverageRecorder::condition(std::string_view id, bool outcome) {
  append_unique(record_.conditions, {std::string(id), outcome});
  return outcome;
}

void CoverageRecorder::boundary(std::string_view id, std::int64_t value, std::int64_t limit) {
  auto rel = value < limit ? BoundaryRelation::kBelow : value == limit ? BoundaryRelation::kAt : BoundaryRelation::kAbove;
  append_unique(record_.boundaries, {std::string(id), rel});
}

std::string Command::render() const {
  std::string out = function + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].first + "=" + args[i].second.literal();
  }
  return out + ")";
}

PropertyKey FocusCall::property_for(const std::string& param) const {
  auto it = args.find(param);
  return it == args.end() ? PropertyKey(param) : it->second;
}

std::vector<PropertyKey> synthesized_keys() {
  return {kExpectedResultKey, kCoveredStatementsKey, kCoveredConditionsKey, kCoveredBoundariesKey, kCoveredPathKey};
}

std::string test_case_name(std::uint64_t id, const std::vector<std::string>& classifier) {
  std::string name = "tc_" + std::to_string(id);
  if (classifier.empty()) return name;
  name += "_";
  for (const auto& part : classifier) {
    name += '_';
    for (char c : part) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
      name += ok ? c : '_';
    }
  }
  return name;
}

namespace {

void check_interface(const AssemblySpec& spec, const Command& command) {
  if (!spec.interface.empty() && !spec.interface.count(command.function)) {
    throw Error("command " + command.function + " is not a declared SUT function");
  }
}

void attach_coverage(Combination& combination, const Value& expected, const CoverageRecord& cov) {
  ValueList statements(cov.statements.begin(), cov.statements.end());
  ValueList conditions;
  for (const auto& [id, outcome] : cov.conditions) conditions.push_back(pair_value(id, outcome));
  ValueList boundaries;
  for (const auto& [id, rel] : cov.boundaries) boundaries.push_back(pair_value(id, to_string(rel)));
  combination.attach(kExpectedResultKey, expected);
  combination.attach(kCoveredStatementsKey, Value(std::move(statements)));
  combination.attach(kCoveredConditionsKey, Value(std::move(conditions)));
  combination.attach(kCoveredBoundariesKey, Value(std::move(boundaries)));
  combination.attach(kCoveredPathKey, cov.path_hash());
}

}  // namespace

TestCaseRecord assemble_test_case(CombinationContext& context, const ModelInterface& model,
                                  const SolverInterface& solver, const AssemblySpec& spec) {
  const std::uint64_t id = context.combination().id();
  try {
    TestCaseRecord record;
    record.id = id;

    ModelState state = model.initial_state();
    record.commands = solver.preconditions(context);
    for (const auto& cmd : record.commands) {
      check_interface(spec, cmd);
      state = model.call(cmd.function, cmd.args, state).state;
    }

    Command focus{spec.focus.function, {}};
    for (const auto& param : spec.focus.params) {
      focus.args.emplace_back(param, context.resolve(spec.focus.property_for(param)));
    }
    check_interface(spec, focus);
    ModelResult result = model.call(focus.function, focus.args, state);
    record.commands.push_back(std::move(focus));
    record.expected = result.result;
    record.coverage = std::move(result.coverage);

    for (auto& cmd : solver.verifications(context, record.expected)) record.commands.push_back(std::move(cmd));
    for (auto& cmd : solver.postprocessing(context)) record.commands.push_back(std::move(cmd));
    for (const auto& cmd : record.commands) check_interface(spec, cmd);

    std::vector<std::string> classifier;
    for (const auto& key : spec.name_parts) {
      try {
        classifier.push_back(context.resolve(key).render());
      } catch (const EvalError& e) {
        if (e.kind() != EvalErrorKind::kUnresolvableProperty) throw;
      }
    }
    record.name = test_case_name(id, classifier);

    attach_coverage(context.combination(), record.expected, record.coverage);
    for (const auto& b : context.combination().bindings()) {
      if (b.origin != BindingOrigin::kSynthesized) record.properties.push_back(b);
    }
    return record;
  } catch (const AssemblyError&) {
    throw;
  } catch (const Error& e) {
    throw AssemblyError(id, e.what());
  }
}

std::vector<Goal> coverage_goals_from_model(const ModelInterface& model) {
  std::vector<Goal> goals;

  std::vector<Value> statements;
  for (const auto& s : model.statement_universe()) statements.emplace_back(s);
  goals.push_back(Goal::finite(kStatementGoal, std::move(statements), Expr::ref(kCoveredStatementsKey)));

  std::vector<Value> outcomes;
  for (const auto& c : model.conditions()) {
    outcomes.push_back(pair_value(c, true));
    outcomes.push_back(pair_value(c, false));
  }
  if (!outcomes.empty()) {
    goals.push_back(Goal::finite(kMcdcGoal, std::move(outcomes), Expr::ref(kCoveredConditionsKey)));
  }

  std::vector<Value> relations;
  for (const auto& b : model.boundaries()) {
    for (auto rel : {BoundaryRelation::kBelow, BoundaryRelation::kAt, BoundaryRelation::kAbove}) {
      relations.push_back(pair_value(b, to_string(rel)));
    }
  }
  if (!relations.empty()) {
    goals.push_back(Goal::finite(kBoundaryGoal, std::move(relations), Expr::ref(kCoveredBoundariesKey)));
  }
  return goals;
}

Goal path_coverage_goal() { return Goal::infinite(kPathGoal, Expr::ref(kCoveredPathKey)); }

std::map<PropertyKey, std::set<PropertyKey>> synthesized_reads(const AssemblySpec& spec,
                                                               const SolverInterface& solver) {
  std::set<PropertyKey> inputs = solver.reads();
  for (const auto& param : spec.focus.params) inputs.insert(spec.focus.property_for(param));
  std::map<PropertyKey, std::set<PropertyKey>> out;
  for (const auto& key : synthesized_keys()) out[key] = inputs;
  return out;
}

}  // namespace rulegen
