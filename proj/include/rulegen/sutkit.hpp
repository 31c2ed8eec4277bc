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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rulegen/engine.hpp"
#include "rulegen/goals.hpp"

namespace rulegen {

enum class BoundaryRelation { kBelow, kAt, kAbove };

const char* to_string(BoundaryRelation relation);

// What one model call executed. Statement ids are stable for a given model
// version; `path` is the statement and decision sequence in execution order.
struct CoverageRecord {
  std::set<std::string> statements;
  std::vector<std::pair<std::string, bool>> decisions;
  std::vector<std::pair<std::string, bool>> conditions;
  std::vector<std::pair<std::string, BoundaryRelation>> boundaries;
  std::vector<std::string> path;

  // Set union; order of first occurrence is kept for the lists.
  void merge(const CoverageRecord& other);
  // 16 hex digits identifying `path`.
  std::string path_hash() const;

  friend bool operator==(const CoverageRecord&, const CoverageRecord&) = default;
};

// Instrumentation helper for hand-written models.
class CoverageRecorder {
 public:
  void statement(std::string_view id);
  bool decision(std::string_view id, bool outcome);
  bool condition(std::string_view id, bool outcome);
  // Relation of `value` to `limit`.
  void boundary(std::string_view id, std::int64_t value, std::int64_t limit);

  const CoverageRecord& record() const { return record_; }
  CoverageRecord take() { return std::move(record_); }

 private:
  CoverageRecord record_;
};

using ModelState = std::map<std::string, Value>;

struct ModelResult {
  Value result;
  ModelState state;
  CoverageRecord coverage;
};

// Simulates the system under test and reports coverage of its own code.
class ModelInterface {
 public:
  virtual ~ModelInterface() = default;

  virtual ModelState initial_state() const { return {}; }
  // Deterministic; touches nothing outside the returned state. Throws
  // DomainError for inputs outside the model's domain.
  virtual ModelResult call(const std::string& function, const ValueMap& args, const ModelState& state) const = 0;

  virtual std::vector<std::string> statement_universe() const = 0;
  virtual std::vector<std::string> conditions() const = 0;
  virtual std::vector<std::string> boundaries() const = 0;
};

struct Command {
  std::string function;
  ValueMap args;  // in parameter order

  std::string render() const;  // f(a=1, b="x")

  friend bool operator==(const Command&, const Command&) = default;
};

// Plans the SUT calls around the focus call of a test case.
class SolverInterface {
 public:
  virtual ~SolverInterface() = default;

  virtual std::vector<Command> preconditions(CombinationContext& combination) const = 0;
  virtual std::vector<Command> verifications(CombinationContext& combination, const Value& expected) const = 0;
  virtual std::vector<Command> postprocessing(CombinationContext& combination) const = 0;
  // Properties the three methods above may resolve.
  virtual std::set<PropertyKey> reads() const = 0;
};

// The call under test: each parameter is taken from the property of the
// same name unless `args` maps it elsewhere.
struct FocusCall {
  std::string function;
  std::vector<std::string> params;
  std::map<std::string, PropertyKey> args;

  PropertyKey property_for(const std::string& param) const;
};

struct AssemblySpec {
  FocusCall focus;
  std::vector<PropertyKey> name_parts;
  // SUT functions commands may use; empty means unrestricted.
  std::set<std::string> interface;
};

struct TestCaseRecord {
  std::uint64_t id = 0;
  std::string name;
  std::vector<Command> commands;
  Value expected;
  Bindings properties;
  CoverageRecord coverage;

  friend bool operator==(const TestCaseRecord&, const TestCaseRecord&) = default;
};

// Synthesized properties attached by assemble_test_case.
inline const PropertyKey kExpectedResultKey{"expectedResult"};
inline const PropertyKey kCoveredStatementsKey{"coveredStatements"};
inline const PropertyKey kCoveredConditionsKey{"coveredConditions"};
inline const PropertyKey kCoveredBoundariesKey{"coveredBoundaries"};
inline const PropertyKey kCoveredPathKey{"coveredPath"};

std::vector<PropertyKey> synthesized_keys();

// tc_<id>__<classifier>, or tc_<id> without name parts. Characters other
// than letters, digits and '_' become '_'.
std::string test_case_name(std::uint64_t id, const std::vector<std::string>& classifier);

// Runs preconditions against the model, then the focus call, and assembles
// the command list preconditions + focus + verifications + postprocessing.
// Attaches the expected result and coverage as synthesized properties.
// Errors are rethrown as AssemblyError carrying the combination id.
TestCaseRecord assemble_test_case(CombinationContext& combination, const ModelInterface& model,
                                  const SolverInterface& solver, const AssemblySpec& spec);

// `{{field}}` substitution over id, name, expected, commands, properties
// and coverage, plus repeated sections `{{#commands}}...{{/commands}}`
// (fields function, args, index) and `{{#properties}}...{{/properties}}`
// (fields key, value). Throws TemplateError on unknown placeholders or
// unbalanced sections.
class ScriptTemplate {
 public:
  explicit ScriptTemplate(std::string text);

  std::string render(const TestCaseRecord& record) const;
  const std::string& text() const { return text_; }

 private:
  struct Part {
    enum class Kind { kText, kField, kSection } kind;
    std::string text;  // literal text, field or section name
    std::vector<Part> body;
  };

  std::string text_;
  std::vector<Part> parts_;

  static std::vector<Part> parse(std::string_view text, std::size_t& pos, const std::string& section);
  static void render_parts(const std::vector<Part>& parts, const TestCaseRecord& record,
                           const std::map<std::string, std::string>* item, std::string& out);
};

std::string render_script(const TestCaseRecord& record, const ScriptTemplate& tmpl);

class WriterInterface {
 public:
  virtual ~WriterInterface() = default;
  virtual std::string write(const TestCaseRecord& record) const = 0;
};

class TemplateWriter final : public WriterInterface {
 public:
  explicit TemplateWriter(ScriptTemplate tmpl) : template_(std::move(tmpl)) {}
  std::string write(const TestCaseRecord& record) const override { return template_.render(record); }

 private:
  ScriptTemplate template_;
};

inline constexpr const char* kStatementGoal = "statement_coverage";
inline constexpr const char* kMcdcGoal = "mcdc_coverage";
inline constexpr const char* kBoundaryGoal = "boundary_coverage";
inline constexpr const char* kPathGoal = "path_coverage";

// Statement, condition-outcome and boundary-relation goals over the
// synthesized coverage properties. The boundary goal is left out for models
// without boundaries.
std::vector<Goal> coverage_goals_from_model(const ModelInterface& model);
// Infinite goal over distinct execution paths.
Goal path_coverage_goal();

// Model inputs behind the synthesized keys, for GoalPruner.
std::map<PropertyKey, std::set<PropertyKey>> synthesized_reads(const AssemblySpec& spec,
                                                               const SolverInterface& solver);

}  // namespace rulegen
