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

#include "rulegen/errors.hpp"

#include <utility>

namespace rulegen {

std::string SourceLocation::to_string() const {
  std::string out = file.empty() ? "<input>" : file;
  if (line > 0) {
    out += ":" + std::to_string(line);
    if (column > 0) out += ":" + std::to_string(column);
  }
  if (!node_id.empty()) out += "#" + node_id;
  return out;
}

const char* to_string(EvalErrorKind kind) {
  switch (kind) {
    case EvalErrorKind::kUnknownFunction: return "UnknownFunction";
    case EvalErrorKind::kUnresolvableProperty: return "UnresolvableProperty";
    case EvalErrorKind::kTypeMismatch: return "TypeMismatch";
    case EvalErrorKind::kOverflow: return "Overflow";
    case EvalErrorKind::kDivisionByZero: return "DivisionByZero";
    case EvalErrorKind::kArity: return "Arity";
    case EvalErrorKind::kFunctionFailure: return "FunctionFailure";
  }
  return "?";
}

EvalError::EvalError(EvalErrorKind kind, std::string subject, const std::string& message)
    : Error(std::string(to_string(kind)) + ": " + message), kind_(kind), subject_(std::move(subject)) {}

RuleError::RuleError(SourceLocation location, const std::string& context, const EvalError& cause)
    : Error(location.to_string() + ": " + context + ": " + cause.what()),
      location_(std::move(location)),
      cause_kind_(cause.kind()),
      cause_subject_(cause.subject()) {}

ReassignmentError::ReassignmentError(std::string key, SourceLocation location)
    : Error(location.to_string() + ": property $" + key + " is already assigned"),
      key_(std::move(key)),
      location_(std::move(location)) {}

namespace {
std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += " -> ";
    out += "$" + path[i];
  }
  return out;
}
}  // namespace

CyclicDependencyError::CyclicDependencyError(std::vector<std::string> path)
    : Error("cyclic dependency: " + join_path(path)), path_(std::move(path)) {}

ParseError::ParseError(SourceLocation location, const std::string& message)
    : Error(location.to_string() + ": " + message), location_(std::move(location)) {}

TemplateError::TemplateError(std::string placeholder)
    : Error("UnknownPlaceholder: {{" + placeholder + "}}"), placeholder_(std::move(placeholder)) {}

AssemblyError::AssemblyError(std::uint64_t combination_id, const std::string& message)
    : Error("combination " + std::to_string(combination_id) + ": " + message),
      combination_id_(combination_id) {}

}  // namespace rulegen
