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
#include <stdexcept>
#include <string>
#include <vector>

namespace rulegen {

// Where a rule, goal or diagnostic came from. `line`/`column` are 1-based
// for DSL files; mind maps carry the node ID instead of a column.
struct SourceLocation {
  std::string file;
  int line = 0;
  int column = 0;
  std::string node_id;

  bool empty() const { return file.empty() && line == 0 && node_id.empty(); }
  std::string to_string() const;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EvalErrorKind {
  kUnknownFunction,
  kUnresolvableProperty,
  kTypeMismatch,
  kOverflow,
  kDivisionByZero,
  kArity,
  kFunctionFailure,
};

const char* to_string(EvalErrorKind kind);

class EvalError : public Error {
 public:
  EvalError(EvalErrorKind kind, std::string subject, const std::string& message);

  EvalErrorKind kind() const { return kind_; }
  // Function name, property key or operator the error is about.
  const std::string& subject() const { return subject_; }

 private:
  EvalErrorKind kind_;
  std::string subject_;
};

// An expression error raised while evaluating a rule or goal.
class RuleError : public Error {
 public:
  RuleError(SourceLocation location, const std::string& context, const EvalError& cause);

  const SourceLocation& location() const { return location_; }
  EvalErrorKind cause_kind() const { return cause_kind_; }
  const std::string& cause_subject() const { return cause_subject_; }

 private:
  SourceLocation location_;
  EvalErrorKind cause_kind_;
  std::string cause_subject_;
};

class ReassignmentError : public Error {
 public:
  ReassignmentError(std::string key, SourceLocation location);

  const std::string& key() const { return key_; }
  const SourceLocation& location() const { return location_; }

 private:
  std::string key_;
  SourceLocation location_;
};

class CyclicDependencyError : public Error {
 public:
  explicit CyclicDependencyError(std::vector<std::string> path);

  const std::vector<std::string>& path() const { return path_; }

 private:
  std::vector<std::string> path_;
};

class ParseError : public Error {
 public:
  ParseError(SourceLocation location, const std::string& message);

  const SourceLocation& location() const { return location_; }

 private:
  SourceLocation location_;
};

class MalformedMapError : public ParseError {
 public:
  using ParseError::ParseError;
};

class TemplateError : public Error {
 public:
  explicit TemplateError(std::string placeholder);

  const std::string& placeholder() const { return placeholder_; }

 private:
  std::string placeholder_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  AssemblyError(std::uint64_t combination_id, const std::string& message);

  std::uint64_t combination_id() const { return combination_id_; }

 private:
  std::uint64_t combination_id_;
};

}  // namespace rulegen
