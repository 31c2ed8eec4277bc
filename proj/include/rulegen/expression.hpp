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

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rulegen/combination.hpp"
#include "rulegen/value.hpp"

namespace rulegen {

enum class UnaryOp { kNot, kNegate };

enum class BinaryOp {
  kEq, kNe, kLt, kLe, kGt, kGe,
  kAnd, kOr,
  kAdd, kSub, kMul, kDiv, kMod,
};

const char* to_string(BinaryOp op);

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree. Nodes are shared between rules freely.
class Expr {
 public:
  struct Literal { Value value; };
  struct Ref { PropertyKey key; };
  struct Unary { UnaryOp op; ExprPtr operand; };
  struct Binary { BinaryOp op; ExprPtr lhs; ExprPtr rhs; };
  struct List { std::vector<ExprPtr> items; };
  struct Call { std::string name; std::vector<ExprPtr> args; };
  using Node = std::variant<Literal, Ref, Unary, Binary, List, Call>;

  explicit Expr(Node node) : node_(std::move(node)) {}

  static ExprPtr literal(Value v);
  static ExprPtr ref(PropertyKey key);
  static ExprPtr ref(std::string name) { return ref(PropertyKey(std::move(name))); }
  static ExprPtr unary(UnaryOp op, ExprPtr operand);
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr list(std::vector<ExprPtr> items);
  static ExprPtr call(std::string name, std::vector<ExprPtr> args);

  const Node& node() const { return node_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  Node node_;
};

// Null-safe structural equality.
bool same_expr(const ExprPtr& a, const ExprPtr& b);

// DSL source text; reparses to a structurally equal tree.
std::string render(const Expr& expr);

using ExternalFunction = std::function<Value(std::span<const Value>)>;

// Functions callable from rule expressions, looked up by name.
class FunctionTable {
 public:
  // tuple, pair, len, range, contains, concat.
  static FunctionTable with_builtins();

  // `arity` < 0 accepts any argument count.
  void add(std::string name, ExternalFunction fn, int arity = -1);
  bool contains(std::string_view name) const;
  Value call(const std::string& name, std::span<const Value> args) const;
  std::vector<std::string> names() const;

 private:
  struct Entry {
    ExternalFunction fn;
    int arity;
  };
  std::map<std::string, Entry, std::less<>> entries_;
};

using FunctionTablePtr = std::shared_ptr<const FunctionTable>;

// Supplies values for properties missing from the environment. Throws
// EvalError(kUnresolvableProperty) when it cannot.
using PropertyResolver = std::function<Value(const PropertyKey&)>;

// Evaluates `expr` with properties looked up in `env` first and then through
// `resolver` (which may be empty). References are read left to right, depth
// first; `and`/`or` short-circuit.
Value evaluate_expression(const Expr& expr, const Bindings& env, const PropertyResolver& resolver,
                          const FunctionTable& functions);

// Every property syntactically referenced by `expr`.
std::set<PropertyKey> referenced_properties(const Expr& expr);

// Names of all functions called anywhere in `expr`.
std::set<std::string> called_functions(const Expr& expr);

// True if `expr` calls any function with an empty argument list.
bool has_nullary_call(const Expr& expr);

}  // namespace rulegen
