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

#include "rulegen/expression.hpp"

#include <algorithm>

#include "rulegen/errors.hpp"

namespace rulegen {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::kEq: case BinaryOp::kNe: case BinaryOp::kLt:
    case BinaryOp::kLe: case BinaryOp::kGt: case BinaryOp::kGe:
      return true;
    default:
      return false;
  }
}

void check_overflow(bool overflowed, const char* op) {
  if (overflowed) throw EvalError(EvalErrorKind::kOverflow, op, std::string("integer overflow in ") + op);
}

Value arithmetic(BinaryOp op, const Value& a, const Value& b) {
  if (!a.is_integer() || !b.is_integer()) {
    throw EvalError(EvalErrorKind::kTypeMismatch, to_string(op),
                    std::string("operator ") + to_string(op) + " needs Integer operands, got " +
                        to_string(a.kind()) + " and " + to_string(b.kind()));
  }
  const std::int64_t x = a.as_integer();
  const std::int64_t y = b.as_integer();
  std::int64_t r = 0;
  switch (op) {
    case BinaryOp::kAdd:
      check_overflow(__builtin_add_overflow(x, y, &r), "+");
      return r;
    case BinaryOp::kSub:
      check_overflow(__builtin_sub_overflow(x, y, &r), "-");
      return r;
    case BinaryOp::kMul:
      check_overflow(__builtin_mul_overflow(x, y, &r), "*");
      return r;
    case BinaryOp::kDiv:
    case BinaryOp::kMod:
      if (y == 0) throw EvalError(EvalErrorKind::kDivisionByZero, to_string(op), "division by zero");
      if (x == INT64_MIN && y == -1) {
        if (op == BinaryOp::kMod) return std::int64_t{0};
        throw EvalError(EvalErrorKind::kOverflow, "div", "integer overflow in div");
      }
      return op == BinaryOp::kDiv ? x / y : x % y;
    default:
      break;
  }
  throw EvalError(EvalErrorKind::kTypeMismatch, to_string(op), "not an arithmetic operator");
}

Value compare(BinaryOp op, const Value& a, const Value& b) {
  if (a.kind() != b.kind()) {
    throw EvalError(EvalErrorKind::kTypeMismatch, to_string(op),
                    std::string("cannot compare ") + to_string(a.kind()) + " with " + to_string(b.kind()));
  }
  if (op == BinaryOp::kEq) return a == b;
  if (op == BinaryOp::kNe) return !(a == b);
  int c = 0;
  if (a.is_integer()) {
    c = a.as_integer() < b.as_integer() ? -1 : (a.as_integer() > b.as_integer() ? 1 : 0);
  } else if (a.is_string()) {
    c = a.as_string().compare(b.as_string());
  } else {
    throw EvalError(EvalErrorKind::kTypeMismatch, to_string(op),
                    std::string("ordering is not defined for ") + to_string(a.kind()));
  }
  switch (op) {
    case BinaryOp::kLt: return c < 0;
    case BinaryOp::kLe: return c <= 0;
    case BinaryOp::kGt: return c > 0;
    default: return c >= 0;
  }
}

class Evaluator {
 public:
  Evaluator(const Bindings& env, const PropertyResolver& resolver, const FunctionTable& functions)
      : env_(env), resolver_(resolver), functions_(functions) {}

  Value eval(const Expr& e) const {
    return std::visit(
        Overloaded{
            [](const Expr::Literal& n) { return n.value; },
            [this](const Expr::Ref& n) { return lookup(n.key); },
            [this](const Expr::Unary& n) -> Value {
              Value v = eval(*n.operand);
              if (n.op == UnaryOp::kNot) return !v.as_bool();
              if (!v.is_integer()) {
                throw EvalError(EvalErrorKind::kTypeMismatch, "-",
                                std::string("negation needs Integer, got ") + to_string(v.kind()));
              }
              std::int64_t r = 0;
              check_overflow(__builtin_sub_overflow(std::int64_t{0}, v.as_integer(), &r), "-");
              return r;
            },
            [this](const Expr::Binary& n) -> Value {
              if (n.op == BinaryOp::kAnd || n.op == BinaryOp::kOr) {
                const bool lhs = as_bool_operand(eval(*n.lhs), n.op);
                if (n.op == BinaryOp::kAnd && !lhs) return false;
                if (n.op == BinaryOp::kOr && lhs) return true;
                return as_bool_operand(eval(*n.rhs), n.op);
              }
              Value a = eval(*n.lhs);
              Value b = eval(*n.rhs);
              return is_comparison(n.op) ? compare(n.op, a, b) : arithmetic(n.op, a, b);
            },
            [this](const Expr::List& n) -> Value {
              ValueList out;
              out.reserve(n.items.size());
              for (const auto& item : n.items) out.push_back(eval(*item));
              return out;
            },
            [this](const Expr::Call& n) -> Value {
              if (!functions_.contains(n.name)) {
                throw EvalError(EvalErrorKind::kUnknownFunction, n.name, "unknown function '" + n.name + "'");
              }
              std::vector<Value> args;
              args.reserve(n.args.size());
              for (const auto& a : n.args) args.push_back(eval(*a));
              return functions_.call(n.name, args);
            },
        },
        e.node());
  }

 private:
  static bool as_bool_operand(const Value& v, BinaryOp op) {
    if (!v.is_bool()) {
      throw EvalError(EvalErrorKind::kTypeMismatch, to_string(op),
                      std::string("operator ") + to_string(op) + " needs Bool operands, got " + to_string(v.kind()));
    }
    return v.as_bool();
  }

  Value lookup(const PropertyKey& key) const {
    if (const Binding* b = find_binding(env_, key)) return b->value;
    if (resolver_) return resolver_(key);
    throw EvalError(EvalErrorKind::kUnresolvableProperty, key.name(),
                    "property " + key.display() + " is not assigned");
  }

  const Bindings& env_;
  const PropertyResolver& resolver_;
  const FunctionTable& functions_;
};

void collect_refs(const Expr& e, std::set<PropertyKey>& out) {
  std::visit(Overloaded{
                 [](const Expr::Literal&) {},
                 [&](const Expr::Ref& n) { out.insert(n.key); },
                 [&](const Expr::Unary& n) { collect_refs(*n.operand, out); },
                 [&](const Expr::Binary& n) {
                   collect_refs(*n.lhs, out);
                   collect_refs(*n.rhs, out);
                 },
                 [&](const Expr::List& n) {
                   for (const auto& i : n.items) collect_refs(*i, out);
                 },
                 [&](const Expr::Call& n) {
                   for (const auto& a : n.args) collect_refs(*a, out);
                 },
             },
             e.node());
}

template <class F>
void visit_calls(const Expr& e, F&& f) {
  std::visit(Overloaded{
                 [](const Expr::Literal&) {},
                 [](const Expr::Ref&) {},
                 [&](const Expr::Unary& n) { visit_calls(*n.operand, f); },
                 [&](const Expr::Binary& n) {
                   visit_calls(*n.lhs, f);
                   visit_calls(*n.rhs, f);
                 },
                 [&](const Expr::List& n) {
                   for (const auto& i : n.items) visit_calls(*i, f);
                 },
                 [&](const Expr::Call& n) {
                   f(n);
                   for (const auto& a : n.args) visit_calls(*a, f);
                 },
             },
             e.node());
}

// Binding strength used by the renderer; mirrors the DSL parser.
int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Expr::Binary>(&e.node())) {
    switch (b->op) {
      case BinaryOp::kOr: return 1;
      case BinaryOp::kAnd: return 2;
      case BinaryOp::kAdd: case BinaryOp::kSub: return 5;
      case BinaryOp::kMul: case BinaryOp::kDiv: case BinaryOp::kMod: return 6;
      default: return 4;
    }
  }
  if (const auto* u = std::get_if<Expr::Unary>(&e.node())) return u->op == UnaryOp::kNot ? 3 : 7;
  if (const auto* l = std::get_if<Expr::Literal>(&e.node())) {
    if (l->value.is_integer() && l->value.as_integer() < 0) return 7;
  }
  return 8;
}

std::string render_operand(const Expr& e, int min_prec) {
  std::string s = render(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string render_call_args(const std::vector<ExprPtr>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += render(*args[i]);
  }
  return out;
}

ValueMap positional(std::span<const Value> args) {
  ValueMap m;
  for (std::size_t i = 0; i < args.size(); ++i) m.emplace_back(std::to_string(i), args[i]);
  return m;
}

}  // namespace

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::kEq: return "==";
    case BinaryOp::kNe: return "!=";
    case BinaryOp::kLt: return "<";
    case BinaryOp::kLe: return "<=";
    case BinaryOp::kGt: return ">";
    case BinaryOp::kGe: return ">=";
    case BinaryOp::kAnd: return "and";
    case BinaryOp::kOr: return "or";
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "div";
    case BinaryOp::kMod: return "mod";
  }
  return "?";
}

ExprPtr Expr::literal(Value v) { return std::make_shared<const Expr>(Literal{std::move(v)}); }
ExprPtr Expr::ref(PropertyKey key) { return std::make_shared<const Expr>(Ref{std::move(key)}); }
ExprPtr Expr::unary(UnaryOp op, ExprPtr operand) {
  return std::make_shared<const Expr>(Unary{op, std::move(operand)});
}
ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Binary{op, std::move(lhs), std::move(rhs)});
}
ExprPtr Expr::list(std::vector<ExprPtr> items) { return std::make_shared<const Expr>(List{std::move(items)}); }
ExprPtr Expr::call(std::string name, std::vector<ExprPtr> args) {
  return std::make_shared<const Expr>(Call{std::move(name), std::move(args)});
}

namespace {
bool same_all(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_expr);
}
}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_.index() != b.node_.index()) return false;
  return std::visit(
      Overloaded{
          [&](const Expr::Literal& n) { return n.value == std::get<Expr::Literal>(b.node_).value; },
          [&](const Expr::Ref& n) { return n.key == std::get<Expr::Ref>(b.node_).key; },
          [&](const Expr::Unary& n) {
            const auto& o = std::get<Expr::Unary>(b.node_);
            return n.op == o.op && same_expr(n.operand, o.operand);
          },
          [&](const Expr::Binary& n) {
            const auto& o = std::get<Expr::Binary>(b.node_);
            return n.op == o.op && same_expr(n.lhs, o.lhs) && same_expr(n.rhs, o.rhs);
          },
          [&](const Expr::List& n) { return same_all(n.items, std::get<Expr::List>(b.node_).items); },
          [&](const Expr::Call& n) {
            const auto& o = std::get<Expr::Call>(b.node_);
            return n.name == o.name && same_all(n.args, o.args);
          },
      },
      a.node_);
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

std::string render(const Expr& expr) {
  return std::visit(
      Overloaded{
          [](const Expr::Literal& n) { return n.value.literal(); },
          [](const Expr::Ref& n) { return n.key.display(); },
          [](const Expr::Unary& n) {
            if (n.op == UnaryOp::kNot) return "not " + render_operand(*n.operand, 3);
            return "-" + render_operand(*n.operand, 8);
          },
          [&expr](const Expr::Binary& n) {
            const int p = precedence(expr);
            // Left-associative chains; comparisons do not chain.
            const int lhs_min = p == 4 ? 5 : p;
            return render_operand(*n.lhs, lhs_min) + " " + to_string(n.op) + " " +
                   render_operand(*n.rhs, p + 1);
          },
          [](const Expr::List& n) { return "[" + render_call_args(n.items) + "]"; },
          [](const Expr::Call& n) { return n.name + "(" + render_call_args(n.args) + ")"; },
      },
      expr.node());
}

FunctionTable FunctionTable::with_builtins() {
  FunctionTable t;
  t.add("tuple", [](std::span<const Value> args) { return Value::map(positional(args)); });
  t.add("pair", [](std::span<const Value> args) { return Value::map(positional(args)); }, 2);
  t.add("len", [](std::span<const Value> args) -> Value {
    const Value& v = args[0];
    if (v.is_list()) return static_cast<std::int64_t>(v.as_list().size());
    if (v.is_map()) return static_cast<std::int64_t>(v.as_map().size());
    return static_cast<std::int64_t>(v.as_string().size());
  }, 1);
  t.add("range", [](std::span<const Value> args) -> Value {
    const std::int64_t lo = args[0].as_integer();
    const std::int64_t hi = args[1].as_integer();
    if (hi > lo && hi - lo > 1'000'000) {
      throw EvalError(EvalErrorKind::kFunctionFailure, "range", "range longer than 1000000 elements");
    }
    ValueList out;
    for (std::int64_t i = lo; i < hi; ++i) out.emplace_back(i);
    return out;
  }, 2);
  t.add("contains", [](std::span<const Value> args) -> Value {
    const auto& items = args[0].as_list();
    return std::find(items.begin(), items.end(), args[1]) != items.end();
  }, 2);
  t.add("concat", [](std::span<const Value> args) -> Value {
    ValueList out;
    for (const auto& a : args) {
      const auto& items = a.as_list();
      out.insert(out.end(), items.begin(), items.end());
    }
    return out;
  });
  return t;
}

void FunctionTable::add(std::string name, ExternalFunction fn, int arity) {
  entries_[std::move(name)] = Entry{std::move(fn), arity};
}

bool FunctionTable::contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }

Value FunctionTable::call(const std::string& name, std::span<const Value> args) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw EvalError(EvalErrorKind::kUnknownFunction, name, "unknown function '" + name + "'");
  }
  if (it->second.arity >= 0 && static_cast<int>(args.size()) != it->second.arity) {
    throw EvalError(EvalErrorKind::kArity, name,
                    name + "() takes " + std::to_string(it->second.arity) + " argument(s), got " +
                        std::to_string(args.size()));
  }
  try {
    return it->second.fn(args);
  } catch (const EvalError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvalError(EvalErrorKind::kFunctionFailure, name, name + "(): " + e.what());
  }
}

std::vector<std::string> FunctionTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

Value evaluate_expression(const Expr& expr, const Bindings& env, const PropertyResolver& resolver,
                          const FunctionTable& functions) {
  return Evaluator(env, resolver, functions).eval(expr);
}

std::set<PropertyKey> referenced_properties(const Expr& expr) {
  std::set<PropertyKey> out;
  collect_refs(expr, out);
  return out;
}

std::set<std::string> called_functions(const Expr& expr) {
  std::set<std::string> out;
  visit_calls(expr, [&](const Expr::Call& c) { out.insert(c.name); });
  return out;
}

bool has_nullary_call(const Expr& expr) {
  bool found = false;
  visit_calls(expr, [&](const Expr::Call& c) { found = found || c.args.empty(); });
  return found;
}

}  // namespace rulegen
