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
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "rulegen/frontend.hpp"

namespace rulegen {

const char* to_string(CoverageKind kind) {
  switch (kind) {
    case CoverageKind::kStatements: return "statements";
    case CoverageKind::kMcdc: return "mcdc";
    case CoverageKind::kBoundaries: return "boundaries";
    case CoverageKind::kPaths: return "paths";
  }
  return "?";
}

namespace {

enum class Tok { kIdent, kKey, kInt, kString, kPunct, kNewline, kEnd };

struct Token {
  Tok kind;
  std::string text;  // identifier, key name, punctuation, decoded string
  std::uint64_t magnitude = 0;  // kInt; up to 2^63 so -2^63 can be folded
  int line = 0;
  int column = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\n') {
        if (depth == 0) out.push_back({Tok::kNewline, "\n", 0, line_, col_});
        advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      const int line = line_;
      const int col = col_;
      if (c == '$') {
        advance();
        std::string name;
        while (pos_ < text_.size() && ident_char(text_[pos_])) name += advance();
        if (name.empty()) fail(line, col, "expected a property name after '$'");
        if (pos_ < text_.size() && (text_[pos_] == '/' || text_[pos_] == ':')) {
          fail(line_, col_, std::string("ReservedCharacter: '") + text_[pos_] + "' is not allowed in property keys");
        }
        out.push_back({Tok::kKey, name, 0, line, col});
        continue;
      }
      if (ident_start(c)) {
        std::string name;
        while (pos_ < text_.size() && ident_char(text_[pos_])) name += advance();
        out.push_back({Tok::kIdent, name, 0, line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string digits;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits += advance();
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || v > (1ULL << 63)) fail(line, col, "integer literal out of range: " + digits);
        out.push_back({Tok::kInt, digits, v, line, col});
        continue;
      }
      if (c == '"') {
        out.push_back({Tok::kString, read_string(line, col), 0, line, col});
        continue;
      }
      static const char* two[] = {"==", "!=", "<=", ">="};
      bool matched = false;
      for (const char* t : two) {
        if (text_.substr(pos_, 2) == t) {
          advance();
          advance();
          out.push_back({Tok::kPunct, t, 0, line, col});
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("[](){},<>+-*").find(c) != std::string_view::npos) {
        if (c == '(' || c == '[') ++depth;
        if ((c == ')' || c == ']') && depth > 0) --depth;
        advance();
        out.push_back({Tok::kPunct, std::string(1, c), 0, line, col});
        continue;
      }
      fail(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::kNewline, "\n", 0, line_, col_});
    out.push_back({Tok::kEnd, "", 0, line_, col_});
    return out;
  }

 private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  std::string read_string(int line, int col) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') fail(line, col, "unterminated string literal");
      char c = advance();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= text_.size()) fail(line, col, "unterminated string literal");
      char e = advance();
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(line_, col_ - 1, std::string("unknown escape '\\") + e + "'");
      }
    }
  }

  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    throw ParseError(SourceLocation{file_, line, col, ""}, msg);
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file) : toks_(std::move(tokens)), file_(std::move(file)) {}

  StrategyDocument document() {
    StrategyDocument doc;
    doc.source = file_;
    std::set<std::string> goal_names;
    int index = 0;
    skip_newlines();
    while (peek().kind != Tok::kEnd) {
      statement(doc, doc.rules, goal_names, index, false);
      skip_newlines();
    }
    return doc;
  }

  ExprPtr lone_expression() {
    while (peek().kind == Tok::kNewline && peek(1).kind != Tok::kEnd) ++pos_;
    auto e = expression();
    skip_newlines();
    if (peek().kind != Tok::kEnd) error(peek(), "unexpected '" + peek().text + "' after expression");
    return e;
  }

 private:
  void statement(StrategyDocument& doc, std::vector<Rule>& rules, std::set<std::string>& goal_names, int& index,
                 bool injected) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent) error(t, "expected 'iterate', 'default', 'goal' or 'name_part'");
    if (t.text == "iterate") {
      rules.push_back(iterate_rule(doc, goal_names, index));
    } else if (t.text == "default") {
      rules.push_back(default_rule(index));
    } else if (t.text == "goal" && !injected) {
      goal(doc, goal_names);
    } else if (t.text == "name_part" && !injected) {
      ++pos_;
      for (auto& k : key_list()) {
        if (std::find(doc.name_parts.begin(), doc.name_parts.end(), k) == doc.name_parts.end()) {
          doc.name_parts.push_back(std::move(k));
        }
      }
    } else if (injected) {
      error(t, "only 'iterate' and 'default' rules may be injected");
    } else {
      error(t, "unknown statement '" + t.text + "'");
    }
    end_of_statement();
  }

  Rule iterate_rule(StrategyDocument& doc, std::set<std::string>& goal_names, int& index) {
    const Token& start = next();
    IterationRule r;
    r.location = here(start);
    r.definition_index = index++;
    r.target = key_name(next(), "target property");
    if (accept_word("when")) {
      for (auto& k : key_list()) r.when.insert(std::move(k));
      if (r.when.count(r.target)) error(start, "iteration rule for " + r.target.display() + " lists itself in WHEN");
    }
    if (accept_word("if")) r.condition = expression();
    expect_word("values");
    r.values = expression_list();
    if (accept_word("shuffled")) r.shuffled = true;
    if (accept_word("inject")) {
      expect_punct("{");
      skip_newlines();
      while (!(peek().kind == Tok::kPunct && peek().text == "}")) {
        if (peek().kind == Tok::kEnd) error(peek(), "unterminated inject block");
        statement(doc, r.injected, goal_names, index, true);
        skip_newlines();
      }
      ++pos_;
    }
    return Rule{std::move(r)};
  }

  Rule default_rule(int& index) {
    const Token& start = next();
    DefaultRule r;
    r.location = here(start);
    r.definition_index = index++;
    r.target = key_name(next(), "target property");
    if (accept_word("if")) r.condition = expression();
    expect_word("value");
    r.value = expression();
    return Rule{std::move(r)};
  }

  void goal(StrategyDocument& doc, std::set<std::string>& goal_names) {
    const Token& start = next();
    const Token& name_tok = next();
    if (name_tok.kind != Tok::kIdent && name_tok.kind != Tok::kString) error(name_tok, "expected a goal name");
    const std::string name = name_tok.text;
    if (!goal_names.insert(name).second) error(name_tok, "duplicate goal name '" + name + "'");
    const Token& kind = next();
    if (kind.kind == Tok::kIdent && kind.text == "finite") {
      expect_word("checklist");
      const Token& list_start = peek();
      ExprPtr list_expr = expression_list();
      Value list;
      try {
        list = evaluate_expression(*list_expr, {}, {}, FunctionTable::with_builtins());
      } catch (const EvalError& e) {
        error(list_start, std::string("check list must be a constant: ") + e.what());
      }
      expect_word("function");
      ExprPtr fn = expression();
      if (list.as_list().empty()) error(list_start, "check list of goal '" + name + "' is empty");
      Goal g = Goal::finite(name, list.as_list(), std::move(fn));
      g.location = here(start);
      doc.goals.push_back(std::move(g));
    } else if (kind.kind == Tok::kIdent && kind.text == "infinite") {
      expect_word("function");
      Goal g = Goal::infinite(name, expression());
      g.location = here(start);
      doc.goals.push_back(std::move(g));
    } else if (kind.kind == Tok::kIdent && kind.text == "coverage") {
      const Token& k = next();
      static const std::pair<const char*, CoverageKind> kinds[] = {
          {"statements", CoverageKind::kStatements},
          {"mcdc", CoverageKind::kMcdc},
          {"boundaries", CoverageKind::kBoundaries},
          {"paths", CoverageKind::kPaths},
      };
      for (const auto& [word, ck] : kinds) {
        if (k.kind == Tok::kIdent && k.text == word) {
          doc.coverage.push_back({name, ck, here(start)});
          return;
        }
      }
      error(k, "expected statements, mcdc, boundaries or paths");
    } else {
      error(kind, "expected 'finite', 'infinite' or 'coverage'");
    }
  }

  // `[a, b]`, or a bare comma-separated sequence of expressions.
  ExprPtr expression_list() {
    ExprPtr first = expression();
    if (!(peek().kind == Tok::kPunct && peek().text == ",")) return first;
    std::vector<ExprPtr> items{first};
    while (accept_punct(",")) items.push_back(expression());
    return Expr::list(std::move(items));
  }

  std::vector<PropertyKey> key_list() {
    std::vector<PropertyKey> out;
    do {
      out.push_back(key_name(next(), "property name"));
    } while (accept_punct(","));
    return out;
  }

  ExprPtr expression() { return disjunction(); }

  ExprPtr disjunction() {
    ExprPtr lhs = conjunction();
    while (accept_word("or")) lhs = Expr::binary(BinaryOp::kOr, lhs, conjunction());
    return lhs;
  }

  ExprPtr conjunction() {
    ExprPtr lhs = negation();
    while (accept_word("and")) lhs = Expr::binary(BinaryOp::kAnd, lhs, negation());
    return lhs;
  }

  ExprPtr negation() {
    if (accept_word("not")) return Expr::unary(UnaryOp::kNot, negation());
    return comparison();
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    static const std::pair<const char*, BinaryOp> ops[] = {
        {"==", BinaryOp::kEq}, {"!=", BinaryOp::kNe}, {"<=", BinaryOp::kLe},
        {">=", BinaryOp::kGe}, {"<", BinaryOp::kLt},  {">", BinaryOp::kGt},
    };
    for (const auto& [text, op] : ops) {
      if (accept_punct(text)) {
        ExprPtr rhs = additive();
        if (peek().kind == Tok::kPunct) {
          for (const auto& [t2, op2] : ops) {
            if (peek().text == t2) error(peek(), "comparisons do not chain; add parentheses");
          }
        }
        return Expr::binary(op, lhs, rhs);
      }
    }
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (true) {
      if (accept_punct("+")) {
        lhs = Expr::binary(BinaryOp::kAdd, lhs, multiplicative());
      } else if (accept_punct("-")) {
        lhs = Expr::binary(BinaryOp::kSub, lhs, multiplicative());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    while (true) {
      if (accept_punct("*")) {
        lhs = Expr::binary(BinaryOp::kMul, lhs, unary());
      } else if (accept_word("div")) {
        lhs = Expr::binary(BinaryOp::kDiv, lhs, unary());
      } else if (accept_word("mod")) {
        lhs = Expr::binary(BinaryOp::kMod, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (accept_punct("-")) {
      if (peek().kind == Tok::kInt) {
        const Token& t = next();
        if (t.magnitude == (1ULL << 63)) return Expr::literal(Value(INT64_MIN));
        return Expr::literal(Value(-static_cast<std::int64_t>(t.magnitude)));
      }
      return Expr::unary(UnaryOp::kNegate, unary());
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::kInt:
        if (t.magnitude > static_cast<std::uint64_t>(INT64_MAX)) error(t, "integer literal out of range");
        return Expr::literal(Value(static_cast<std::int64_t>(t.magnitude)));
      case Tok::kString:
        return Expr::literal(Value(t.text));
      case Tok::kKey:
        return Expr::ref(key_name(t, "property reference"));
      case Tok::kIdent: {
        if (t.text == "true" || t.text == "TRUE") return Expr::literal(Value(true));
        if (t.text == "false" || t.text == "FALSE") return Expr::literal(Value(false));
        if (!accept_punct("(")) error(t, "unknown name '" + t.text + "'; property references start with '$'");
        std::vector<ExprPtr> args;
        if (!accept_punct(")")) {
          do {
            args.push_back(expression());
          } while (accept_punct(","));
          expect_punct(")");
        }
        return Expr::call(t.text, std::move(args));
      }
      case Tok::kPunct:
        if (t.text == "(") {
          ExprPtr e = expression();
          expect_punct(")");
          return e;
        }
        if (t.text == "[") {
          std::vector<ExprPtr> items;
          if (!accept_punct("]")) {
            do {
              items.push_back(expression());
            } while (accept_punct(","));
            expect_punct("]");
          }
          return Expr::list(std::move(items));
        }
        break;
      default:
        break;
    }
    error(t, t.kind == Tok::kNewline || t.kind == Tok::kEnd ? "unexpected end of line"
                                                            : "unexpected '" + t.text + "'");
  }

  PropertyKey key_name(const Token& t, const char* what) {
    if (t.kind != Tok::kIdent && t.kind != Tok::kKey) error(t, std::string("expected ") + what);
    if (!PropertyKey::is_valid(t.text)) error(t, "invalid property key '" + t.text + "'");
    return PropertyKey(t.text);
  }

  void end_of_statement() {
    const Token& t = peek();
    if (t.kind == Tok::kNewline || t.kind == Tok::kEnd) return;
    if (t.kind == Tok::kPunct && t.text == "}") return;
    error(t, "unexpected '" + t.text + "' at end of statement");
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  void skip_newlines() {
    while (peek().kind == Tok::kNewline) ++pos_;
  }
  bool accept_word(const char* w) {
    if (peek().kind == Tok::kIdent && peek().text == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_punct(const char* p) {
    if (peek().kind == Tok::kPunct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_word(const char* w) {
    if (!accept_word(w)) error(peek(), std::string("expected '") + w + "'");
  }
  void expect_punct(const char* p) {
    if (!accept_punct(p)) error(peek(), std::string("expected '") + p + "'");
  }

  SourceLocation here(const Token& t) const { return SourceLocation{file_, t.line, t.column, ""}; }

  [[noreturn]] void error(const Token& t, const std::string& msg) const { throw ParseError(here(t), msg); }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
};

std::string join_keys(const std::vector<PropertyKey>& keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ", ";
    out += keys[i].name();
  }
  return out;
}

void render_rules(const std::vector<Rule>& rules, const std::string& indent, std::string& out) {
  for (const auto& r : rules) {
    out += indent;
    if (r.is_iteration()) {
      const auto& it = r.iteration();
      out += "iterate " + it.target.name();
      if (!it.when.empty()) out += " when " + join_keys({it.when.begin(), it.when.end()});
      if (it.condition) out += " if " + render(*it.condition);
      out += " values " + render(*it.values);
      if (it.shuffled) out += " shuffled";
      if (!it.injected.empty()) {
        out += " inject {\n";
        render_rules(it.injected, indent + "  ", out);
        out += indent + "}";
      }
    } else {
      const auto& d = r.fallback();
      out += "default " + d.target.name();
      if (d.condition) out += " if " + render(*d.condition);
      out += " value " + render(*d.value);
    }
    out += "\n";
  }
}

bool plain_identifier(const std::string& s) {
  static const std::set<std::string> reserved = {"true", "TRUE", "false", "FALSE", "and", "or", "not", "div", "mod"};
  if (s.empty() || !ident_start(s[0]) || reserved.count(s)) return false;
  return std::all_of(s.begin(), s.end(), ident_char);
}

bool same_goal(const Goal& a, const Goal& b) {
  return a.name == b.name && a.kind == b.kind && a.checklist == b.checklist && same_expr(a.function, b.function);
}

}  // namespace

StrategyDocument parse_dsl(std::string_view text, const std::string& file) {
  Parser parser(Lexer(text, file).run(), file);
  StrategyDocument doc = parser.document();
  if (doc.empty()) {
    doc.diagnostics.push_back({DiagnosticKind::kEmptyRuleSet, Severity::kWarning, "strategy file contains no rules",
                               SourceLocation{file, 0, 0, ""}});
  }
  return doc;
}

ExprPtr parse_expression(std::string_view text, const SourceLocation& where) {
  // Errors are reported relative to the expression text, anchored at `where`.
  try {
    Parser parser(Lexer(text, where.file).run(), where.file);
    return parser.lone_expression();
  } catch (const ParseError& e) {
    if (where.node_id.empty() && where.line == 0) throw;
    SourceLocation loc = where;
    throw ParseError(loc, std::string("in expression '") + std::string(text) + "': " + e.what());
  }
}

std::string render_dsl(const StrategyDocument& doc) {
  std::string out;
  render_rules(doc.rules, "", out);
  if (!doc.name_parts.empty()) out += "name_part " + join_keys(doc.name_parts) + "\n";
  for (const auto& g : doc.goals) {
    std::string name = plain_identifier(g.name) ? g.name : quote_string(g.name);
    if (g.kind == GoalKind::kFinite) {
      out += "goal " + name + " finite checklist " + Value(ValueList(g.checklist)).literal() + " function " +
             render(*g.function) + "\n";
    } else {
      out += "goal " + name + " infinite function " + render(*g.function) + "\n";
    }
  }
  for (const auto& c : doc.coverage) {
    std::string name = plain_identifier(c.name) ? c.name : quote_string(c.name);
    out += "goal " + name + " coverage " + to_string(c.kind) + "\n";
  }
  return out;
}

bool same_document(const StrategyDocument& a, const StrategyDocument& b) {
  return std::equal(a.rules.begin(), a.rules.end(), b.rules.begin(), b.rules.end(), same_rule) &&
         std::equal(a.goals.begin(), a.goals.end(), b.goals.begin(), b.goals.end(), same_goal) &&
         a.coverage == b.coverage && a.name_parts == b.name_parts;
}

StrategyDocument load_strategy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read strategy file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string ext = path.extension().string();
  if (ext == ".mm") return parse_mindmap(buf.str(), path.string());
  if (ext == ".rules" || ext == ".goals") return parse_dsl(buf.str(), path.string());
  throw Error("unknown strategy file type '" + ext + "' (expected .rules, .goals or .mm)");
}

}  // namespace rulegen
