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

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "rulegen/frontend.hpp"

namespace rulegen {
namespace {

const std::string kBundle = std::string(RULEGEN_SOURCE_DIR) + "/bundles/phonecall/";

RuleSet rule_set(const StrategyDocument& doc) {
  RuleSet s;
  s.append(doc.rules);
  return s;
}

TEST(DslTest, IterationRule) {
  auto doc = parse_dsl("iterate isCallValid values [true, false]\n");
  ASSERT_EQ(doc.rules.size(), 1u);
  auto expected = testing::iterate("isCallValid", {}, nullptr, {true, false});
  EXPECT_TRUE(same_rule(doc.rules[0], expected));
  EXPECT_EQ(doc.rules[0].location().line, 1);
}

TEST(DslTest, DefaultRule) {
  auto doc = parse_dsl(R"(default country if $destination == "International_2" value "Redland")");
  ASSERT_EQ(doc.rules.size(), 1u);
  auto expected =
      testing::fallback("country", testing::eq(testing::ref("destination"), testing::lit("International_2")), "Redland");
  EXPECT_TRUE(same_rule(doc.rules[0], expected));
}

TEST(DslTest, EmptyFileWarns) {
  auto doc = parse_dsl("# nothing here\n\n");
  EXPECT_TRUE(doc.empty());
  ASSERT_EQ(doc.diagnostics.size(), 1u);
  EXPECT_EQ(doc.diagnostics[0].severity, Severity::kWarning);
}

TEST(DslTest, BareValueListAndShuffle) {
  auto doc = parse_dsl("iterate d values 1, 2, 3 shuffled\n");
  ASSERT_EQ(doc.rules.size(), 1u);
  EXPECT_TRUE(doc.rules[0].iteration().shuffled);
  EXPECT_TRUE(same_expr(doc.rules[0].iteration().values, testing::list_of({1, 2, 3})));
}

TEST(DslTest, WhenListAndInjection) {
  auto doc = parse_dsl(
      "iterate mode values [\"a\",\n  \"b\"] inject {\n"
      "  iterate x when mode values [1]\n"
      "  default y value 2\n"
      "}\n"
      "iterate z when mode, x values [0]\n");
  ASSERT_EQ(doc.rules.size(), 2u);
  const auto& mode = doc.rules[0].iteration();
  ASSERT_EQ(mode.injected.size(), 2u);
  EXPECT_FALSE(mode.injected[1].is_iteration());
  EXPECT_EQ(doc.rules[1].iteration().when.size(), 2u);
  EXPECT_EQ(doc.rules[1].location().line, 6);
}

TEST(DslTest, GoalsAndDirectives) {
  auto doc = parse_dsl(
      "goal dest finite checklist [\"National\", \"International_1\"] function $destination\n"
      "goal pairs infinite function pair($a, $b)\n"
      "goal stmts coverage statements\n"
      "name_part destination, country\n");
  ASSERT_EQ(doc.goals.size(), 2u);
  EXPECT_EQ(doc.goals[0].kind, GoalKind::kFinite);
  EXPECT_EQ(doc.goals[0].checklist.size(), 2u);
  EXPECT_EQ(doc.goals[1].kind, GoalKind::kInfinite);
  ASSERT_EQ(doc.coverage.size(), 1u);
  EXPECT_EQ(doc.coverage[0].kind, CoverageKind::kStatements);
  EXPECT_EQ(doc.name_parts.size(), 2u);
}

TEST(DslTest, TupleChecklist) {
  auto doc = parse_dsl("goal g finite checklist [tuple(\"a\", 1), tuple(\"b\", 2)] function tuple($x, $y)\n");
  ASSERT_EQ(doc.goals.size(), 1u);
  EXPECT_EQ(doc.goals[0].checklist[1], Value::map({{"0", "b"}, {"1", 2}}));
}

void expect_parse_error(const std::string& text, int line, int column) {
  try {
    parse_dsl(text, "t.rules");
    FAIL() << "no error for: " << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location().line, line) << e.what();
    EXPECT_EQ(e.location().column, column) << e.what();
    EXPECT_EQ(e.location().file, "t.rules");
  }
}

TEST(DslTest, ErrorsCarryLineAndColumn) {
  expect_parse_error("iterate a values [1,\n 2", 2, 3);
  expect_parse_error("iterate a [1]", 1, 11);
  expect_parse_error("\n\nfrobnicate a", 3, 1);
  expect_parse_error("iterate a values \"oops", 1, 18);
  expect_parse_error("iterate a values [1] extra", 1, 22);
  expect_parse_error("iterate a values [1 == 2 == 3]", 1, 26);
  expect_parse_error("iterate a values [$b/c]", 1, 21);
  expect_parse_error("goal g finite checklist [] function $a", 1, 25);
  expect_parse_error("goal g finite checklist [$x] function $a", 1, 25);
}

TEST(DslTest, DuplicateGoalNames) {
  expect_parse_error("goal g infinite function $a\ngoal g infinite function $b\n", 2, 6);
}

TEST(DslTest, ExtremeIntegers) {
  auto e = parse_expression("-9223372036854775808");
  EXPECT_TRUE(same_expr(e, Expr::literal(Value(INT64_MIN))));
  EXPECT_THROW(parse_expression("9223372036854775808"), ParseError);
}

TEST(DslTest, PrecedenceMatchesRendering) {
  auto e = parse_expression("1 + 2 * 3 == 7 and not $a or $b");
  EXPECT_EQ(render(*e), "1 + 2 * 3 == 7 and not $a or $b");
  auto grouped = parse_expression("(1 + 2) * 3");
  EXPECT_EQ(render(*grouped), "(1 + 2) * 3");
  EXPECT_EQ(evaluate_expression(*grouped, {}, {}, FunctionTable::with_builtins()), Value(9));
}

// Random documents for the render/parse round trip.
class DocGenerator {
 public:
  explicit DocGenerator(std::uint64_t seed) : rng_(seed) {}

  StrategyDocument document() {
    StrategyDocument doc;
    const int rules = pick(0, 6);
    for (int i = 0; i < rules; ++i) doc.rules.push_back(rule(2));
    const int goals = pick(0, 3);
    for (int i = 0; i < goals; ++i) {
      std::string name = i == 0 && pick(0, 1) ? "goal with space" : "g" + std::to_string(i);
      if (pick(0, 1)) {
        std::vector<Value> list;
        for (int j = 0, n = pick(1, 4); j < n; ++j) list.push_back(value(1));
        doc.goals.push_back(Goal::finite(name, list, expr(2)));
      } else {
        doc.goals.push_back(Goal::infinite(name, expr(2)));
      }
    }
    if (pick(0, 1)) doc.coverage.push_back({"cov", static_cast<CoverageKind>(pick(0, 3)), {}});
    if (pick(0, 1)) doc.name_parts = {key(), PropertyKey("zz")};
    return doc;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  PropertyKey key() {
    static const char* names[] = {"a", "b", "c_1", "destination", "x.y"};
    return PropertyKey(names[pick(0, 4)]);
  }

  Value value(int depth) {
    switch (pick(0, depth > 0 ? 4 : 2)) {
      case 0: return Value(pick(0, 1) == 1);
      case 1: return Value(static_cast<std::int64_t>(pick(-1000, 1000)));
      case 2: {
        static const char* strings[] = {"", "plain", "with \"quotes\"", "back\\slash", "tab\tnew\nline", "#hash"};
        return Value(strings[pick(0, 5)]);
      }
      case 3: return Value(ValueList{value(depth - 1), value(depth - 1)});
      default: return Value::map({{"0", value(depth - 1)}, {"1", value(depth - 1)}});
    }
  }

  ExprPtr expr(int depth) {
    const int choice = pick(0, depth > 0 ? 6 : 1);
    switch (choice) {
      case 0: return Expr::literal(value(0));
      case 1: return Expr::ref(key());
      case 2: {
        static const BinaryOp ops[] = {BinaryOp::kEq, BinaryOp::kNe, BinaryOp::kLt,  BinaryOp::kGe,
                                       BinaryOp::kAnd, BinaryOp::kOr, BinaryOp::kAdd, BinaryOp::kSub,
                                       BinaryOp::kMul, BinaryOp::kDiv, BinaryOp::kMod};
        return Expr::binary(ops[pick(0, 10)], expr(depth - 1), expr(depth - 1));
      }
      case 3: {
        ExprPtr operand = expr(depth - 1);
        // The parser folds `-<integer>` into a literal, so negation of an
        // integer literal is not a shape it can produce.
        const auto* lit = std::get_if<Expr::Literal>(&operand->node());
        if (pick(0, 1) || (lit && lit->value.is_integer())) return Expr::unary(UnaryOp::kNot, operand);
        return Expr::unary(UnaryOp::kNegate, operand);
      }
      case 4: return Expr::list({expr(depth - 1), expr(depth - 1)});
      case 5: return Expr::list({});
      default: return Expr::call(pick(0, 1) ? "tuple" : "f", {expr(depth - 1)});
    }
  }

  Rule rule(int depth) {
    if (pick(0, 3) == 0) {
      DefaultRule d;
      d.target = key();
      if (pick(0, 1)) d.condition = expr(2);
      d.value = expr(2);
      return Rule{d};
    }
    IterationRule r;
    r.target = key();
    for (int i = 0, n = pick(0, 2); i < n; ++i) {
      auto k = key();
      if (k != r.target) r.when.insert(k);
    }
    if (pick(0, 1)) r.condition = expr(2);
    r.values = pick(0, 1) ? Expr::list({expr(1), expr(1)}) : Expr::call("range", {expr(0), expr(0)});
    r.shuffled = pick(0, 1) == 1;
    if (depth > 0 && pick(0, 3) == 0) r.injected.push_back(rule(depth - 1));
    return Rule{r};
  }

  std::mt19937_64 rng_;
};

TEST(DslTest, RenderedDocumentsReparse) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto doc = DocGenerator(seed).document();
    const std::string text = render_dsl(doc);
    StrategyDocument back;
    ASSERT_NO_THROW(back = parse_dsl(text)) << text;
    EXPECT_TRUE(same_document(doc, back)) << "seed " << seed << "\n" << text << "---\n" << render_dsl(back);
  }
}

TEST(DslTest, ShippedStrategyRoundTrips) {
  auto doc = load_strategy(kBundle + "phonecall.rules");
  EXPECT_TRUE(same_document(doc, parse_dsl(render_dsl(doc))));
  EXPECT_TRUE(same_document(doc, [] {
    StrategyDocument d;
    d.rules = testing::phone_rules().rules;
    return d;
  }()));
}

TEST(MindMapTest, ShippedMapMatchesTheRules) {
  auto mm = load_strategy(kBundle + "phonecall.mm");
  auto dsl = load_strategy(kBundle + "phonecall.rules");
  EXPECT_TRUE(mm.diagnostics.empty());
  EXPECT_TRUE(same_document(mm, dsl)) << render_dsl(mm);
  EXPECT_EQ(testing::trace(rule_set(mm)), testing::trace(rule_set(dsl)));
  EXPECT_EQ(mm.rules[0].location().node_id, "ID_valid");
}

TEST(MindMapTest, RootOnlyIsEmpty) {
  auto doc = parse_mindmap(R"(<map><node TEXT="root"/></map>)");
  EXPECT_TRUE(doc.empty());
  EXPECT_FALSE(has_errors(doc.diagnostics));
}

TEST(MindMapTest, CountryTariffGoal) {
  auto doc = parse_mindmap(R"(<map><node TEXT="r">
    <node TEXT="goals">
      <node TEXT="country x tariff">
        <node TEXT="$country"><node TEXT="National"/><node TEXT="Greenland"/><node TEXT="Redland"/></node>
        <node TEXT="$tariff"><node TEXT="standard"/><node TEXT="cheap"/></node>
      </node>
      <node TEXT="any price"><node TEXT="$expectedResult"/></node>
      <node TEXT="statements"><attribute NAME="coverage" VALUE="statements"/></node>
    </node></node></map>)");
  ASSERT_EQ(doc.goals.size(), 2u);
  const Goal& g = doc.goals[0];
  EXPECT_EQ(g.kind, GoalKind::kFinite);
  ASSERT_EQ(g.checklist.size(), 6u);
  EXPECT_EQ(g.checklist[0], Value::map({{"0", "National"}, {"1", "standard"}}));
  EXPECT_EQ(g.checklist[1], Value::map({{"0", "National"}, {"1", "cheap"}}));
  EXPECT_EQ(g.checklist[5], Value::map({{"0", "Redland"}, {"1", "cheap"}}));
  EXPECT_EQ(render(*g.function), "tuple($country, $tariff)");
  EXPECT_EQ(doc.goals[1].kind, GoalKind::kInfinite);
  ASSERT_EQ(doc.coverage.size(), 1u);
}

TEST(MindMapTest, PropertyUnderPropertyAndOverrides) {
  auto doc = parse_mindmap(R"(<map><node TEXT="r">
    <node TEXT="$a"><icon BUILTIN="shuffled"/>
      <node TEXT="1"/><node TEXT="=2 + 3"/><node TEXT="&quot;7&quot;"/>
      <node TEXT="$b"><node TEXT="x"/></node>
      <node TEXT="$c">
        <node TEXT="WHEN: $a, $b"/>
        <node TEXT="IF: $a &gt; 1"/>
        <node TEXT="TRUE"/>
      </node>
    </node></node></map>)");
  ASSERT_EQ(doc.rules.size(), 3u);
  const auto& a = doc.rules[0].iteration();
  EXPECT_TRUE(a.shuffled);
  EXPECT_EQ(render(*a.values), "[1, 2 + 3, \"7\"]");
  const auto& b = doc.rules[1].iteration();
  EXPECT_EQ(b.when, std::set<PropertyKey>{PropertyKey("a")});
  EXPECT_EQ(b.condition, nullptr);
  const auto& c = doc.rules[2].iteration();
  EXPECT_EQ(c.when.size(), 2u);
  EXPECT_EQ(render(*c.condition), "$a > 1");
}

TEST(MindMapTest, NamePartMarker) {
  auto doc = parse_mindmap(R"(<map><node TEXT="r"><node TEXT="$a">
    <attribute NAME="name_part" VALUE="true"/><node TEXT="1"/></node></node></map>)");
  EXPECT_EQ(doc.name_parts, std::vector<PropertyKey>{PropertyKey("a")});
}

TEST(MindMapTest, MalformedMaps) {
  EXPECT_THROW(parse_mindmap(R"(<map><node TEXT="r"><node TEXT="stray"/></node></map>)"), MalformedMapError);
  EXPECT_THROW(parse_mindmap(R"(<map><node TEXT="r"><node TEXT="$a"><node TEXT="1"><node TEXT="2"/></node>
    </node></node></map>)"),
               MalformedMapError);
  EXPECT_THROW(parse_mindmap(R"(<notmap/>)"), MalformedMapError);
  EXPECT_THROW(parse_mindmap(R"(<map><node TEXT="r">)"), MalformedMapError);
  EXPECT_THROW(parse_mindmap(R"(<map/>)"), MalformedMapError);
  try {
    parse_mindmap("<map>\n<node TEXT=\"r\">\n<node TEXT=\"oops\" ID=\"ID_9\"/></node></map>", "x.mm");
    FAIL();
  } catch (const MalformedMapError& e) {
    EXPECT_EQ(e.location().node_id, "ID_9");
    EXPECT_EQ(e.location().line, 3);
    EXPECT_EQ(e.location().file, "x.mm");
  }
}

TEST(MindMapTest, ReservedCharacterIsDiagnosed) {
  auto doc = parse_mindmap(R"(<map><node TEXT="r"><node TEXT="$a:b"><node TEXT="1"/></node></node></map>)");
  ASSERT_EQ(doc.diagnostics.size(), 2u);
  EXPECT_EQ(doc.diagnostics[0].kind, DiagnosticKind::kReservedCharacter);
  EXPECT_TRUE(has_errors(doc.diagnostics));
}

TEST(MindMapTest, RichContentIsIgnoredWithWarning) {
  auto doc = parse_mindmap(R"(<map><node TEXT="r"><node TEXT="$a"><richcontent TYPE="NOTE"><html/></richcontent>
    <font SIZE="12"/><node TEXT="1"/></node></node></map>)");
  ASSERT_EQ(doc.rules.size(), 1u);
  ASSERT_EQ(doc.diagnostics.size(), 1u);
  EXPECT_EQ(doc.diagnostics[0].kind, DiagnosticKind::kIgnoredContent);
}

TEST(LoadTest, UnknownExtensionAndMissingFile) {
  EXPECT_THROW(load_strategy(kBundle + "manifest.json"), Error);
  EXPECT_THROW(load_strategy("/nonexistent/x.rules"), Error);
}

}  // namespace
}  // namespace rulegen
