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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rulegen/engine.hpp"
#include "rulegen/goals.hpp"

namespace rulegen {

// Coverage goals are generated from the model of a bundle; a strategy only
// asks for them by kind.
enum class CoverageKind { kStatements, kMcdc, kBoundaries, kPaths };

const char* to_string(CoverageKind kind);

struct CoverageRequest {
  std::string name;
  CoverageKind kind;
  SourceLocation location;

  friend bool operator==(const CoverageRequest& a, const CoverageRequest& b) {
    return a.name == b.name && a.kind == b.kind;
  }
};

struct StrategyDocument {
  std::vector<Rule> rules;  // definition order
  std::vector<Goal> goals;
  std::vector<CoverageRequest> coverage;
  std::vector<PropertyKey> name_parts;  // classifier properties for test names
  std::vector<Diagnostic> diagnostics;
  std::string source;  // file name, if any

  bool empty() const { return rules.empty() && goals.empty() && coverage.empty() && name_parts.empty(); }
};

// Structural equality of rules, goals, coverage requests and name parts;
// locations and definition indices are ignored.
bool same_document(const StrategyDocument& a, const StrategyDocument& b);

// Line-oriented rule language:
//
//   iterate <target> [when k1, k2] [if <expr>] values <expr-list> [shuffled]
//       [inject { ... }]
//   default <target> [if <expr>] value <expr>
//   goal <name> finite checklist <expr-list> function <expr>
//   goal <name> infinite function <expr>
//   goal <name> coverage statements|mcdc|boundaries|paths
//   name_part k1, k2
//
// `#` starts a comment. Line breaks inside brackets and parentheses are
// ignored. Throws ParseError.
StrategyDocument parse_dsl(std::string_view text, const std::string& file = "");

// Parses a single expression, e.g. from a mind-map node.
ExprPtr parse_expression(std::string_view text, const SourceLocation& where = {});

// Text that parse_dsl turns back into a document equal under same_document.
std::string render_dsl(const StrategyDocument& doc);

struct MindMapNode {
  std::string text;
  std::map<std::string, std::string> attributes;  // node attributes plus <attribute NAME VALUE>
  std::vector<std::string> icons;
  std::vector<MindMapNode> children;
  SourceLocation location;  // file, line, node ID
};

// The `<map>` root's single node. Throws MalformedMapError.
MindMapNode parse_mindmap_tree(std::string_view xml, const std::string& file = "");

// Freeplane strategy maps. A node whose text starts with `$` declares a
// property; its children are values. A property node under a value node V of
// property P becomes a rule with WHEN {P} and IF $P == V; directly under a
// property node it only gets WHEN {P}. Children starting with `WHEN:` or
// `IF:` override the structural parts. A `goals` node holds goal nodes whose
// property children span the check list. Throws MalformedMapError.
StrategyDocument parse_mindmap(std::string_view xml, const std::string& file = "");

// Dispatches on the extension: `.rules` or `.mm`. Throws rulegen::Error if
// the file cannot be read.
StrategyDocument load_strategy(const std::filesystem::path& path);

}  // namespace rulegen
