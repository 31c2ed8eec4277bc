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

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <deque>
#include <optional>
#include <set>

#include "rulegen/frontend.hpp"

namespace rulegen {

namespace {

struct TreeBuilder {
  std::string file;
  XML_Parser parser = nullptr;
  MindMapNode root;               // synthetic holder for the <map> children
  std::vector<MindMapNode*> open;  // nodes, innermost last
  int depth = 0;
  int skip_depth = 0;  // > 0 while inside an ignored element
  std::string error;
  int error_line = 0;

  int line() const { return static_cast<int>(XML_GetCurrentLineNumber(parser)); }

  void fail(const std::string& msg) {
    if (error.empty()) {
      error = msg;
      error_line = line();
    }
    XML_StopParser(parser, XML_FALSE);
  }

  static std::map<std::string, std::string> attrs(const XML_Char** a) {
    std::map<std::string, std::string> out;
    for (int i = 0; a[i]; i += 2) out[a[i]] = a[i + 1];
    return out;
  }

  void start(const std::string& name, const XML_Char** a) {
    ++depth;
    if (skip_depth) return;
    if (depth == 1) {
      if (name != "map") fail("root element must be <map>, found <" + name + ">");
      return;
    }
    auto at = attrs(a);
    if (name == "node") {
      MindMapNode* parent = open.empty() ? &root : open.back();
      if (open.empty() && !root.children.empty()) {
        fail("a map has exactly one root node");
        return;
      }
      MindMapNode node;
      node.location = SourceLocation{file, line(), 0, at.count("ID") ? at["ID"] : ""};
      if (at.count("TEXT")) node.text = at["TEXT"];
      for (auto& [k, v] : at) {
        if (k != "TEXT" && k != "ID") node.attributes[k] = v;
      }
      parent->children.push_back(std::move(node));
      open.push_back(&parent->children.back());
      return;
    }
    if (open.empty()) {
      // Map-level elements (attribute registry, properties) carry no rules.
      skip_depth = depth;
      return;
    }
    if (name == "attribute") {
      if (at.count("NAME")) open.back()->attributes[at["NAME"]] = at.count("VALUE") ? at["VALUE"] : "";
    } else if (name == "icon") {
      if (at.count("BUILTIN")) open.back()->icons.push_back(at["BUILTIN"]);
    } else if (name == "richcontent") {
      open.back()->attributes["richcontent"] = at.count("TYPE") ? at["TYPE"] : "NODE";
      skip_depth = depth;
    } else {
      skip_depth = depth;  // fonts, edges, hooks, ...
    }
  }

  void end(const std::string& name) {
    if (skip_depth == depth) skip_depth = 0;
    if (!skip_depth && name == "node" && !open.empty()) open.pop_back();
    --depth;
  }
};

extern "C" {
static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  static_cast<TreeBuilder*>(data)->start(name, attrs);
}
static void on_end(void* data, const XML_Char* name) { static_cast<TreeBuilder*>(data)->end(name); }
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool starts_with_ci(const std::string& s, const char* prefix) {
  std::size_t n = std::char_traits<char>::length(prefix);
  if (s.size() < n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::toupper(static_cast<unsigned char>(s[i])) != std::toupper(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

bool truthy(const std::string& v) {
  std::string t = trim(v);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  return t.empty() || t == "true" || t == "yes" || t == "1";
}

bool is_property(const MindMapNode& n) { return !n.text.empty() && trim(n.text)[0] == '$'; }
bool is_override(const MindMapNode& n) {
  const std::string t = trim(n.text);
  return starts_with_ci(t, "WHEN:") || starts_with_ci(t, "IF:");
}
bool is_goals(const MindMapNode& n) {
  std::string t = trim(n.text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  return t == "goals";
}
bool has_marker(const MindMapNode& n, const char* marker) {
  if (auto it = n.attributes.find(marker); it != n.attributes.end() && truthy(it->second)) return true;
  return std::find(n.icons.begin(), n.icons.end(), marker) != n.icons.end();
}

// TRUE/FALSE, integers, `=expr`, `"quoted"` or a plain string.
ExprPtr value_expr(const MindMapNode& n) {
  const std::string t = trim(n.text);
  if (t == "TRUE" || t == "true") return Expr::literal(Value(true));
  if (t == "FALSE" || t == "false") return Expr::literal(Value(false));
  if (!t.empty() && t[0] == '=') return parse_expression(t.substr(1), n.location);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return parse_expression(t, n.location);
  bool numeric = !t.empty() && t.size() < 20;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool digit = std::isdigit(static_cast<unsigned char>(t[i]));
    numeric = numeric && (digit || (i == 0 && t[i] == '-' && t.size() > 1));
  }
  if (numeric) return Expr::literal(Value(static_cast<std::int64_t>(std::stoll(t))));
  // Node text is kept verbatim (untrimmed) so an empty or spaced value
  // survives.
  return Expr::literal(Value(n.text));
}

struct Context {
  std::set<PropertyKey> when;
  ExprPtr condition;
};

struct Pending {
  const MindMapNode* node;
  Context context;
};

class Converter {
 public:
  explicit Converter(StrategyDocument& doc) : doc_(doc) {}

  void convert(const MindMapNode& root) {
    // Rules are numbered level by level, siblings in document order, which
    // keeps the numbering of a map with properties under values aligned
    // with the usual textual order of the same rules.
    std::deque<Pending> queue;
    for (const auto& child : root.children) {
      if (is_goals(child)) {
        goals(child);
      } else if (is_property(child)) {
        queue.push_back({&child, {}});
      } else if (!is_override(child)) {
        throw MalformedMapError(child.location, "node '" + child.text +
                                                    "' under the root is neither a $property nor 'goals'");
      }
    }
    while (!queue.empty()) {
      Pending p = std::move(queue.front());
      queue.pop_front();
      property(*p.node, p.context, queue);
    }
  }

 private:
  std::optional<PropertyKey> key_of(const MindMapNode& n) {
    std::string name = trim(n.text).substr(1);
    if (!PropertyKey::is_valid(name)) {
      doc_.diagnostics.push_back({DiagnosticKind::kReservedCharacter, Severity::kError,
                                  "property key '" + name + "' is empty or contains '/' or ':'", n.location});
      return std::nullopt;
    }
    return PropertyKey(name);
  }

  void note_ignored(const MindMapNode& n) {
    if (n.attributes.count("richcontent")) {
      doc_.diagnostics.push_back({DiagnosticKind::kIgnoredContent, Severity::kWarning,
                                  "rich-text node body ignored; only the TEXT attribute is read", n.location});
    }
  }

  void property(const MindMapNode& n, Context ctx, std::deque<Pending>& queue) {
    note_ignored(n);
    auto key = key_of(n);
    if (!key) return;

    std::vector<const MindMapNode*> values;
    for (const auto& c : n.children) {
      const std::string t = trim(c.text);
      if (starts_with_ci(t, "WHEN:")) {
        ctx.when.clear();
        std::string list = t.substr(5);
        std::size_t pos = 0;
        while (pos <= list.size()) {
          std::size_t comma = list.find(',', pos);
          std::string item = trim(list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
          if (!item.empty() && item[0] == '$') item.erase(0, 1);
          if (!item.empty()) {
            if (!PropertyKey::is_valid(item)) {
              throw MalformedMapError(c.location, "invalid property key '" + item + "' in WHEN");
            }
            ctx.when.insert(PropertyKey(item));
          }
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
      } else if (starts_with_ci(t, "IF:")) {
        const std::string body = trim(t.substr(3));
        ctx.condition = body.empty() ? nullptr : parse_expression(body, c.location);
      } else if (!is_property(c)) {
        values.push_back(&c);
      }
    }

    if (has_marker(n, "name_part") &&
        std::find(doc_.name_parts.begin(), doc_.name_parts.end(), *key) == doc_.name_parts.end()) {
      doc_.name_parts.push_back(*key);
    }

    if (has_marker(n, "default")) {
      if (values.size() != 1) {
        throw MalformedMapError(n.location, "default property " + key->display() + " needs exactly one value");
      }
      if (!values[0]->children.empty()) {
        throw MalformedMapError(values[0]->location, "the value of a default rule cannot have children");
      }
      DefaultRule r;
      r.target = *key;
      r.condition = ctx.condition;
      r.value = value_expr(*values[0]);
      r.location = n.location;
      r.definition_index = next_index_++;
      doc_.rules.push_back(Rule{std::move(r)});
      return;
    }

    if (ctx.when.count(*key)) {
      throw MalformedMapError(n.location, "property " + key->display() + " is nested under itself");
    }
    IterationRule r;
    r.target = *key;
    r.when = ctx.when;
    r.condition = ctx.condition;
    r.shuffled = has_marker(n, "shuffled");
    r.location = n.location;
    r.definition_index = next_index_++;
    std::vector<ExprPtr> items;
    for (const MindMapNode* v : values) {
      note_ignored(*v);
      ExprPtr value = value_expr(*v);
      items.push_back(value);
      for (const auto& vc : v->children) {
        if (is_override(vc)) {
          throw MalformedMapError(vc.location, "WHEN:/IF: overrides belong under a property node");
        }
        if (!is_property(vc)) {
          throw MalformedMapError(vc.location, "value '" + vc.text + "' under value '" + v->text +
                                                   "' has no property; prefix property nodes with '$'");
        }
        Context nested{{*key}, Expr::binary(BinaryOp::kEq, Expr::ref(*key), value)};
        queue.push_back({&vc, std::move(nested)});
      }
    }
    r.values = Expr::list(std::move(items));
    doc_.rules.push_back(Rule{std::move(r)});

    // A property directly under a property fires for any of its values.
    for (const auto& c : n.children) {
      if (is_property(c)) queue.push_back({&c, Context{{*key}, nullptr}});
    }
  }

  void goals(const MindMapNode& g) {
    for (const auto& goal : g.children) {
      note_ignored(goal);
      const std::string name = trim(goal.text);
      if (name.empty()) throw MalformedMapError(goal.location, "goal node without a name");
      for (const auto& existing : doc_.goals) {
        if (existing.name == name) throw MalformedMapError(goal.location, "duplicate goal name '" + name + "'");
      }
      if (auto it = goal.attributes.find("coverage"); it != goal.attributes.end()) {
        static const std::pair<const char*, CoverageKind> kinds[] = {
            {"statements", CoverageKind::kStatements},
            {"mcdc", CoverageKind::kMcdc},
            {"boundaries", CoverageKind::kBoundaries},
            {"paths", CoverageKind::kPaths},
        };
        bool found = false;
        for (const auto& [word, kind] : kinds) {
          if (trim(it->second) == word) {
            doc_.coverage.push_back({name, kind, goal.location});
            found = true;
          }
        }
        if (!found) throw MalformedMapError(goal.location, "unknown coverage kind '" + it->second + "'");
        continue;
      }

      std::vector<PropertyKey> keys;
      std::vector<std::vector<Value>> axes;
      bool all_have_values = true;
      for (const auto& p : goal.children) {
        if (!is_property(p)) {
          throw MalformedMapError(p.location, "goal '" + name + "' lists '" + p.text + "', expected a $property");
        }
        auto key = key_of(p);
        if (!key) return;
        keys.push_back(*key);
        std::vector<Value> axis;
        for (const auto& v : p.children) {
          axis.push_back(evaluate_expression(*value_expr(v), {}, {}, FunctionTable::with_builtins()));
        }
        if (axis.empty()) all_have_values = false;
        axes.push_back(std::move(axis));
      }
      if (keys.empty()) throw MalformedMapError(goal.location, "goal '" + name + "' lists no properties");

      ExprPtr fn;
      if (keys.size() == 1) {
        fn = Expr::ref(keys[0]);
      } else {
        std::vector<ExprPtr> args;
        for (const auto& k : keys) args.push_back(Expr::ref(k));
        fn = Expr::call("tuple", std::move(args));
      }
      Goal out;
      if (all_have_values) {
        std::vector<Value> checklist;
        std::vector<std::size_t> idx(axes.size(), 0);
        while (true) {
          if (keys.size() == 1) {
            checklist.push_back(axes[0][idx[0]]);
          } else {
            ValueMap m;
            for (std::size_t i = 0; i < axes.size(); ++i) m.emplace_back(std::to_string(i), axes[i][idx[i]]);
            checklist.push_back(Value::map(std::move(m)));
          }
          // Odometer over the axes, last property fastest.
          bool wrapped = true;
          for (std::size_t i = axes.size(); i-- > 0;) {
            if (++idx[i] < axes[i].size()) {
              wrapped = false;
              break;
            }
            idx[i] = 0;
          }
          if (wrapped) break;
        }
        out = Goal::finite(name, std::move(checklist), fn);
      } else {
        out = Goal::infinite(name, fn);
      }
      out.location = goal.location;
      doc_.goals.push_back(std::move(out));
    }
  }

  StrategyDocument& doc_;
  int next_index_ = 0;
};

}  // namespace

MindMapNode parse_mindmap_tree(std::string_view xml, const std::string& file) {
  TreeBuilder b;
  b.file = file;
  XML_Parser p = XML_ParserCreate("UTF-8");
  if (!p) throw Error("cannot allocate XML parser");
  b.parser = p;
  XML_SetUserData(p, &b);
  XML_SetElementHandler(p, on_start, on_end);
  const auto status = XML_Parse(p, xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  if (status == XML_STATUS_ERROR && b.error.empty()) {
    b.error = XML_ErrorString(XML_GetErrorCode(p));
    b.error_line = static_cast<int>(XML_GetCurrentLineNumber(p));
  }
  XML_ParserFree(p);
  if (!b.error.empty()) throw MalformedMapError(SourceLocation{file, b.error_line, 0, ""}, b.error);
  if (b.root.children.empty()) throw MalformedMapError(SourceLocation{file, 1, 0, ""}, "map has no root node");
  return std::move(b.root.children.front());
}

StrategyDocument parse_mindmap(std::string_view xml, const std::string& file) {
  MindMapNode root = parse_mindmap_tree(xml, file);
  StrategyDocument doc;
  doc.source = file;
  Converter(doc).convert(root);
  if (doc.empty()) {
    doc.diagnostics.push_back(
        {DiagnosticKind::kEmptyRuleSet, Severity::kWarning, "mind map contains no rules", root.location});
  }
  return doc;
}

}  // namespace rulegen
