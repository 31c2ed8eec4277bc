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

#include <set>

#include "rulegen/sutkit.hpp"

namespace rulegen {
namespace {

const std::set<std::string>& record_fields() {
  static const std::set<std::string> f = {"id", "name", "expected", "commands", "properties", "coverage"};
  return f;
}

const std::set<std::string>& section_fields(const std::string& section) {
  static const std::set<std::string> commands = {"function", "args", "index"};
  static const std::set<std::string> properties = {"key", "value"};
  return section == "commands" ? commands : properties;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string render_args(const ValueMap& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].first + "=" + args[i].second.literal();
  }
  return out;
}

std::string record_field(const TestCaseRecord& r, const std::string& field) {
  std::string out;
  if (field == "id") return std::to_string(r.id);
  if (field == "name") return r.name;
  if (field == "expected") return r.expected.render();
  if (field == "commands") {
    for (std::size_t i = 0; i < r.commands.size(); ++i) out += (i ? "; " : "") + r.commands[i].render();
  } else if (field == "properties") {
    for (std::size_t i = 0; i < r.properties.size(); ++i) {
      out += (i ? ", " : "") + r.properties[i].key.name() + "=" + r.properties[i].value.render();
    }
  } else if (field == "coverage") {
    bool first = true;
    for (const auto& s : r.coverage.statements) {
      out += (first ? "" : ", ") + s;
      first = false;
    }
  }
  return out;
}

}  // namespace

ScriptTemplate::ScriptTemplate(std::string text) : text_(std::move(text)) {
  std::size_t pos = 0;
  parts_ = parse(text_, pos, "");
}

std::vector<ScriptTemplate::Part> ScriptTemplate::parse(std::string_view text, std::size_t& pos,
                                                        const std::string& section) {
  std::vector<Part> parts;
  while (pos < text.size()) {
    auto open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      parts.push_back({Part::Kind::kText, std::string(text.substr(pos)), {}});
      pos = text.size();
      break;
    }
    if (open > pos) parts.push_back({Part::Kind::kText, std::string(text.substr(pos, open - pos)), {}});
    auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) throw TemplateError(trim(text.substr(open + 2)));
    std::string name = trim(text.substr(open + 2, close - open - 2));
    pos = close + 2;

    if (!name.empty() && name[0] == '/') {
      if (name.substr(1) != section) throw TemplateError(name);
      return parts;
    }
    if (!name.empty() && name[0] == '#') {
      std::string inner = name.substr(1);
      if (!section.empty() || (inner != "commands" && inner != "properties")) throw TemplateError(name);
      Part p{Part::Kind::kSection, inner, parse(text, pos, inner)};
      parts.push_back(std::move(p));
      continue;
    }
    bool known = record_fields().count(name) || (!section.empty() && section_fields(section).count(name));
    if (!known) throw TemplateError(name);
    parts.push_back({Part::Kind::kField, name, {}});
  }
  if (!section.empty()) throw TemplateError("#" + section);
  return parts;
}

void ScriptTemplate::render_parts(const std::vector<Part>& parts, const TestCaseRecord& record,
                                  const std::map<std::string, std::string>* item, std::string& out) {
  for (const auto& p : parts) {
    switch (p.kind) {
      case Part::Kind::kText:
        out += p.text;
        break;
      case Part::Kind::kField:
        if (item) {
          auto it = item->find(p.text);
          if (it != item->end()) {
            out += it->second;
            break;
          }
        }
        out += record_field(record, p.text);
        break;
      case Part::Kind::kSection:
        if (p.text == "commands") {
          for (std::size_t i = 0; i < record.commands.size(); ++i) {
            const auto& c = record.commands[i];
            std::map<std::string, std::string> fields = {
                {"function", c.function}, {"args", render_args(c.args)}, {"index", std::to_string(i + 1)}};
            render_parts(p.body, record, &fields, out);
          }
        } else {
          for (const auto& b : record.properties) {
            std::map<std::string, std::string> fields = {{"key", b.key.name()}, {"value", b.value.render()}};
            render_parts(p.body, record, &fields, out);
          }
        }
        break;
    }
  }
}

std::string ScriptTemplate::render(const TestCaseRecord& record) const {
  std::string out;
  render_parts(parts_, record, nullptr, out);
  return out;
}

std::string render_script(const TestCaseRecord& record, const ScriptTemplate& tmpl) { return tmpl.render(record); }

}  // namespace rulegen
