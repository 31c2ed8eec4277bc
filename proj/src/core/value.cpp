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

#include "rulegen/value.hpp"

#include <algorithm>

#include "rulegen/errors.hpp"

namespace rulegen {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

void render_into(const Value& v, std::string& out, bool quote_strings);

void render_list(const ValueList& items, std::string& out) {
  out += '[';
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    render_into(items[i], out, true);
  }
  out += ']';
}

void render_map(const ValueMap& entries, std::string& out, bool quote_keys) {
  out += '{';
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ", ";
    out += quote_keys ? quote_string(entries[i].first) : entries[i].first;
    out += ": ";
    render_into(entries[i].second, out, true);
  }
  out += '}';
}

void render_into(const Value& v, std::string& out, bool quote_strings) {
  switch (v.kind()) {
    case ValueKind::kBool:
      out += v.as_bool() ? "TRUE" : "FALSE";
      break;
    case ValueKind::kInteger:
      out += std::to_string(v.as_integer());
      break;
    case ValueKind::kString:
      out += quote_strings ? quote_string(v.as_string()) : v.as_string();
      break;
    case ValueKind::kList:
      render_list(v.as_list(), out);
      break;
    case ValueKind::kMap:
      render_map(v.as_map(), out, true);
      break;
  }
}

[[noreturn]] void mismatch(const char* expected, ValueKind actual) {
  throw EvalError(EvalErrorKind::kTypeMismatch, expected,
                  std::string("expected ") + expected + ", got " + to_string(actual));
}

}  // namespace

PropertyKey::PropertyKey(std::string name) : name_(std::move(name)) {
  if (!is_valid(name_)) throw Error("invalid property key '" + name_ + "'");
}

bool PropertyKey::is_valid(std::string_view name) {
  return !name.empty() && name.find_first_of("/:") == std::string_view::npos;
}

const char* to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::kBool: return "Bool";
    case ValueKind::kInteger: return "Integer";
    case ValueKind::kString: return "String";
    case ValueKind::kList: return "List";
    case ValueKind::kMap: return "Map";
  }
  return "?";
}

Value Value::map(ValueMap entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i - 1].first == entries[i].first) {
      throw Error("duplicate map key '" + entries[i].first + "'");
    }
  }
  return Value(MapTag{}, std::move(entries));
}

bool Value::as_bool() const {
  if (!is_bool()) mismatch("Bool", kind());
  return std::get<bool>(data_);
}

std::int64_t Value::as_integer() const {
  if (!is_integer()) mismatch("Integer", kind());
  return std::get<std::int64_t>(data_);
}

const std::string& Value::as_string() const {
  if (!is_string()) mismatch("String", kind());
  return std::get<std::string>(data_);
}

const ValueList& Value::as_list() const {
  if (!is_list()) mismatch("List", kind());
  return std::get<ValueList>(data_);
}

const ValueMap& Value::as_map() const {
  if (!is_map()) mismatch("Map", kind());
  return std::get<ValueMap>(data_);
}

std::string Value::render() const {
  std::string out;
  render_into(*this, out, false);
  return out;
}

std::string Value::literal() const {
  switch (kind()) {
    case ValueKind::kBool:
      return as_bool() ? "true" : "false";
    case ValueKind::kString:
      return quote_string(as_string());
    case ValueKind::kList: {
      std::string out = "[";
      const auto& items = as_list();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i].literal();
      }
      return out + "]";
    }
    case ValueKind::kMap: {
      // Positional maps are what tuple() builds; render them back as a call.
      const auto& entries = as_map();
      std::vector<const Value*> slots(entries.size(), nullptr);
      for (const auto& [k, v] : entries) {
        std::size_t idx = 0;
        bool numeric = !k.empty() && k.size() < 10 && (k == "0" || k[0] != '0');
        for (char c : k) numeric = numeric && c >= '0' && c <= '9';
        if (numeric) idx = std::stoul(k);
        if (!numeric || idx >= slots.size() || slots[idx]) {
          std::string out;
          render_map(entries, out, true);
          return out;
        }
        slots[idx] = &v;
      }
      std::string out = "tuple(";
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (i) out += ", ";
        out += slots[i]->literal();
      }
      return out + ")";
    }
    default: {
      std::string out;
      render_into(*this, out, true);
      return out;
    }
  }
}

std::size_t Value::hash() const {
  std::size_t h = data_.index();
  switch (kind()) {
    case ValueKind::kBool:
      return mix(h, as_bool() ? 1 : 0);
    case ValueKind::kInteger:
      return mix(h, std::hash<std::int64_t>{}(as_integer()));
    case ValueKind::kString:
      return mix(h, std::hash<std::string>{}(as_string()));
    case ValueKind::kList:
      for (const auto& item : as_list()) h = mix(h, item.hash());
      return h;
    case ValueKind::kMap:
      for (const auto& [k, v] : as_map()) h = mix(mix(h, std::hash<std::string>{}(k)), v.hash());
      return h;
  }
  return h;
}

bool total_less(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return a.data_.index() < b.data_.index();
  switch (a.kind()) {
    case ValueKind::kBool: return a.as_bool() < b.as_bool();
    case ValueKind::kInteger: return a.as_integer() < b.as_integer();
    case ValueKind::kString: return a.as_string() < b.as_string();
    case ValueKind::kList:
      return std::lexicographical_compare(a.as_list().begin(), a.as_list().end(),
                                          b.as_list().begin(), b.as_list().end(), total_less);
    case ValueKind::kMap:
      return std::lexicographical_compare(
          a.as_map().begin(), a.as_map().end(), b.as_map().begin(), b.as_map().end(),
          [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return total_less(x.second, y.second);
          });
  }
  return false;
}

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace rulegen
