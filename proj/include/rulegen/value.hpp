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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rulegen {

// Name of a test-case property, stored without the display prefix "$".
// "/" and ":" are reserved by the trace format.
class PropertyKey {
 public:
  // Throws rulegen::Error if `name` is empty or contains a reserved character.
  explicit PropertyKey(std::string name);
  // Empty placeholder, to be assigned before use.
  PropertyKey() = default;

  const std::string& name() const { return name_; }
  std::string display() const { return "$" + name_; }

  static bool is_valid(std::string_view name);

  friend bool operator==(const PropertyKey&, const PropertyKey&) = default;
  friend auto operator<=>(const PropertyKey&, const PropertyKey&) = default;

 private:
  std::string name_;
};

class Value;

using ValueList = std::vector<Value>;
// Sorted by key, keys unique.
using ValueMap = std::vector<std::pair<std::string, Value>>;

enum class ValueKind { kBool, kInteger, kString, kList, kMap };

const char* to_string(ValueKind kind);

// Hierarchical property value. Equality is structural; comparison across
// kinds in expressions is a type error (see expression.hpp), but
// `total_less` gives a deterministic order for containers.
class Value {
 public:
  Value() : data_(false) {}
  Value(bool b) : data_(b) {}  // NOLINT(google-explicit-constructor)
  Value(std::int64_t i) : data_(i) {}  // NOLINT
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}  // NOLINT
  Value(std::string s) : data_(std::move(s)) {}  // NOLINT
  Value(const char* s) : data_(std::string(s)) {}  // NOLINT
  Value(ValueList list) : data_(std::move(list)) {}  // NOLINT

  static Value list(std::initializer_list<Value> items) { return Value(ValueList(items)); }
  // Sorts entries by key. Throws rulegen::Error on duplicate keys.
  static Value map(ValueMap entries);

  ValueKind kind() const { return static_cast<ValueKind>(data_.index()); }
  bool is_bool() const { return kind() == ValueKind::kBool; }
  bool is_integer() const { return kind() == ValueKind::kInteger; }
  bool is_string() const { return kind() == ValueKind::kString; }
  bool is_list() const { return kind() == ValueKind::kList; }
  bool is_map() const { return kind() == ValueKind::kMap; }

  // Accessors throw EvalError(kTypeMismatch) on the wrong kind.
  bool as_bool() const;
  std::int64_t as_integer() const;
  const std::string& as_string() const;
  const ValueList& as_list() const;
  const ValueMap& as_map() const;

  // Trace form: TRUE/FALSE, base-10 integers, strings verbatim, containers
  // with quoted string elements.
  std::string render() const;
  // Source-literal form used by the DSL renderer and script writers:
  // strings are always quoted and escaped.
  std::string literal() const;

  std::size_t hash() const;

  friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }
  friend bool total_less(const Value& a, const Value& b);

 private:
  struct MapTag {};
  Value(MapTag, ValueMap entries) : data_(std::move(entries)) {}

  std::variant<bool, std::int64_t, std::string, ValueList, ValueMap> data_;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return total_less(a, b); }
};

// Quotes and escapes a string the way the DSL lexer reads it back.
std::string quote_string(std::string_view s);

}  // namespace rulegen

template <>
struct std::hash<rulegen::PropertyKey> {
  std::size_t operator()(const rulegen::PropertyKey& k) const noexcept {
    return std::hash<std::string>{}(k.name());
  }
};
