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
#include <string>
#include <vector>

#include "rulegen/value.hpp"

namespace rulegen {

enum class BindingOrigin {
  kIteration,    // assigned by an iteration rule
  kDefault,      // computed by a default rule when requested
  kSynthesized,  // attached after emission (model results, coverage)
};

struct Binding {
  PropertyKey key;
  Value value;
  BindingOrigin origin = BindingOrigin::kIteration;

  friend bool operator==(const Binding&, const Binding&) = default;
};

using Bindings = std::vector<Binding>;

const Binding* find_binding(const Bindings& bindings, const PropertyKey& key);

// One complete assignment produced by the rule engine. Bindings keep
// assignment order; each key appears at most once.
class Combination {
 public:
  Combination(std::uint64_t id, Bindings bindings);

  std::uint64_t id() const { return id_; }
  const Bindings& bindings() const { return bindings_; }

  const Value* find(const PropertyKey& key) const;
  // Throws rulegen::Error if `key` is already bound.
  void bind(PropertyKey key, Value value, BindingOrigin origin);
  // Synthesized binding; replaces an earlier synthesized value of `key`.
  void attach(PropertyKey key, Value value);

  // `<id>:$k1:v1/$k2:v2...` over the bindings whose origin is iteration or
  // default. Synthesized bindings never appear in the trace.
  std::string trace_line() const;

 private:
  std::uint64_t id_;
  Bindings bindings_;
};

}  // namespace rulegen
