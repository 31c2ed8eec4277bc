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

#include "rulegen/combination.hpp"

#include "rulegen/errors.hpp"

namespace rulegen {

const Binding* find_binding(const Bindings& bindings, const PropertyKey& key) {
  for (const auto& b : bindings) {
    if (b.key == key) return &b;
  }
  return nullptr;
}

Combination::Combination(std::uint64_t id, Bindings bindings)
    : id_(id), bindings_(std::move(bindings)) {}

const Value* Combination::find(const PropertyKey& key) const {
  const Binding* b = find_binding(bindings_, key);
  return b ? &b->value : nullptr;
}

void Combination::bind(PropertyKey key, Value value, BindingOrigin origin) {
  if (find_binding(bindings_, key)) {
    throw Error("combination " + std::to_string(id_) + " already binds " + key.display());
  }
  bindings_.push_back({std::move(key), std::move(value), origin});
}

void Combination::attach(PropertyKey key, Value value) {
  for (auto& b : bindings_) {
    if (b.key != key) continue;
    if (b.origin != BindingOrigin::kSynthesized) {
      throw Error("combination " + std::to_string(id_) + " already binds " + key.display());
    }
    b.value = std::move(value);
    return;
  }
  bindings_.push_back({std::move(key), std::move(value), BindingOrigin::kSynthesized});
}

std::string Combination::trace_line() const {
  std::string out = std::to_string(id_) + ":";
  bool first = true;
  for (const auto& b : bindings_) {
    if (b.origin == BindingOrigin::kSynthesized) continue;
    if (!first) out += '/';
    first = false;
    out += b.key.display();
    out += ':';
    out += b.value.render();
  }
  return out;
}

}  // namespace rulegen
