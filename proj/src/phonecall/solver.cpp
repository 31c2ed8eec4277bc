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

#include "rulegen/phonecall.hpp"

namespace rulegen::phonecall {
namespace {

const PropertyKey kTariff{"tariff"};

bool cheap_tariff(CombinationContext& c) {
  try {
    Value v = c.resolve(kTariff);
    return v.is_string() && v.as_string() == "cheap";
  } catch (const EvalError& e) {
    if (e.kind() != EvalErrorKind::kUnresolvableProperty) throw;
    return false;
  }
}

Command cheap_option(bool on) { return {kSetCheapCallOptionActive, {{"isActive", Value(on)}}}; }

}  // namespace

std::vector<Command> PhoneSolver::preconditions(CombinationContext& c) const {
  if (!cheap_tariff(c)) return {};
  return {cheap_option(true)};
}

std::vector<Command> PhoneSolver::verifications(CombinationContext&, const Value& expected) const {
  return {{kVerifyPrice, {{"expected", expected}}}};
}

std::vector<Command> PhoneSolver::postprocessing(CombinationContext& c) const {
  if (!cheap_tariff(c)) return {};
  return {cheap_option(false)};
}

std::set<PropertyKey> PhoneSolver::reads() const { return {kTariff}; }

FunctionTablePtr functions() {
  auto table = std::make_shared<FunctionTable>(FunctionTable::with_builtins());
  table->add(
      "destinationOf",
      [](std::span<const Value> args) { return Value(to_string(destination_of(args[0].as_string()))); }, 1);
  table->add(
      "isValidPhoneNumber", [](std::span<const Value> args) { return Value(is_valid_phone_number(args[0].as_string())); },
      1);
  return table;
}

AssemblySpec assembly_spec() {
  AssemblySpec spec;
  spec.focus.function = kCalculateCallPrice;
  spec.focus.params = {"country", "phoneNumber", "day", "callBeginTime", "callDuration"};
  spec.interface = {kCalculateCallPrice, kSetCheapCallOptionActive, kVerifyPrice};
  return spec;
}

}  // namespace rulegen::phonecall
