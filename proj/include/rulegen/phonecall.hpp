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

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rulegen/sutkit.hpp"

// Reference bundle: the call-price function of a phone company, with a
// coverage-instrumented model and a solver for the cheap-call option.
namespace rulegen::phonecall {

enum class Destination { kNational, kInternational1, kInternational2, kInvalid };

const char* to_string(Destination d);

// Case-sensitive: "" and "National" are national calls; Greenland, Blueland
// and Neverland are International_1; Yellowland and Redland International_2.
Destination destination_of(std::string_view country);

enum class Day { kMon, kTue, kWed, kThu, kFri, kSat, kSun };

const char* to_string(Day d);
// "Mon" .. "Sun"; throws DomainError otherwise.
Day parse_day(std::string_view text);

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kMaxCallDuration = 86400;
inline constexpr std::int64_t kNightStart = 72000;  // 20:00, inclusive
inline constexpr std::int64_t kNightEnd = 21600;    // 06:00, exclusive

struct CallInput {
  std::string country;
  std::string phone_number;
  Day day = Day::kMon;
  std::int64_t call_begin_time = 0;  // seconds since midnight
  std::int64_t call_duration = 1;    // seconds
};

struct PhoneState {
  bool cheap_call_active = false;

  friend bool operator==(const PhoneState&, const PhoneState&) = default;
};

struct PriceTableEntry {
  Destination destination;
  std::int64_t standard_cents;
  std::int64_t cheap_cents;
  std::int64_t night_weekend_cents;
  std::int64_t unit_seconds;
};

const std::array<PriceTableEntry, 3>& price_table();

// 3 to 15 ASCII digits.
bool is_valid_phone_number(std::string_view number);

struct PriceResult {
  std::int64_t cents = 0;
  CoverageRecord coverage;
};

// Price in cents, 0 for an invalid country or number. Throws DomainError
// for a duration outside [1, 86400] or a begin time outside [0, 86399].
PriceResult calculate_call_price(const CallInput& input, const PhoneState& state);

PhoneState set_cheap_call_option_active(bool is_active, PhoneState state);

std::vector<std::string> statement_ids();
std::vector<std::string> condition_ids();
std::vector<std::string> boundary_ids();

inline constexpr const char* kCalculateCallPrice = "calculateCallPrice";
inline constexpr const char* kSetCheapCallOptionActive = "setCheapCallOptionActive";
inline constexpr const char* kVerifyPrice = "verifyPrice";

// Model state key: "cheapCallActive". Call arguments: country, phoneNumber,
// day, callBeginTime, callDuration, or isActive.
class PhoneModel final : public ModelInterface {
 public:
  ModelState initial_state() const override;
  ModelResult call(const std::string& function, const ValueMap& args, const ModelState& state) const override;
  std::vector<std::string> statement_universe() const override { return statement_ids(); }
  std::vector<std::string> conditions() const override { return condition_ids(); }
  std::vector<std::string> boundaries() const override { return boundary_ids(); }
};

// Activates the cheap-call option before the focus call when $tariff is
// "cheap" and resets it afterwards; verifies the price.
class PhoneSolver final : public SolverInterface {
 public:
  std::vector<Command> preconditions(CombinationContext& combination) const override;
  std::vector<Command> verifications(CombinationContext& combination, const Value& expected) const override;
  std::vector<Command> postprocessing(CombinationContext& combination) const override;
  std::set<PropertyKey> reads() const override;
};

// Builtins plus destinationOf(country) and isValidPhoneNumber(number).
FunctionTablePtr functions();

// Focus call, interface functions and no name parts.
AssemblySpec assembly_spec();

}  // namespace rulegen::phonecall
