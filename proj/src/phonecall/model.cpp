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

#include <algorithm>

#include "rulegen/phonecall.hpp"

namespace rulegen::phonecall {

const char* to_string(Destination d) {
  switch (d) {
    case Destination::kNational: return "National";
    case Destination::kInternational1: return "International_1";
    case Destination::kInternational2: return "International_2";
    case Destination::kInvalid: return "Invalid";
  }
  return "?";
}

Destination destination_of(std::string_view country) {
  if (country.empty() || country == "National") return Destination::kNational;
  if (country == "Greenland" || country == "Blueland" || country == "Neverland") return Destination::kInternational1;
  if (country == "Yellowland" || country == "Redland") return Destination::kInternational2;
  return Destination::kInvalid;
}

namespace {
constexpr std::array<const char*, 7> kDayNames = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
}  // namespace

const char* to_string(Day d) { return kDayNames[static_cast<std::size_t>(d)]; }

Day parse_day(std::string_view text) {
  for (std::size_t i = 0; i < kDayNames.size(); ++i) {
    if (text == kDayNames[i]) return static_cast<Day>(i);
  }
  throw DomainError("unknown day \"" + std::string(text) + "\"");
}

const std::array<PriceTableEntry, 3>& price_table() {
  static const std::array<PriceTableEntry, 3> table = {{
      {Destination::kNational, 10, 7, 3, 1},
      {Destination::kInternational1, 100, 50, 80, 20},
      {Destination::kInternational2, 200, 120, 180, 30},
  }};
  return table;
}

bool is_valid_phone_number(std::string_view number) {
  if (number.size() < 3 || number.size() > 15) return false;
  return std::all_of(number.begin(), number.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Every rec.statement() id below must be listed in statement_ids(); the
// tests check both directions against this file.
PriceResult calculate_call_price(const CallInput& in, const PhoneState& state) {
  const std::int64_t d = in.call_duration;
  const std::int64_t t = in.call_begin_time;
  if (d < 1 || d > kMaxCallDuration) throw DomainError("call duration " + std::to_string(d) + " outside [1, 86400]");
  if (t < 0 || t >= kSecondsPerDay) throw DomainError("call begin time " + std::to_string(t) + " outside [0, 86399]");

  CoverageRecorder rec;
  rec.boundary("night_start", t, kNightStart);
  rec.boundary("night_end", t, kNightEnd);
  rec.boundary("max_duration", d, kMaxCallDuration);

  rec.statement("price.destination");
  const Destination dest = destination_of(in.country);
  const bool valid = rec.condition("country_valid", dest != Destination::kInvalid) &&
                     rec.condition("number_valid", is_valid_phone_number(in.phone_number));
  if (!rec.decision("call_valid", valid)) {
    rec.statement("price.invalid_call");
    return {0, rec.take()};
  }

  rec.statement("price.lookup_row");
  const PriceTableEntry& row = price_table()[static_cast<std::size_t>(dest)];
  // Nearest multiple of the time unit, for the rounding boundary.
  const std::int64_t u = row.unit_seconds;
  rec.boundary("unit_multiple", d, std::max(u, (d + u / 2) / u * u));

  const bool night_weekend = rec.condition("saturday", in.day == Day::kSat) ||
                             rec.condition("sunday", in.day == Day::kSun) ||
                             rec.condition("after_20", t >= kNightStart) ||
                             rec.condition("before_06", t < kNightEnd);
  std::int64_t cents = 0;
  if (rec.decision("night_weekend", night_weekend)) {
    rec.statement("price.night_weekend_rate");
    cents = row.night_weekend_cents;
  } else if (rec.decision("cheap", rec.condition("cheap_active", state.cheap_call_active))) {
    rec.statement("price.cheap_rate");
    cents = row.cheap_cents;
  } else {
    rec.statement("price.standard_rate");
    cents = row.standard_cents;
  }

  rec.statement("price.units");
  const std::int64_t units = (d + u - 1) / u;
  rec.statement("price.total");
  return {units * cents, rec.take()};
}

PhoneState set_cheap_call_option_active(bool is_active, PhoneState state) {
  state.cheap_call_active = is_active;
  return state;
}

std::vector<std::string> statement_ids() {
  return {"price.destination", "price.invalid_call", "price.lookup_row",  "price.night_weekend_rate",
          "price.cheap_rate",  "price.standard_rate", "price.units",     "price.total"};
}

std::vector<std::string> condition_ids() {
  return {"country_valid", "number_valid", "saturday", "sunday", "after_20", "before_06", "cheap_active"};
}

std::vector<std::string> boundary_ids() { return {"night_start", "night_end", "max_duration", "unit_multiple"}; }

namespace {

const Value& arg(const ValueMap& args, const std::string& name) {
  for (const auto& [k, v] : args) {
    if (k == name) return v;
  }
  throw DomainError("missing argument " + name);
}

std::int64_t int_arg(const ValueMap& args, const std::string& name) {
  const Value& v = arg(args, name);
  if (!v.is_integer()) throw DomainError(name + " must be an integer, got " + v.literal());
  return v.as_integer();
}

std::string string_arg(const ValueMap& args, const std::string& name) {
  const Value& v = arg(args, name);
  if (!v.is_string()) throw DomainError(name + " must be a string, got " + v.literal());
  return v.as_string();
}

const char* kCheapKey = "cheapCallActive";

PhoneState to_phone_state(const ModelState& s) {
  PhoneState out;
  auto it = s.find(kCheapKey);
  if (it != s.end()) out.cheap_call_active = it->second.as_bool();
  return out;
}

}  // namespace

ModelState PhoneModel::initial_state() const { return {{kCheapKey, Value(false)}}; }

ModelResult PhoneModel::call(const std::string& function, const ValueMap& args, const ModelState& state) const {
  if (function == kSetCheapCallOptionActive) {
    const Value& on = arg(args, "isActive");
    if (!on.is_bool()) throw DomainError("isActive must be a boolean, got " + on.literal());
    PhoneState next = set_cheap_call_option_active(on.as_bool(), to_phone_state(state));
    ModelState out = state;
    out[kCheapKey] = Value(next.cheap_call_active);
    return {Value(next.cheap_call_active), std::move(out), {}};
  }
  if (function == kCalculateCallPrice) {
    CallInput in;
    in.country = string_arg(args, "country");
    in.phone_number = string_arg(args, "phoneNumber");
    in.day = parse_day(string_arg(args, "day"));
    in.call_begin_time = int_arg(args, "callBeginTime");
    in.call_duration = int_arg(args, "callDuration");
    PriceResult r = calculate_call_price(in, to_phone_state(state));
    return {Value(r.cents), state, std::move(r.coverage)};
  }
  throw DomainError("phone model has no function " + function);
}

}  // namespace rulegen::phonecall
