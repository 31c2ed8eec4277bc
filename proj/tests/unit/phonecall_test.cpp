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

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "rulegen/frontend.hpp"
#include "rulegen/phonecall.hpp"

namespace rulegen::phonecall {
namespace {

// Second implementation of the price rules, written from the tariff table
// alone: charge one unit price at the start of every started time unit.
std::int64_t oracle_price(const std::string& country, const std::string& number, int day_index,
                          std::int64_t begin, std::int64_t duration, bool cheap_active) {
  struct Row {
    std::int64_t standard, cheap, night_weekend, unit;
  };
  static const std::map<std::string, Row> rows = {
      {"", {10, 7, 3, 1}},           {"National", {10, 7, 3, 1}},     {"Greenland", {100, 50, 80, 20}},
      {"Blueland", {100, 50, 80, 20}}, {"Neverland", {100, 50, 80, 20}}, {"Yellowland", {200, 120, 180, 30}},
      {"Redland", {200, 120, 180, 30}},
  };
  auto it = rows.find(country);
  if (it == rows.end()) return 0;
  if (!std::regex_match(number, std::regex("[0-9]{3,15}"))) return 0;
  const Row& row = it->second;
  const bool weekend = day_index >= 5;
  const std::int64_t hour = begin / 3600;
  const bool night = hour >= 20 || hour < 6;
  const std::int64_t rate = (weekend || night) ? row.night_weekend : cheap_active ? row.cheap : row.standard;
  std::int64_t total = 0;
  for (std::int64_t second = 0; second < duration; ++second) {
    if (second % row.unit == 0) total += rate;
  }
  return total;
}

CallInput input(std::string country, Day day, std::int64_t begin, std::int64_t duration,
                std::string number = "5551234") {
  CallInput in;
  in.country = std::move(country);
  in.phone_number = std::move(number);
  in.day = day;
  in.call_begin_time = begin;
  in.call_duration = duration;
  return in;
}

std::int64_t price(const CallInput& in, bool cheap = false) { return calculate_call_price(in, {cheap}).cents; }

const std::vector<std::string> kCountries = {"",          "National",   "Greenland", "Blueland",
                                             "Neverland", "Yellowland", "Redland",   "Atlantis"};
const std::vector<std::int64_t> kBeginTimes = {0, 21599, 21600, 71999, 72000, 86399};
const std::vector<std::int64_t> kDurations = {1, 19, 20, 21, 29, 30, 31, 59, 60, 61, 86399, 86400};

template <class F>
void for_each_grid_case(F&& f) {
  for (const auto& country : kCountries) {
    for (int day = 0; day < 7; ++day) {
      for (auto begin : kBeginTimes) {
        for (auto duration : kDurations) {
          for (bool cheap : {false, true}) f(input(country, static_cast<Day>(day), begin, duration), day, cheap);
        }
      }
    }
  }
}

TEST(DestinationTest, CountryLists) {
  EXPECT_EQ(destination_of("Blueland"), Destination::kInternational1);
  EXPECT_EQ(destination_of(""), Destination::kNational);
  EXPECT_EQ(destination_of("National"), Destination::kNational);
  EXPECT_EQ(destination_of("Greenland"), Destination::kInternational1);
  EXPECT_EQ(destination_of("Neverland"), Destination::kInternational1);
  EXPECT_EQ(destination_of("Yellowland"), Destination::kInternational2);
  EXPECT_EQ(destination_of("Redland"), Destination::kInternational2);
  EXPECT_EQ(destination_of("Atlantis"), Destination::kInvalid);
  EXPECT_EQ(destination_of("redland"), Destination::kInvalid);
  EXPECT_EQ(destination_of(" National"), Destination::kInvalid);
}

TEST(PriceTest, WorkedExamples) {
  EXPECT_EQ(price(input("National", Day::kMon, 36000, 61)), 610);
  EXPECT_EQ(price(input("Greenland", Day::kMon, 36000, 1)), 100);
  EXPECT_EQ(price(input("Redland", Day::kSat, 36000, 90)), 540);
  EXPECT_EQ(price(input("Atlantis", Day::kMon, 36000, 60)), 0);
  EXPECT_EQ(price(input("Atlantis", Day::kMon, 36000, 60), true), 0);
}

TEST(PriceTest, ExhaustiveGridMatchesOracle) {
  int cases = 0;
  int mismatches = 0;
  for_each_grid_case([&](const CallInput& in, int day, bool cheap) {
    ++cases;
    auto expected = oracle_price(in.country, in.phone_number, day, in.call_begin_time, in.call_duration, cheap);
    auto got = price(in, cheap);
    if (got != expected) {
      ++mismatches;
      ADD_FAILURE() << in.country << " day " << day << " t=" << in.call_begin_time << " d=" << in.call_duration
                    << " cheap=" << cheap << ": " << got << " != " << expected;
    }
  });
  EXPECT_EQ(cases, 8064);
  EXPECT_EQ(mismatches, 0);
}

TEST(PriceTest, InvalidNumbersCostNothing) {
  for (std::string number : {"", "12", "1234567890123456", "55a1234", "+4955512"}) {
    EXPECT_FALSE(is_valid_phone_number(number)) << number;
    EXPECT_EQ(price(input("National", Day::kMon, 36000, 60, number)), 0) << number;
  }
  EXPECT_TRUE(is_valid_phone_number("123"));
  EXPECT_TRUE(is_valid_phone_number("123456789012345"));
}

TEST(PriceTest, DomainErrors) {
  EXPECT_THROW(price(input("National", Day::kMon, 36000, 0)), DomainError);
  EXPECT_THROW(price(input("National", Day::kMon, 36000, 86401)), DomainError);
  EXPECT_THROW(price(input("National", Day::kMon, -1, 60)), DomainError);
  EXPECT_THROW(price(input("National", Day::kMon, 86400, 60)), DomainError);
  // The domain check comes before the validity check.
  EXPECT_THROW(price(input("Atlantis", Day::kMon, 36000, 0)), DomainError);
  EXPECT_THROW(parse_day("Monday"), DomainError);
}

TEST(PriceTest, NightBoundaries) {
  EXPECT_EQ(price(input("National", Day::kMon, 71999, 10)), 100);
  EXPECT_EQ(price(input("National", Day::kMon, 72000, 10)), 30);
  EXPECT_EQ(price(input("National", Day::kMon, 21599, 10)), 30);
  EXPECT_EQ(price(input("National", Day::kMon, 21600, 10)), 100);
  // A night or weekend call ignores the cheap-call option.
  EXPECT_EQ(price(input("National", Day::kSun, 36000, 10), true), 30);
  EXPECT_EQ(price(input("National", Day::kMon, 36000, 10), true), 70);
}

TEST(PriceTest, MonotoneInDuration) {
  for (const auto& country : kCountries) {
    for (int day : {0, 5}) {
      for (auto begin : kBeginTimes) {
        for (bool cheap : {false, true}) {
          std::int64_t last = 0;
          for (std::int64_t d = 1; d <= 200; ++d) {
            auto p = price(input(country, static_cast<Day>(day), begin, d), cheap);
            EXPECT_GE(p, last);
            last = p;
          }
        }
      }
    }
  }
}

TEST(PriceTableTest, RowsAndTariffDominance) {
  const auto& t = price_table();
  EXPECT_EQ(t[0].destination, Destination::kNational);
  EXPECT_EQ((std::vector<std::int64_t>{t[0].standard_cents, t[0].cheap_cents, t[0].night_weekend_cents,
                                       t[0].unit_seconds}),
            (std::vector<std::int64_t>{10, 7, 3, 1}));
  EXPECT_EQ((std::vector<std::int64_t>{t[1].standard_cents, t[1].cheap_cents, t[1].night_weekend_cents,
                                       t[1].unit_seconds}),
            (std::vector<std::int64_t>{100, 50, 80, 20}));
  EXPECT_EQ((std::vector<std::int64_t>{t[2].standard_cents, t[2].cheap_cents, t[2].night_weekend_cents,
                                       t[2].unit_seconds}),
            (std::vector<std::int64_t>{200, 120, 180, 30}));
  for (const auto& row : t) EXPECT_LE(row.night_weekend_cents, row.standard_cents);
}

TEST(StateTest, CheapOptionIsIdempotent) {
  EXPECT_EQ(set_cheap_call_option_active(true, {false}), PhoneState{true});
  EXPECT_EQ(set_cheap_call_option_active(false, {false}), PhoneState{false});
  EXPECT_EQ(set_cheap_call_option_active(true, {true}), PhoneState{true});
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in) << path;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<std::string> scan(const std::string& source, const std::string& method) {
  std::set<std::string> ids;
  std::regex re("rec\\." + method + "\\(\"([^\"]+)\"");
  for (auto it = std::sregex_iterator(source.begin(), source.end(), re); it != std::sregex_iterator(); ++it) {
    ids.insert((*it)[1]);
  }
  return ids;
}

TEST(InstrumentationTest, UniverseMatchesModelSource) {
  const std::string source = read_file(RULEGEN_SOURCE_DIR "/src/phonecall/model.cpp");
  auto as_set = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()); };
  EXPECT_EQ(scan(source, "statement"), as_set(statement_ids()));
  EXPECT_EQ(scan(source, "condition"), as_set(condition_ids()));
  EXPECT_EQ(scan(source, "boundary"), as_set(boundary_ids()));
  EXPECT_EQ(statement_ids().size(), 8u);
  EXPECT_EQ(condition_ids().size(), 7u);
}

TEST(InstrumentationTest, GridCoversEveryStatementAndDecision) {
  CoverageRecord all;
  for_each_grid_case([&](const CallInput& in, int, bool cheap) {
    auto r = calculate_call_price(in, {cheap});
    for (const auto& s : r.coverage.statements) {
      auto ids = statement_ids();
      EXPECT_NE(std::find(ids.begin(), ids.end(), s), ids.end()) << s;
    }
    all.merge(r.coverage);
  });
  EXPECT_EQ(all.statements.size(), statement_ids().size());
  for (const char* d : {"call_valid", "night_weekend", "cheap"}) {
    for (bool outcome : {true, false}) {
      EXPECT_NE(std::find(all.decisions.begin(), all.decisions.end(), std::make_pair(std::string(d), outcome)),
                all.decisions.end())
          << d << " " << outcome;
    }
  }
}

TEST(InstrumentationTest, BoundaryRelations) {
  auto relation_of = [](const CoverageRecord& r, const std::string& id) {
    for (const auto& [b, rel] : r.boundaries) {
      if (b == id) return std::string(to_string(rel));
    }
    return std::string("none");
  };
  auto cov = [](std::int64_t t, std::int64_t d, const char* country = "Greenland") {
    return calculate_call_price(input(country, Day::kMon, t, d), {}).coverage;
  };
  EXPECT_EQ(relation_of(cov(71999, 10), "night_start"), "below");
  EXPECT_EQ(relation_of(cov(72000, 10), "night_start"), "at");
  EXPECT_EQ(relation_of(cov(21600, 10), "night_end"), "at");
  EXPECT_EQ(relation_of(cov(0, 86400), "max_duration"), "at");
  EXPECT_EQ(relation_of(cov(0, 19), "unit_multiple"), "below");
  EXPECT_EQ(relation_of(cov(0, 20), "unit_multiple"), "at");
  EXPECT_EQ(relation_of(cov(0, 21), "unit_multiple"), "above");
  EXPECT_EQ(relation_of(cov(0, 21, "Atlantis"), "unit_multiple"), "none");
}

TEST(ModelTest, CallInterface) {
  PhoneModel model;
  ValueMap args = {{"country", "National"}, {"phoneNumber", "5551234"}, {"day", "Mon"},
                   {"callBeginTime", 36000},  {"callDuration", 61}};
  auto state = model.initial_state();
  EXPECT_EQ(model.call(kCalculateCallPrice, args, state).result, Value(610));
  auto cheap = model.call(kSetCheapCallOptionActive, {{"isActive", true}}, state).state;
  EXPECT_EQ(model.call(kCalculateCallPrice, args, cheap).result, Value(427));
  // Calls never touch the caller's state.
  EXPECT_EQ(state.at("cheapCallActive"), Value(false));

  ValueMap bad = args;
  bad[4].second = Value("61");
  EXPECT_THROW(model.call(kCalculateCallPrice, bad, state), DomainError);
  EXPECT_THROW(model.call(kCalculateCallPrice, {}, state), DomainError);
  EXPECT_THROW(model.call("dial", args, state), DomainError);
}

TEST(FunctionsTest, StrategyHelpers) {
  auto fns = functions();
  ASSERT_TRUE(fns->contains("destinationOf"));
  std::vector<Value> a = {Value("Yellowland")};
  EXPECT_EQ(fns->call("destinationOf", a), Value("International_2"));
  std::vector<Value> n = {Value("12")};
  EXPECT_EQ(fns->call("isValidPhoneNumber", n), Value(false));
}

StrategyDocument bundle_doc(const std::string& strategy) {
  StrategyDocument defaults = load_strategy(RULEGEN_SOURCE_DIR "/bundles/phonecall/phonecall_defaults.rules");
  StrategyDocument doc = load_strategy(RULEGEN_SOURCE_DIR "/bundles/phonecall/" + strategy);
  defaults.rules.insert(defaults.rules.end(), doc.rules.begin(), doc.rules.end());
  return defaults;
}

std::vector<TestCaseRecord> assemble_bundle(const std::string& strategy) {
  auto doc = bundle_doc(strategy);
  RuleSet rules;
  rules.functions = functions();
  rules.append(doc.rules);
  PhoneModel model;
  PhoneSolver solver;
  auto spec = assembly_spec();
  spec.name_parts = doc.name_parts;
  std::vector<TestCaseRecord> out;
  run(rules, {}, [&](CombinationContext& c) { out.push_back(assemble_test_case(c, model, solver, spec)); });
  return out;
}

TEST(BundleTest, ShippedStrategyAssembles) {
  auto records = assemble_bundle("phonecall.rules");
  ASSERT_EQ(records.size(), 6u);
  // Hand-computed from the tariff table with the bundle defaults
  // (Mon 10:00, standard tariff).
  std::vector<Value> expected = {10, 300, 100, 300, 200, 0};
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(records[i].expected, expected[i]) << i;
  const auto& invalid = records[5];
  EXPECT_EQ(invalid.commands.front().function, kCalculateCallPrice);
  EXPECT_EQ(invalid.commands.size(), 2u);
}

TEST(BundleTest, CheapTariffNeedsThePrecondition) {
  for (const auto& r : assemble_bundle("phonecall_full.rules")) {
    const Binding* tariff = find_binding(r.properties, PropertyKey("tariff"));
    ASSERT_NE(tariff, nullptr);
    bool cheap = tariff->value == Value("cheap");
    bool has_pre = r.commands.front().function == kSetCheapCallOptionActive;
    EXPECT_EQ(cheap, has_pre) << r.name;
    if (cheap) {
      EXPECT_EQ(r.commands.front().render(), "setCheapCallOptionActive(isActive=true)");
      EXPECT_EQ(r.commands.back().render(), "setCheapCallOptionActive(isActive=false)");
    }
  }
}

TEST(BundleTest, GoldenScripts) {
  ScriptTemplate tmpl(read_file(RULEGEN_SOURCE_DIR "/bundles/phonecall/phonecall.tmpl"));
  std::string all;
  for (const auto& r : assemble_bundle("phonecall.rules")) all += "--- tc_" + std::to_string(r.id) + ".txt\n" + tmpl.render(r);
  EXPECT_EQ(all, read_file(RULEGEN_SOURCE_DIR "/bundles/phonecall/golden/phonecall_scripts.txt"));
}

}  // namespace
}  // namespace rulegen::phonecall
