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

#include <json.hpp>

#include "rulegen/goals.hpp"
#include "rulegen/shuffle.hpp"

namespace rulegen {

namespace {

// nlohmann::ordered_json keeps insertion order, so reports diff cleanly.
using Json = nlohmann::ordered_json;

Json to_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kBool: return v.as_bool();
    case ValueKind::kInteger: return v.as_integer();
    case ValueKind::kString: return v.as_string();
    case ValueKind::kList: {
      Json a = Json::array();
      for (const auto& item : v.as_list()) a.push_back(to_json(item));
      return a;
    }
    case ValueKind::kMap: {
      Json o = Json::object();
      for (const auto& [k, item] : v.as_map()) o[k] = to_json(item);
      return o;
    }
  }
  return nullptr;
}

Json hits_json(const std::vector<ValueHit>& hits) {
  Json a = Json::array();
  for (const auto& h : hits) {
    Json e;
    e["value"] = to_json(h.value);
    e["first_id"] = h.first_id;
    e["hits"] = h.hits;
    a.push_back(std::move(e));
  }
  return a;
}

}  // namespace

std::string report_json(const GoalEngine& engine, const RunCounters& counters) {
  Json goals = Json::array();
  for (const auto& s : engine.states()) {
    Json g;
    g["name"] = s.goal().name;
    g["kind"] = to_string(s.goal().kind);
    if (s.goal().kind == GoalKind::kFinite) g["checklist_size"] = s.goal().checklist.size();
    g["achieved_count"] = s.achieved().size();
    g["achieved"] = hits_json(s.achieved());
    Json unachieved = Json::array();
    for (const auto& v : s.unachieved()) unachieved.push_back(to_json(v));
    g["unachieved"] = std::move(unachieved);
    g["unexpected"] = hits_json(s.unexpected());
    goals.push_back(std::move(g));
  }
  Json run;
  run["emitted"] = counters.emitted;
  run["skipped"] = counters.skipped;
  run["selected"] = engine.selected().size();
  run["selected_ids"] = engine.selected();
  run["seed"] = counters.seed;
  run["prng"] = kShuffleAlgorithm;
  Json out;
  out["goals"] = std::move(goals);
  out["run"] = std::move(run);
  return out.dump(2) + "\n";
}

}  // namespace rulegen
