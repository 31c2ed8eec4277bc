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
#include <functional>

#include "rulegen/engine.hpp"

namespace rulegen {

DependencyGraph build_graph(const RuleSet& rule_set) {
  DependencyGraph graph;
  // WHEN key -> targets it triggers.
  std::map<PropertyKey, std::set<PropertyKey>> triggers;

  for_each_rule(rule_set.rules, [&](const Rule& rule) {
    const PropertyKey& target = rule.target();
    auto refs = rule.references();
    if (refs.count(target)) throw CyclicDependencyError({target.name(), target.name()});
    if (!refs.empty()) graph.edges[target].insert(refs.begin(), refs.end());
    if (rule.is_iteration()) {
      const auto& it = rule.iteration();
      graph.stacks[StackKey{target, it.when}].push_back(it.definition_index);
      for (const auto& k : it.when) triggers[k].insert(target);
    } else {
      graph.default_stacks[target].push_back(rule.definition_index());
    }
  });

  for (auto& [key, indices] : graph.stacks) std::sort(indices.begin(), indices.end());
  for (auto& [key, indices] : graph.default_stacks) std::sort(indices.begin(), indices.end());

  // Depth-first search for a cycle in the trigger relation.
  enum class Mark { kNone, kActive, kDone };
  std::map<PropertyKey, Mark> marks;
  std::vector<PropertyKey> stack;
  std::function<void(const PropertyKey&)> visit = [&](const PropertyKey& k) {
    marks[k] = Mark::kActive;
    stack.push_back(k);
    auto it = triggers.find(k);
    if (it != triggers.end()) {
      for (const auto& next : it->second) {
        Mark m = marks[next];
        if (m == Mark::kActive) {
          std::vector<std::string> path;
          auto start = std::find(stack.begin(), stack.end(), next);
          for (auto s = start; s != stack.end(); ++s) path.push_back(s->name());
          path.push_back(next.name());
          throw CyclicDependencyError(std::move(path));
        }
        if (m == Mark::kNone) visit(next);
      }
    }
    stack.pop_back();
    marks[k] = Mark::kDone;
  };
  for (const auto& [k, targets] : triggers) {
    if (marks[k] == Mark::kNone) visit(k);
  }
  return graph;
}

}  // namespace rulegen
