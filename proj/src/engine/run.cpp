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
#include <optional>

#include "rule_view.hpp"
#include "rulegen/engine.hpp"
#include "rulegen/shuffle.hpp"

namespace rulegen {

namespace {

struct Leaf {
  Bindings delta;
  std::shared_ptr<const RuleView> view;
};

class Source {
 public:
  virtual ~Source() = default;
  virtual std::optional<Leaf> next() = 0;
  // Finishes the source early. With `counted`, everything not yet explored
  // is reported as skipped (pruning); otherwise the cut is part of normal
  // lockstep iteration.
  virtual void abandon(bool counted) = 0;
};

bool is_iteration_key(const Bindings& env, const PropertyKey& key) {
  const Binding* b = find_binding(env, key);
  return b && b->origin == BindingOrigin::kIteration;
}

bool when_satisfied(const std::set<PropertyKey>& when, const Bindings& env) {
  return std::all_of(when.begin(), when.end(), [&](const PropertyKey& k) { return is_iteration_key(env, k); });
}

Bindings concat(const Bindings& a, const Bindings& b) {
  Bindings out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

struct FiredRule {
  const IterationStack* stack;
  const IterationRule* rule;
  ValueList values;
};

class Engine;

class EmptySource final : public Source {
 public:
  std::optional<Leaf> next() override { return std::nullopt; }
  void abandon(bool) override {}
};

// A node with no further chained stacks: exactly one leaf.
class SingleLeaf final : public Source {
 public:
  SingleLeaf(Bindings delta, std::shared_ptr<const RuleView> view)
      : delta_(std::move(delta)), view_(std::move(view)) {}

  std::optional<Leaf> next() override {
    if (done_) return std::nullopt;
    done_ = true;
    return Leaf{std::move(delta_), std::move(view_)};
  }
  void abandon(bool) override { done_ = true; }

 private:
  Bindings delta_;
  std::shared_ptr<const RuleView> view_;
  bool done_ = false;
};

class Engine {
 public:
  Engine(const RuleSet& rule_set, const RunOptions& options)
      : rule_set_(rule_set), functions_(*rule_set.functions), options_(options),
        base_view_(RuleView::base(rule_set)) {}

  std::unique_ptr<Source> root();

  // Children of the assignment `target` (already last in `env`).
  std::unique_ptr<Source> expand_assignment(const Bindings& env, const PropertyKey& target,
                                            std::shared_ptr<const RuleView> view,
                                            const std::set<StackKey>& fresh, const std::string& path);

  std::unique_ptr<Source> make_group(const Bindings& env, const std::vector<const IterationStack*>& eligible,
                                     std::shared_ptr<const RuleView> view, const std::string& path, bool is_root);

  bool should_stop() {
    if (!stopped_ && options_.observer && options_.observer->stop_all()) stopped_ = true;
    return stopped_;
  }
  bool collapse(const PropertyKey& target) {
    return options_.observer && options_.observer->collapse(target);
  }
  void count_skipped(std::uint64_t n) { skipped_ += n; }
  std::uint64_t skipped() const { return skipped_; }
  const RunOptions& options() const { return options_; }
  const FunctionTable& functions() const { return functions_; }

 private:
  const RuleSet& rule_set_;
  const FunctionTable& functions_;
  const RunOptions& options_;
  std::shared_ptr<const RuleView> base_view_;
  bool stopped_ = false;
  std::uint64_t skipped_ = 0;
};

// Iterates one fired rule's value list. Each value's subtree is fully
// explored before the next value is assigned.
class FrameSource final : public Source {
 public:
  FrameSource(Engine& engine, Bindings env, FiredRule fired, std::shared_ptr<const RuleView> view,
              std::set<StackKey> fresh, std::string path)
      : engine_(engine), env_(std::move(env)), rule_(*fired.rule), values_(std::move(fired.values)),
        view_(std::move(view)), fresh_(std::move(fresh)), path_(std::move(path)) {}

  std::optional<Leaf> next() override {
    while (true) {
      if (child_) {
        if (auto leaf = child_->next()) {
          ++leaves_in_pass_;
          leaf->delta.insert(leaf->delta.begin(), Binding{rule_.target, current_, BindingOrigin::kIteration});
          return leaf;
        }
        child_.reset();
        ++cursor_;
      }
      if (ended_) return std::nullopt;
      if (!started_) start_pass();
      if (cursor_ >= values_.size()) {
        finish_pass();
        return std::nullopt;
      }
      if (engine_.should_stop() || (leaves_in_pass_ > 0 && engine_.collapse(rule_.target))) {
        engine_.count_skipped(values_.size() - cursor_);
        cursor_ = values_.size();
        truncated_ = true;
        continue;
      }
      const std::size_t original = order_[cursor_];
      current_ = values_[original];
      assigned_.push_back(current_);
      Bindings child_env = env_;
      child_env.push_back({rule_.target, current_, BindingOrigin::kIteration});
      child_ = engine_.expand_assignment(child_env, rule_.target, view_, fresh_,
                                         path_ + "." + std::to_string(pass_) + ":" + std::to_string(original));
    }
  }

  void restart() {
    ++pass_;
    started_ = false;
    ended_ = false;
    child_.reset();
  }

  void abandon(bool counted) override {
    if (ended_) return;
    if (child_) {
      child_->abandon(counted);
      child_.reset();
      ++cursor_;
    }
    if (counted && started_ && cursor_ < values_.size()) engine_.count_skipped(values_.size() - cursor_);
    ended_ = true;
  }

 private:
  void start_pass() {
    started_ = true;
    cursor_ = 0;
    leaves_in_pass_ = 0;
    truncated_ = false;
    assigned_.clear();
    order_.resize(values_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (rule_.shuffled) shuffle_in_place(order_, frame_seed(engine_.options().seed, path_, pass_));
  }

  void finish_pass() {
    ended_ = true;
    if (!truncated_ && engine_.options().on_pass) {
      engine_.options().on_pass(PassRecord{path_, rule_.target, pass_, assigned_});
    }
  }

  Engine& engine_;
  Bindings env_;
  const IterationRule& rule_;
  ValueList values_;
  std::shared_ptr<const RuleView> view_;
  std::set<StackKey> fresh_;
  std::string path_;

  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::uint64_t pass_ = 0;
  std::uint64_t leaves_in_pass_ = 0;
  bool started_ = false;
  bool ended_ = false;
  bool truncated_ = false;
  Value current_;
  std::vector<Value> assigned_;
  std::unique_ptr<Source> child_;
};

// Sibling frames fired by one assignment, advanced in lockstep until every
// sibling completed its first pass. Exhausted siblings restart.
class GroupSource final : public Source {
 public:
  GroupSource(Engine& engine, Bindings env, Bindings prefix, std::vector<std::unique_ptr<FrameSource>> siblings,
              std::shared_ptr<const RuleView> view, std::string path, bool is_root)
      : engine_(engine), env_(std::move(env)), prefix_(std::move(prefix)), siblings_(std::move(siblings)),
        view_(std::move(view)), path_(std::move(path)), is_root_(is_root),
        first_pass_done_(siblings_.size(), false), dropped_(siblings_.size(), false) {}

  std::optional<Leaf> next() override {
    while (true) {
      if (chained_) {
        if (auto leaf = chained_->next()) {
          return Leaf{concat(prefix_, concat(combined_, leaf->delta)), std::move(leaf->view)};
        }
        chained_.reset();
      }
      if (finished_) return std::nullopt;
      if (engine_.should_stop()) {
        abandon(true);
        return std::nullopt;
      }
      auto step = advance();
      if (!step) {
        finished_ = true;
        return std::nullopt;
      }
      combined_.clear();
      std::vector<std::shared_ptr<const RuleView>> views;
      for (auto& leaf : *step) {
        merge_into(combined_, leaf.delta);
        views.push_back(leaf.view);
      }
      auto leaf_view = RuleView::merge(views);

      // Stacks whose WHEN set only became complete by combining siblings.
      Bindings full = concat(env_, combined_);
      std::vector<const IterationStack*> eligible;
      for (const auto& stack : view_->stacks()) {
        if (stack.key.when.empty() || !when_satisfied(stack.key.when, full)) continue;
        bool seen_by_sibling = false;
        for (const auto& leaf : *step) {
          if (when_satisfied(stack.key.when, concat(env_, leaf.delta))) seen_by_sibling = true;
        }
        if (!seen_by_sibling) eligible.push_back(&stack);
      }
      if (!eligible.empty()) {
        chained_ = engine_.make_group(full, eligible, view_, path_ + "~" + std::to_string(steps_), false);
        continue;
      }
      return Leaf{concat(prefix_, combined_), std::move(leaf_view)};
    }
  }

  void abandon(bool counted) override {
    if (chained_) chained_->abandon(counted);
    chained_.reset();
    for (auto& s : siblings_) s->abandon(counted);
    finished_ = true;
  }

 private:
  std::optional<std::vector<Leaf>> advance() {
    std::vector<std::optional<Leaf>> step(siblings_.size());
    bool first_pass_pending = false;
    for (std::size_t i = 0; i < siblings_.size(); ++i) {
      if (dropped_[i] || first_pass_done_[i]) continue;
      step[i] = siblings_[i]->next();
      if (step[i]) {
        first_pass_pending = true;
        continue;
      }
      first_pass_done_[i] = true;
      if (steps_ == 0) {
        // A sibling with nothing to offer leaves the branch without a
        // combination; at the root it is just dropped.
        if (!is_root_) {
          abandon(false);
          return std::nullopt;
        }
        dropped_[i] = true;
      }
    }
    if (!first_pass_pending) {
      abandon(false);
      return std::nullopt;
    }
    std::vector<Leaf> out;
    for (std::size_t i = 0; i < siblings_.size(); ++i) {
      if (dropped_[i]) continue;
      if (!step[i]) {
        step[i] = siblings_[i]->next();
        if (!step[i]) {
          siblings_[i]->restart();
          step[i] = siblings_[i]->next();
        }
        if (!step[i]) {
          abandon(false);
          return std::nullopt;
        }
      }
      out.push_back(std::move(*step[i]));
    }
    ++steps_;
    return out;
  }

  static void merge_into(Bindings& combined, const Bindings& delta) {
    for (const auto& b : delta) {
      if (const Binding* existing = find_binding(combined, b.key)) {
        if (existing->origin == BindingOrigin::kDefault && b.origin == BindingOrigin::kDefault &&
            existing->value == b.value) {
          continue;
        }
        throw ReassignmentError(b.key.name(), SourceLocation{});
      }
      combined.push_back(b);
    }
  }

  Engine& engine_;
  Bindings env_;
  Bindings prefix_;
  std::vector<std::unique_ptr<FrameSource>> siblings_;
  std::shared_ptr<const RuleView> view_;
  std::string path_;
  bool is_root_;
  std::vector<bool> first_pass_done_;
  std::vector<bool> dropped_;
  std::uint64_t steps_ = 0;
  bool finished_ = false;
  Bindings combined_;
  std::unique_ptr<Source> chained_;
};

std::unique_ptr<Source> Engine::root() {
  std::vector<const IterationStack*> eligible;
  for (const auto& stack : base_view_->stacks()) {
    if (stack.key.when.empty()) eligible.push_back(&stack);
  }
  return make_group(Bindings{}, eligible, base_view_, "", true);
}

std::unique_ptr<Source> Engine::expand_assignment(const Bindings& env, const PropertyKey& target,
                                                  std::shared_ptr<const RuleView> view,
                                                  const std::set<StackKey>& fresh, const std::string& path) {
  std::vector<const IterationStack*> eligible;
  for (const auto& stack : view->stacks()) {
    const bool triggered = stack.key.when.count(target) > 0 || fresh.count(stack.key) > 0;
    if (triggered && when_satisfied(stack.key.when, env)) eligible.push_back(&stack);
  }
  return make_group(env, eligible, std::move(view), path, false);
}

std::unique_ptr<Source> Engine::make_group(const Bindings& env, const std::vector<const IterationStack*>& eligible,
                                           std::shared_ptr<const RuleView> view, const std::string& path,
                                           bool is_root) {
  Bindings scope = env;
  std::vector<FiredRule> fired;
  for (const IterationStack* stack : eligible) {
    for (auto it = stack->rules.rbegin(); it != stack->rules.rend(); ++it) {
      const IterationRule& rule = **it;
      const std::string what = "IF of iterate " + rule.target.display();
      if (!condition_holds(rule.condition, scope, *view, functions_, rule.location, what.c_str())) continue;
      if (find_binding(scope, rule.target)) throw ReassignmentError(rule.target.name(), rule.location);
      for (const auto& f : fired) {
        if (f.rule->target == rule.target) throw ReassignmentError(rule.target.name(), rule.location);
      }
      Value list;
      std::vector<PropertyKey> resolving;
      try {
        list = evaluate_expression(
            *rule.values, scope,
            [&](const PropertyKey& k) { return resolve_with_defaults(k, scope, *view, functions_, resolving); },
            functions_);
        if (!list.is_list()) {
          throw EvalError(EvalErrorKind::kTypeMismatch, "values",
                          std::string("value list evaluated to ") + to_string(list.kind()));
        }
      } catch (const EvalError& e) {
        throw RuleError(rule.location, "THEN of iterate " + rule.target.display(), e);
      }
      fired.push_back({stack, &rule, list.as_list()});
      break;
    }
  }
  Bindings prefix(scope.begin() + static_cast<std::ptrdiff_t>(env.size()), scope.end());
  if (fired.empty()) {
    if (is_root) return std::make_unique<EmptySource>();
    return std::make_unique<SingleLeaf>(std::move(prefix), std::move(view));
  }
  std::vector<std::unique_ptr<FrameSource>> frames;
  for (auto& f : fired) {
    std::set<StackKey> fresh;
    auto frame_view = f.rule->injected.empty() ? view : view->with(f.rule->injected, fresh);
    std::string frame_path = path + "/" + std::to_string(f.stack->order);
    frames.push_back(std::make_unique<FrameSource>(*this, scope, std::move(f), std::move(frame_view),
                                                   std::move(fresh), std::move(frame_path)));
  }
  return std::make_unique<GroupSource>(*this, scope, std::move(prefix), std::move(frames), std::move(view), path,
                                       is_root);
}

}  // namespace

CapExceededError::CapExceededError(std::uint64_t cap)
    : Error("more than " + std::to_string(cap) + " combinations; raise --max or narrow the strategy") {}

CombinationContext::CombinationContext(Combination& combination, std::shared_ptr<const RuleView> view,
                                       const FunctionTable& functions)
    : combination_(combination), view_(std::move(view)), functions_(functions) {}

Value CombinationContext::resolve(const PropertyKey& key) {
  if (const Value* v = combination_.find(key)) return *v;
  Bindings env = combination_.bindings();
  const std::size_t before = env.size();
  std::vector<PropertyKey> resolving;
  Value result = resolve_with_defaults(key, env, *view_, functions_, resolving);
  for (std::size_t i = before; i < env.size(); ++i) {
    combination_.bind(env[i].key, env[i].value, BindingOrigin::kDefault);
  }
  return result;
}

PropertyResolver CombinationContext::resolver() {
  return [this](const PropertyKey& key) { return resolve(key); };
}

RunSummary run(const RuleSet& rule_set, const RunOptions& options, const CombinationSink& sink) {
  Engine engine(rule_set, options);
  auto root = engine.root();
  RunSummary summary;
  while (auto leaf = root->next()) {
    if (options.max_combinations && summary.emitted >= options.max_combinations) {
      throw CapExceededError(options.max_combinations);
    }
    ++summary.emitted;
    Combination combination(summary.emitted, std::move(leaf->delta));
    CombinationContext context(combination, leaf->view, engine.functions());
    if (sink) sink(context);
  }
  summary.skipped = engine.skipped();
  return summary;
}

Value resolve(const PropertyKey& key, Bindings& env, const RuleSet& rule_set) {
  auto view = RuleView::base(rule_set);
  std::vector<PropertyKey> resolving;
  return resolve_with_defaults(key, env, *view, *rule_set.functions, resolving);
}

}  // namespace rulegen
