// Copyright 2026 The invsim Authors
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

// Built-in task table. Every task derives from the standard one: 200 SKUs,
// one store, capacity #SKU * 100, synthetic data with seed 2023 over 1825
// steps. Variants change one knob each.

#include <algorithm>

#include "invsim/task.hpp"

namespace invsim {

namespace {

const char* store_label(int echelons) {
  switch (echelons) {
    case 1: return "single_store";
    case 2: return "2_stores";
    default: return "3_stores";
  }
}

TaskSpec base(int skus, int echelons, const std::string& variant) {
  TaskSpec s;
  s.name = "sku" + std::to_string(skus) + "." + store_label(echelons) + "." + variant;
  s.echelons = echelons;
  s.sku_count = skus;
  s.capacity = {100, 0};
  s.costs = {standard_costs()};
  return s;
}

LinearCost scaled(const LinearCost& c, int k) { return {c.fixed * k, c.per_price * k, c.per_cost * k}; }

std::vector<TaskSpec> make_table() {
  std::vector<TaskSpec> out;
  for (int skus : {50, 100, 200, 500, 1000, 2000}) {
    for (int m = 1; m <= 3; ++m) out.push_back(base(skus, m, "standard"));
  }
  for (int m = 1; m <= 3; ++m) {
    TaskSpec lower = base(200, m, "lower_capacity");
    lower.capacity = {50, 0};
    out.push_back(lower);
    TaskSpec lowest = base(200, m, "lowest_capacity");
    lowest.capacity = {25, 0};
    out.push_back(lowest);
  }
  for (int m = 1; m <= 3; ++m) {
    TaskSpec s = base(200, m, "dynamic_vlt");
    s.transforms.dynamic_lead_time = true;
    out.push_back(s);
  }
  {
    TaskSpec up = base(200, 1, "increase_demand");
    up.transforms.demand_trend = 1.0;
    out.push_back(up);
    TaskSpec down = base(200, 1, "decrease_demand");
    down.transforms.demand_trend = -0.5;
    out.push_back(down);
  }
  struct CostVariant {
    const char* stem;
    LinearCost CostParams::*field;
  };
  const CostVariant variants[] = {{"backlog", &CostParams::backlog},
                                  {"holding_cost", &CostParams::holding},
                                  {"order_cost", &CostParams::order}};
  for (const auto& v : variants) {
    for (auto [prefix, k] : {std::pair{"higher_", 2}, std::pair{"highest_", 5}}) {
      TaskSpec s = base(200, 1, std::string(prefix) + v.stem);
      s.costs[0].*v.field = scaled(s.costs[0].*v.field, k);
      out.push_back(s);
    }
  }
  {
    TaskSpec low = base(200, 1, "low_profit");
    low.transforms.margin_scale = Money::parse("0.5");
    out.push_back(low);
    TaskSpec high = base(200, 1, "high_profit");
    high.transforms.margin_scale = Money::from_int(2);
    out.push_back(high);
  }
  for (auto [prefix, k] : {std::pair{"higher_", 2}, std::pair{"highest_", 5}}) {
    TaskSpec s = base(200, 1, std::string(prefix) + "overflow_cost");
    s.costs[0].overflow = scaled(s.costs[0].overflow, k);
    out.push_back(s);
  }
  for (int g = 1; g <= 6; ++g) {
    TaskSpec s = base(200, 1, "add_gap_" + std::to_string(g));
    s.transforms.gap_level = g;
    out.push_back(s);
  }
  for (int n = 1; n <= 6; ++n) {
    TaskSpec s = base(200, 1, "add_noise_" + std::to_string(n));
    s.transforms.noise_level = n;
    out.push_back(s);
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t k = 0; k <= b.size(); ++k) prev[k] = k;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t k = 1; k <= b.size(); ++k) {
      const std::size_t sub = prev[k - 1] + (a[i - 1] == b[k - 1] ? 0 : 1);
      cur[k] = std::min({prev[k] + 1, cur[k - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

const std::vector<TaskSpec>& builtin_tasks() {
  static const std::vector<TaskSpec> table = make_table();
  return table;
}

std::optional<TaskSpec> find_builtin_task(std::string_view name) {
  for (const TaskSpec& s : builtin_tasks()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

std::vector<std::string> nearest_task_names(std::string_view name, std::size_t count) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const TaskSpec& s : builtin_tasks()) scored.emplace_back(edit_distance(name, s.name), s.name);
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (std::size_t k = 0; k < scored.size() && k < count; ++k) out.push_back(scored[k].second);
  return out;
}

}  // namespace invsim
