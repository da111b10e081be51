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

// Helpers shared by the unit tests and the acceptance binary.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "invsim/engine.hpp"
#include "invsim/random.hpp"
#include "invsim/series.hpp"
#include "invsim/task.hpp"

namespace invsim::testing {

// A random small supply chain plus an order stream for every step.
struct FuzzInstance {
  SeriesSet series;
  Network network;
  std::vector<Matrix<Quantity>> orders;  // one per step
  EnvState start;
};

inline LinearCost random_cost(Rng& rng, int max_cents) {
  LinearCost c;
  c.fixed = Money::from_raw(rng.uniform_int(0, max_cents) * 10'000);
  if (rng.uniform() < 0.5) c.per_price = Money::from_raw(rng.uniform_int(-200'000, 300'000));
  if (rng.uniform() < 0.5) c.per_cost = Money::from_raw(rng.uniform_int(-200'000, 600'000));
  return c;
}

inline FuzzInstance make_fuzz_instance(std::uint64_t seed) {
  Rng rng(seed, 99);
  const int m = static_cast<int>(rng.uniform_int(1, 3));
  const int n = static_cast<int>(rng.uniform_int(1, 20));
  const Step horizon = rng.uniform_int(1, 50);

  FuzzInstance f;
  f.series = SeriesSet(n, horizon);
  for (int j = 0; j < n; ++j) {
    f.series.set_sku_id(j, "sku" + std::to_string(j));
    f.series.volume(j) = rng.uniform_int(1, 3);
    for (Step t = 0; t < horizon; ++t) {
      f.series.demand(t, j) = rng.uniform() < 0.1 ? 0 : rng.uniform_int(0, 25);
      f.series.cost(t, j) = Money::from_raw(rng.uniform_int(1, 5000) * 10'000);
      f.series.price(t, j) = f.series.cost(t, j) + Money::from_raw(rng.uniform_int(-500, 5000) * 10'000);
      f.series.lead_time(t, j) = static_cast<int>(rng.uniform_int(0, 5));
    }
  }
  const AcceptStrategy strategies[] = {AcceptStrategy::UniformProportional, AcceptStrategy::RejectAll,
                                       AcceptStrategy::AcceptAll, AcceptStrategy::PerSkuProportional};
  for (int i = 0; i < m; ++i) {
    WarehouseConfig w;
    w.capacity = rng.uniform_int(1, 40 * n);
    w.accept = rng.uniform() < 0.6 ? AcceptStrategy::UniformProportional : strategies[rng.uniform_int(0, 3)];
    f.network.warehouses.push_back(w);
    f.network.costs.push_back({random_cost(rng, 300), random_cost(rng, 2000), random_cost(rng, 20),
                               random_cost(rng, 200)});
  }
  f.start = EnvState::empty(m, n, 0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      f.start.inventory(i, j) = rng.uniform_int(0, 30);
      if (rng.uniform() < 0.5) f.start.pipeline.add(i, j, rng.uniform_int(0, 6), rng.uniform_int(1, 20));
      if (i > 0 && rng.uniform() < 0.5) f.start.pending_demand(i, j) = rng.uniform_int(0, 15);
    }
  }
  for (Step t = 0; t < horizon; ++t) {
    Matrix<Quantity> r(m, n, 0);
    for (auto& v : r.flat()) v = rng.uniform() < 0.4 ? 0 : rng.uniform_int(0, 40);
    f.orders.push_back(std::move(r));
  }
  return f;
}

// Small synthetic spec for tests: quick to build and solve.
inline TaskSpec small_spec(const std::string& name, int skus, int echelons, Step horizon, std::uint64_t seed) {
  TaskSpec s;
  s.name = name;
  s.sku_count = skus;
  s.echelons = echelons;
  s.data.seed = seed;
  s.data.horizon = horizon;
  s.warmup_length = 30;
  return s;
}

// Single-SKU replay written directly from the step definition: sell from
// start-of-step stock, order from the post-sale position, receive what is
// due (lead time 0 lands the same step), no capacity.
struct OracleTotals {
  Money profit;
  Money income_less_procurement_and_holding;
};

inline OracleTotals oracle_run(const SeriesSet& s, int j, const CostParams& costs,
                               const std::function<Quantity(Quantity position)>& rule) {
  OracleTotals out;
  Quantity on_hand = 0;
  std::map<Step, Quantity> due;
  for (Step t = 0; t < s.horizon(); ++t) {
    const Quantity d = s.demand(t, j);
    const Quantity sale = std::min(d, on_hand);
    Quantity transit = 0;
    for (const auto& [when, q] : due) transit += q;
    const Quantity order = rule(on_hand - sale + transit);
    if (order > 0) due[t + s.lead_time(t, j)] += order;
    const Quantity arrived = due.count(t) ? due[t] : 0;
    due.erase(t);
    on_hand = on_hand - sale + arrived;

    const Money p = s.price(t, j), c = s.cost(t, j);
    const Money income = p * sale;
    const Money procurement = c * sale;
    const Money holding = costs.holding.at(p, c) * on_hand;
    const Money ordering = order > 0 ? costs.order.at(p, c) : Money{};
    const Money backlog = costs.backlog.at(p, c) * (d - sale);
    out.profit += income - procurement - ordering - holding - backlog;
    out.income_less_procurement_and_holding += income - procurement - holding;
  }
  return out;
}

// Built-in task names in table order.
inline const std::vector<std::string>& expected_task_names() {
  static const std::vector<std::string> names = {
      "sku50.single_store.standard",
      "sku50.2_stores.standard",
      "sku50.3_stores.standard",
      "sku100.single_store.standard",
      "sku100.2_stores.standard",
      "sku100.3_stores.standard",
      "sku200.single_store.standard",
      "sku200.2_stores.standard",
      "sku200.3_stores.standard",
      "sku500.single_store.standard",
      "sku500.2_stores.standard",
      "sku500.3_stores.standard",
      "sku1000.single_store.standard",
      "sku1000.2_stores.standard",
      "sku1000.3_stores.standard",
      "sku2000.single_store.standard",
      "sku2000.2_stores.standard",
      "sku2000.3_stores.standard",
      "sku200.single_store.lower_capacity",
      "sku200.single_store.lowest_capacity",
      "sku200.2_stores.lower_capacity",
      "sku200.2_stores.lowest_capacity",
      "sku200.3_stores.lower_capacity",
      "sku200.3_stores.lowest_capacity",
      "sku200.single_store.dynamic_vlt",
      "sku200.2_stores.dynamic_vlt",
      "sku200.3_stores.dynamic_vlt",
      "sku200.single_store.increase_demand",
      "sku200.single_store.decrease_demand",
      "sku200.single_store.higher_backlog",
      "sku200.single_store.highest_backlog",
      "sku200.single_store.higher_holding_cost",
      "sku200.single_store.highest_holding_cost",
      "sku200.single_store.higher_order_cost",
      "sku200.single_store.highest_order_cost",
      "sku200.single_store.low_profit",
      "sku200.single_store.high_profit",
      "sku200.single_store.higher_overflow_cost",
      "sku200.single_store.highest_overflow_cost",
      "sku200.single_store.add_gap_1",
      "sku200.single_store.add_gap_2",
      "sku200.single_store.add_gap_3",
      "sku200.single_store.add_gap_4",
      "sku200.single_store.add_gap_5",
      "sku200.single_store.add_gap_6",
      "sku200.single_store.add_noise_1",
      "sku200.single_store.add_noise_2",
      "sku200.single_store.add_noise_3",
      "sku200.single_store.add_noise_4",
      "sku200.single_store.add_noise_5",
      "sku200.single_store.add_noise_6",
  };
  return names;
}

}  // namespace invsim::testing
