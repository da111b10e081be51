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


#include <doctest.h>

#include "../support.hpp"
#include "invsim/error.hpp"

using namespace invsim;
using namespace invsim::literals;

namespace {

SeriesSet flat_series(int skus, Step horizon, Quantity demand, int lead, Money price = 10_dec, Money cost = 6_dec) {
  SeriesSet s(skus, horizon);
  for (int j = 0; j < skus; ++j) {
    s.set_sku_id(j, "s" + std::to_string(j));
    for (Step t = 0; t < horizon; ++t) {
      s.demand(t, j) = demand;
      s.price(t, j) = price;
      s.cost(t, j) = cost;
      s.lead_time(t, j) = lead;
    }
  }
  return s;
}

Network one_warehouse(Quantity capacity, AcceptStrategy accept = AcceptStrategy::UniformProportional,
                      CostParams costs = {}) {
  Network n;
  n.warehouses.push_back({capacity, accept});
  n.costs.push_back(costs);
  return n;
}

}  // namespace

TEST_CASE("sell is capped by start-of-step inventory") {
  SeriesSet s = flat_series(1, 3, 5, 1);
  Network net = one_warehouse(100);
  EnvState st = EnvState::empty(1, 1);
  st.inventory(0, 0) = 3;
  const StepRecord r = step(st, Matrix<Quantity>(1, 1, 0), s, net);
  CHECK(r.sale(0, 0) == 3);
  CHECK(r.demand(0, 0) - r.sale(0, 0) == 2);
  CHECK(st.inventory(0, 0) == 0);
  CHECK(st.t == 1);
}

TEST_CASE("receive rations arrivals by the common factor") {
  // W = 100, 90 on hand, 20 arriving: half of each arrival fits.
  SeriesSet s = flat_series(2, 3, 0, 1);
  Network net = one_warehouse(100);
  EnvState st = EnvState::empty(1, 2);
  st.inventory(0, 0) = 45;
  st.inventory(0, 1) = 45;
  st.pipeline.add(0, 0, 0, 10);
  st.pipeline.add(0, 1, 0, 10);
  const StepRecord r = step(st, Matrix<Quantity>(1, 2, 0), s, net);
  CHECK(r.arrival(0, 0) == 10);
  CHECK(r.received(0, 0) == 5);
  CHECK(r.overflow(0, 0) == 5);
  CHECK(r.accept_num[0] * 2 == r.accept_den[0]);
  CHECK(st.inventory(0, 0) == 50);
}

TEST_CASE("no arrivals means gamma 1 and no overflow") {
  SeriesSet s = flat_series(3, 2, 1, 1);
  Network net = one_warehouse(5);
  EnvState st = EnvState::empty(1, 3);
  st.inventory(0, 1) = 4;
  const StepRecord r = step(st, Matrix<Quantity>(1, 3, 0), s, net);
  CHECK(r.accept_num[0] == r.accept_den[0]);
  for (int j = 0; j < 3; ++j) {
    CHECK(r.received(0, j) == 0);
    CHECK(r.overflow_cost(0, j) == Money{});
  }
}

TEST_CASE("profit of the worked ledger example") {
  Flows f;
  f.demand = 5;
  f.sale = 3;
  f.arrival = 4;
  f.received = 4;
  f.order = 4;
  f.end_inventory = 7;
  UnitEconomics u{10_dec, 6_dec, 1_dec, 10_dec, 0.003_dec, 0.4_dec};
  const ProfitBreakdown p = profit(f, u);
  CHECK(p.income == 30_dec);
  CHECK(p.procurement == 18_dec);
  CHECK(p.overflow == Money{});
  CHECK(p.order == 10_dec);
  CHECK(p.holding == 0.021_dec);
  CHECK(p.backlog == 0.8_dec);
  CHECK(p.profit == 1.179_dec);
  CHECK(p.profit.to_string() == "1.179");
}

TEST_CASE("profit edge cases") {
  UnitEconomics u{10_dec, 6_dec, 1_dec, 10_dec, 0.003_dec, 0.4_dec};
  CHECK(profit(Flows{}, u).profit == Money{});
  Flows f{4, 2, 3, 3, 0, 5};
  CHECK(profit(f, u).order == Money{});
}

TEST_CASE("standard costs resolve per step") {
  SeriesSet s = flat_series(1, 1, 0, 1);
  const UnitEconomics u = unit_economics(s, standard_costs(), 0, 0);
  CHECK(u.order == 10_dec);
  CHECK(u.holding == 0.003_dec);
  CHECK(u.backlog == 0.4_dec);
  CHECK(u.overflow == 3_dec);
}

TEST_CASE("invalid steps throw and leave the state alone") {
  SeriesSet s = flat_series(2, 2, 1, 1);
  Network net = one_warehouse(10);
  EnvState st = EnvState::empty(1, 2);
  st.inventory(0, 0) = 3;
  const EnvState before = st;
  Matrix<Quantity> neg(1, 2, 0);
  neg(0, 1) = -1;
  CHECK_THROWS_AS(step(st, neg, s, net), ConfigError);
  CHECK_THROWS_AS(step(st, Matrix<Quantity>(2, 2, 0), s, net), ConfigError);
  CHECK_THROWS_AS(step_scalar_reference(st, neg, s, net), ConfigError);
  CHECK(st == before);
  st.t = 2;
  CHECK_THROWS_AS(step(st, Matrix<Quantity>(1, 2, 0), s, net), ConfigError);
}

TEST_CASE("quiet environment is a fixed point") {
  SeriesSet s = flat_series(4, 5, 0, 2);
  Network net = one_warehouse(50);
  net.warehouses.push_back({50, AcceptStrategy::UniformProportional});
  net.costs.push_back({});
  EnvState st = EnvState::empty(2, 4);
  st.inventory(0, 2) = 7;
  st.inventory(1, 3) = 1;
  for (EngineKind engine : {EngineKind::Matrix, EngineKind::ScalarReference}) {
    EnvState x = st;
    if (engine == EngineKind::Matrix) {
      step(x, Matrix<Quantity>(2, 4, 0), s, net);
    } else {
      step_scalar_reference(x, Matrix<Quantity>(2, 4, 0), s, net);
    }
    CHECK(x.t == st.t + 1);
    CHECK(x.inventory == st.inventory);
    CHECK(x.pipeline == st.pipeline);
    CHECK(x.pending_demand == st.pending_demand);
  }
}

TEST_CASE("orders flow up one echelon and shipments come back down") {
  SeriesSet s = flat_series(1, 6, 0, 2);
  Network net = one_warehouse(1000);
  net.warehouses.push_back({1000, AcceptStrategy::UniformProportional});
  net.costs.push_back({});
  EnvState st = EnvState::empty(2, 1);
  st.inventory(1, 0) = 20;

  Matrix<Quantity> r(2, 1, 0);
  r(0, 0) = 6;
  StepRecord a = step(st, r, s, net);
  CHECK(st.pending_demand(1, 0) == 6);
  CHECK(st.outstanding(0, 0) == 6);
  CHECK(a.order(0, 0) == 6);

  StepRecord b = step(st, Matrix<Quantity>(2, 1, 0), s, net);
  CHECK(b.demand(1, 0) == 6);
  CHECK(b.sale(1, 0) == 6);
  CHECK(st.pipeline.in_transit(0, 0) == 6);
  CHECK(st.pipeline.shipments(0, 0) == std::vector<Shipment>{{3, 6}});

  step(st, Matrix<Quantity>(2, 1, 0), s, net);
  StepRecord d = step(st, Matrix<Quantity>(2, 1, 0), s, net);
  CHECK(d.arrival(0, 0) == 6);
  CHECK(st.inventory(0, 0) == 6);
  CHECK(st.inventory(1, 0) == 14);
}

TEST_CASE("factory orders ship immediately with the top echelon's lead time") {
  SeriesSet s = flat_series(1, 4, 0, 1);
  Network net = one_warehouse(1000);
  EnvState st = EnvState::empty(1, 1);
  step(st, Matrix<Quantity>(1, 1, 9), s, net);
  CHECK(st.pipeline.shipments(0, 0) == std::vector<Shipment>{{1, 9}});
  step(st, Matrix<Quantity>(1, 1, 0), s, net);
  CHECK(st.inventory(0, 0) == 9);
}

TEST_CASE("lead time zero is received the same step") {
  SeriesSet s = flat_series(1, 3, 4, 0);
  Network net = one_warehouse(1000);
  EnvState st = EnvState::empty(1, 1);
  const StepRecord r = step(st, Matrix<Quantity>(1, 1, 4), s, net);
  CHECK(r.sale(0, 0) == 0);
  CHECK(r.received(0, 0) == 4);
  CHECK(st.inventory(0, 0) == 4);
  const StepRecord r2 = step(st, Matrix<Quantity>(1, 1, 4), s, net);
  CHECK(r2.sale(0, 0) == 4);
  CHECK(st.inventory(0, 0) == 4);
}

TEST_CASE("accept strategies") {
  SeriesSet s = flat_series(2, 2, 0, 1);
  auto run = [&](AcceptStrategy a) {
    Network net = one_warehouse(30, a);
    EnvState st = EnvState::empty(1, 2);
    st.inventory(0, 0) = 10;
    st.pipeline.add(0, 0, 0, 15);
    st.pipeline.add(0, 1, 0, 15);
    return step(st, Matrix<Quantity>(1, 2, 0), s, net);
  };
  const StepRecord u = run(AcceptStrategy::UniformProportional);
  CHECK(u.received(0, 0) == 10);  // gamma = 20 / 30
  CHECK(u.received(0, 1) == 10);
  const StepRecord rej = run(AcceptStrategy::RejectAll);
  CHECK(rej.received(0, 0) == 0);
  CHECK(rej.received(0, 1) == 0);
  CHECK(rej.overflow(0, 1) == 15);
  const StepRecord all = run(AcceptStrategy::AcceptAll);
  CHECK(all.received(0, 0) == 15);
  CHECK(all.received(0, 1) == 15);
  const StepRecord per = run(AcceptStrategy::PerSkuProportional);
  CHECK(per.received(0, 0) == 15);  // 20 free against the SKU's own 10 on hand
  CHECK(per.received(0, 1) == 15);
  CHECK(per.accept_num[0] == per.accept_den[0]);
}

TEST_CASE("per-SKU rule rations each SKU against the whole capacity") {
  SeriesSet s = flat_series(2, 2, 0, 1);
  s.volume(1) = 2;
  Network net = one_warehouse(20, AcceptStrategy::PerSkuProportional);
  EnvState st = EnvState::empty(1, 2);
  st.inventory(0, 0) = 14;
  st.inventory(0, 1) = 4;
  st.pipeline.add(0, 0, 0, 12);
  st.pipeline.add(0, 1, 0, 10);
  for (EngineKind k : {EngineKind::Matrix, EngineKind::ScalarReference}) {
    EnvState copy = st;
    StepRecord r;
    if (k == EngineKind::Matrix) {
      step(copy, Matrix<Quantity>(1, 2, 0), s, net, r);
    } else {
      step_scalar_reference(copy, Matrix<Quantity>(1, 2, 0), s, net, r);
    }
    CHECK(r.received(0, 0) == 6);  // room 6 for 12
    CHECK(r.received(0, 1) == 6);  // room 12 for 20 volume: floor(10 * 12 / 20)
    CHECK(r.accept_num[0] == 18);
    CHECK(r.accept_den[0] == 32);
  }
}

TEST_CASE("unit volumes weight the free-space share") {
  SeriesSet s = flat_series(2, 2, 0, 1);
  s.volume(1) = 3;
  Network net = one_warehouse(40);
  EnvState st = EnvState::empty(1, 2);
  st.inventory(0, 1) = 5;  // 15 volume used, 25 free
  st.pipeline.add(0, 0, 0, 10);
  st.pipeline.add(0, 1, 0, 10);  // 40 volume arriving
  const StepRecord r = step(st, Matrix<Quantity>(1, 2, 0), s, net);
  CHECK(r.received(0, 0) == 6);  // floor(10 * 25 / 40)
  CHECK(r.received(0, 1) == 6);
  CHECK(r.received(0, 0) + 3 * r.received(0, 1) <= 25);
}

TEST_CASE("more stock never sells less") {
  SeriesSet s = flat_series(1, 1, 8, 1);
  Network net = one_warehouse(100);
  Quantity last = 0;
  for (Quantity inv = 0; inv <= 12; ++inv) {
    EnvState st = EnvState::empty(1, 1);
    st.inventory(0, 0) = inv;
    const StepRecord r = step(st, Matrix<Quantity>(1, 1, 0), s, net);
    CHECK(r.sale(0, 0) >= last);
    last = r.sale(0, 0);
  }
}

TEST_CASE("engines agree on fuzzed instances") {
  for (std::uint64_t seed = 1000; seed < 1030; ++seed) {
    testing::FuzzInstance f = testing::make_fuzz_instance(seed);
    EnvState a = f.start, b = f.start;
    for (const auto& r : f.orders) {
      const StepRecord ra = step(a, r, f.series, f.network);
      const StepRecord rb = step_scalar_reference(b, r, f.series, f.network);
      REQUIRE(ra == rb);
      REQUIRE(a == b);
    }
  }
}

TEST_CASE("pipeline grows past its initial reach") {
  Pipeline p(1, 1, 0, 2);
  p.add(0, 0, 50, 3);
  p.add(0, 0, 1, 2);
  CHECK(p.in_transit(0, 0) == 5);
  CHECK(p.shipments(0, 0) == std::vector<Shipment>{{1, 2}, {50, 3}});
  CHECK(p.collect(1, 0, 0) == 2);
  CHECK(p.collect(50, 0, 0) == 3);
  CHECK_THROWS_AS(p.add(0, 0, 10, 1), ConfigError);
}
