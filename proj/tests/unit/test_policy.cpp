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

#include <filesystem>
#include <fstream>

#include "../support.hpp"
#include "invsim/error.hpp"
#include "invsim/harness.hpp"
#include "invsim/policy.hpp"

using namespace invsim;
using namespace invsim::literals;

namespace {

SeriesSet deterministic(int skus, Step horizon, Quantity d, int lead) {
  SeriesSet s(skus, horizon);
  for (int j = 0; j < skus; ++j) {
    s.set_sku_id(j, "d" + std::to_string(j));
    for (Step t = 0; t < horizon; ++t) {
      s.demand(t, j) = d;
      s.price(t, j) = 10_dec;
      s.cost(t, j) = 6_dec;
      s.lead_time(t, j) = lead;
    }
  }
  return s;
}

CostParams plain_costs(Money order, Money holding) {
  CostParams c;
  c.order = LinearCost::constant(order);
  c.holding = LinearCost::constant(holding);
  c.backlog = LinearCost::constant(0.4_dec);
  return c;
}

}  // namespace

TEST_CASE("order rules") {
  CHECK(base_stock_order(15, 10, 5) == 0);
  CHECK(base_stock_order(15, 4, 3) == 8);
  for (Quantity i = 0; i < 5; ++i) CHECK(base_stock_order(0, i, 2) == 0);
  CHECK(ss_order(0, 0, 0, 0) == 0);
  CHECK(ss_order(5, 20, 3, 1) == 16);
  CHECK(ss_order(5, 20, 6, 0) == 0);
  CHECK(ss_order(5, 20, 5, 0) == 15);
}

TEST_CASE("base stock solver picks the demand level with no lead time") {
  const SeriesSet s = deterministic(1, 60, 5, 0);
  const CostParams costs = plain_costs(Money{}, 0.003_dec);
  const SeriesView view(s, {0, 60});
  CHECK(solve_base_stock_sku(view, 0, costs, {}, SolverSpec{}) == 5);

  // Exhaustive oracle over 0..20.
  Quantity best = 0;
  Money best_value;
  for (Quantity z = 0; z <= 20; ++z) {
    const Money v = testing::oracle_run(s, 0, costs, [&](Quantity pos) { return base_stock_order(z, pos, 0); })
                        .income_less_procurement_and_holding;
    if (z == 0 || v > best_value) {
      best = z;
      best_value = v;
    }
  }
  CHECK(best == 5);
}

TEST_CASE("sandbox values match the oracle") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const SeriesSet s = generate_synthetic(seed, 2, 80);
    const SeriesView view(s, {0, 80});
    const CostParams costs = standard_costs();
    for (int j = 0; j < 2; ++j) {
      std::vector<Quantity> levels;
      for (Quantity z = 0; z <= 60; z += 3) levels.push_back(z);
      const auto got = evaluate_base_stock(view, j, costs, {}, levels);
      for (std::size_t k = 0; k < levels.size(); ++k) {
        const Quantity z = levels[k];
        CHECK(got[k] == testing::oracle_run(s, j, costs, [&](Quantity pos) { return base_stock_order(z, pos, 0); })
                            .income_less_procurement_and_holding);
      }
      const auto grid = ss_grid(view.mean_demand(j), 1.0, 6.0);
      const auto ss = evaluate_ss(view, j, costs, {}, grid);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const SsPair p = grid[k];
        CHECK(ss[k] == testing::oracle_run(s, j, costs, [&](Quantity pos) { return ss_order(p.s, p.S, pos, 0); }).profit);
      }
    }
  }
}

TEST_CASE("(s,S) solver agrees with an exhaustive oracle and batches under a large order cost") {
  const SeriesSet s = deterministic(1, 120, 5, 0);
  const CostParams costs = plain_costs(200_dec, 0.05_dec);
  const auto grid = ss_grid(5.0, 0.5, 12.0);
  const SsPair got = solve_ss_sku(SeriesView(s, {0, 120}), 0, costs, {}, grid);

  SsPair best;
  Money best_value;
  bool first = true;
  for (const SsPair& p : grid) {
    const Money v = testing::oracle_run(s, 0, costs, [&](Quantity pos) { return ss_order(p.s, p.S, pos, 0); }).profit;
    if (first || v > best_value) {
      best = p;
      best_value = v;
      first = false;
    }
  }
  CHECK(got == best);
  CHECK(got.S - got.s >= 3 * 5);
}

TEST_CASE("grids") {
  const auto g = ss_grid(4.0, 0.5, 12.0);
  CHECK(g.front() == SsPair{0, 0});
  CHECK(g.back() == SsPair{48, 48});
  for (std::size_t k = 1; k < g.size(); ++k) {
    CHECK(g[k].s <= g[k].S);
    CHECK((g[k - 1].S < g[k].S || (g[k - 1].S == g[k].S && g[k - 1].s < g[k].s)));
  }
  CHECK(ss_grid(0.0, 0.5, 12.0) == std::vector<SsPair>{{0, 0}});

  const SeriesSet s = deterministic(1, 50, 4, 2);
  const auto levels = base_stock_grid(SeriesView(s, {0, 50}), 0, 30.0);
  CHECK(levels.front() == 0);
  CHECK(levels.back() == 20);  // (2 + 3) * 4 is tighter than 30 * 4
}

TEST_CASE("zero demand fits zero levels") {
  const SeriesSet s = deterministic(1, 40, 0, 1);
  const SeriesView view(s, {0, 40});
  CHECK(solve_base_stock_sku(view, 0, standard_costs(), {}, SolverSpec{}) == 0);
  CHECK(solve_ss_sku(view, 0, standard_costs(), {}, ss_grid(0.0, 0.5, 12.0)) == SsPair{0, 0});
}

TEST_CASE("identical SKUs get identical levels") {
  const SeriesSet base = generate_synthetic(17, 3, 150);
  const std::vector<int> cols{1, 0, 1, 2, 1};
  const SeriesSet s = base.extract(cols, {0, 150});
  Network net{{WarehouseConfig{1000, AcceptStrategy::UniformProportional}}, {standard_costs()}};
  const Matrix<Quantity> z = solve_base_stock(SeriesView(s, {0, 150}), EnvState::empty(1, 5), net, SolverSpec{});
  CHECK(z(0, 0) == z(0, 2));
  CHECK(z(0, 0) == z(0, 4));
  const SsLevels ss = solve_ss(SeriesView(s, {0, 150}), EnvState::empty(1, 5), net,
                               {8.0, 8.0, 8.0, 8.0, 8.0}, SolverSpec{});
  CHECK(ss.S(0, 0) == ss.S(0, 2));
  CHECK(ss.s(0, 0) == ss.s(0, 4));
}

TEST_CASE("solves are deterministic across thread counts") {
  const Task task = build_task(testing::small_spec("det", 12, 2, 200, 5));
  const Matrix<Quantity> a = fit_base_stock_static(task);
  CHECK(fit_base_stock_static(task) == a);
  const SsLevels b = fit_ss_static(task);
  const SsLevels c = fit_ss_static(task);
  CHECK(b.s == c.s);
  CHECK(b.S == c.S);
}

TEST_CASE("sku start folds unprocessed orders into the pipeline") {
  SeriesSet s = deterministic(1, 10, 3, 2);
  EnvState st = EnvState::empty(2, 1, 4);
  st.inventory(0, 0) = 5;
  st.pipeline.add(0, 0, 5, 7);
  st.pending_demand(1, 0) = 4;
  const SkuStart start = sku_start(st, s, 0, 0);
  CHECK(start.inventory == 5);
  CHECK(start.shipments == std::vector<Shipment>{{5, 7}, {6, 4}});
  CHECK(sku_start(st, s, 1, 0).shipments.empty());
}

TEST_CASE("dynamic base stock never reads ahead") {
  const TaskSpec spec = testing::small_spec("dyn", 6, 1, 400, 21);
  const Task a = build_task(spec);
  const StepRange test = a.range(Split::Test);
  SeriesSet future = a.series();
  const Step cut = test.begin + 40;
  for (Step t = cut; t < future.horizon(); ++t) {
    for (int j = 0; j < future.skus(); ++j) future.demand(t, j) = future.demand(t, j) * 3 + 1;
  }
  const Task b(spec, future, a.data_seed());

  auto run_dynamic = [](const Task& task) {
    DynamicBaseStockPolicy p(task, fit_base_stock_static(task), task.range(Split::Test).begin, 20);
    run(task, p, Split::Test);
    return p.refits();
  };
  const auto ra = run_dynamic(a);
  const auto rb = run_dynamic(b);
  REQUIRE(ra.size() == 3);  // steps 340, 360, 380
  CHECK(ra[0].first == test.begin + 20);
  CHECK(ra[0] == rb[0]);
  CHECK(ra[1] == rb[1]);  // refit at `cut` sees only [0, cut)
  CHECK_FALSE(ra[2].second == rb[2].second);
}

TEST_CASE("dynamic base stock with a long interval equals static") {
  const Task task = build_task(testing::small_spec("dyn", 6, 1, 300, 22));
  const Matrix<Quantity> z = fit_base_stock_static(task);
  DynamicBaseStockPolicy dyn(task, z, task.range(Split::Test).begin, 1000);
  BaseStockPolicy stat(z);
  const RunResult a = run(task, dyn, Split::Test);
  const RunResult b = run(task, stat, Split::Test);
  CHECK(dyn.refits().empty());
  CHECK(a.total_profit == b.total_profit);
  CHECK(a.step_profit == b.step_profit);
}

TEST_CASE("dynamic refits settle on stationary demand") {
  TaskSpec spec = testing::small_spec("dyn", 10, 1, 1200, 23);
  const Task task = build_task(spec);
  DynamicBaseStockPolicy p(task, fit_base_stock_static(task), task.range(Split::Test).begin, 30);
  run(task, p, Split::Test);
  const auto& r = p.refits();
  REQUIRE(r.size() >= 4);
  // Later refits move the levels by less than the first one did.
  auto moved = [](const Matrix<Quantity>& x, const Matrix<Quantity>& y) {
    Quantity d = 0;
    for (std::size_t k = 0; k < x.size(); ++k) d += std::abs(x.flat()[k] - y.flat()[k]);
    return d;
  };
  const Quantity last = moved(r[r.size() - 2].second, r.back().second);
  Quantity total_level = 0;
  for (Quantity z : r.back().second.flat()) total_level += z;
  CHECK(last * 20 <= total_level);  // under 5% of the summed levels
}

TEST_CASE("policy names and parameter files") {
  const Task task = build_task(testing::small_spec("pol", 4, 2, 200, 31));
  for (const char* name : {"never", "bs-static", "bs-dynamic", "bs-warmup", "ss-static", "ss-hindsight"}) {
    CHECK(make_policy(name, task, Split::Test)->name() == name);
  }
  CHECK_THROWS_AS(make_policy("random", task, Split::Test), ConfigError);

  const auto dir = std::filesystem::temp_directory_path() / "invsim_params";
  std::filesystem::create_directories(dir);
  const Matrix<Quantity> z = fit_base_stock_static(task);
  write_base_stock_params(z, task.series(), dir / "z.csv");
  CHECK(read_base_stock_params(dir / "z.csv", task.series(), 2) == z);
  const SsLevels ss = fit_ss_static(task);
  write_ss_params(ss, task.series(), dir / "ss.csv");
  const SsLevels back = read_ss_params(dir / "ss.csv", task.series(), 2);
  CHECK(back.s == ss.s);
  CHECK(back.S == ss.S);

  const RunResult a = run(task, "bs-static", Split::Test);
  const RunResult b = run(task, "bs-params:" + (dir / "z.csv").string(), Split::Test);
  CHECK(a.total_profit == b.total_profit);

  std::ofstream(dir / "orders.csv") << "t,warehouse,sku_id,quantity\n" << task.range(Split::Test).begin << ",0,"
                                    << task.series().sku_id(2) << ",9\n";
  auto ext = make_policy("external:" + (dir / "orders.csv").string(), task, Split::Test);
  RunOptions keep;
  keep.keep_records = true;
  const RunResult e = run(task, *ext, Split::Test, 0, keep);
  CHECK(e.records[0].order(0, 2) == 9);
  Quantity others = 0;
  for (const StepRecord& r : e.records) {
    for (Quantity q : r.order.flat()) others += q;
  }
  CHECK(others == 9);
  std::filesystem::remove_all(dir);
}

TEST_CASE("hindsight (s,S) is never worse than static on its own split") {
  TaskSpec spec = testing::small_spec("hs", 20, 1, 1000, 77);
  spec.accept = AcceptStrategy::AcceptAll;
  const Task task = build_task(spec);
  const RunResult stat = run(task, "ss-static", Split::Test);
  const RunResult hind = run(task, "ss-hindsight", Split::Test);
  CHECK(hind.total_profit >= stat.total_profit);
}
