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

#include <algorithm>
#include <cmath>
#include <limits>

#include "invsim/error.hpp"
#include "invsim/parallel.hpp"
#include "invsim/policy.hpp"

namespace invsim {

SkuStart sku_start(const EnvState& state, const SeriesSet& series, int i, int j) {
  SkuStart start;
  start.inventory = state.inventory(i, j);
  start.shipments = state.pipeline.shipments(i, j);
  const Quantity outstanding = state.outstanding(i, j);
  if (outstanding > 0 && state.t < series.horizon()) {
    const Step arrival = state.t + series.lead_time(state.t, j);
    auto it = std::find_if(start.shipments.begin(), start.shipments.end(),
                           [&](const Shipment& s) { return s.arrival_step >= arrival; });
    if (it != start.shipments.end() && it->arrival_step == arrival) {
      it->quantity += outstanding;
    } else {
      start.shipments.insert(it, Shipment{arrival, outstanding});
    }
  }
  return start;
}

namespace {

constexpr Quantity kUnlimited = std::numeric_limits<Quantity>::max() / 4;
constexpr std::size_t kMaxExhaustive = 512;

enum class Objective { IncomeLessProcurementAndHolding, Profit };

// Runs `copies` copies of SKU j over the view. order(k, position) gives the
// order of copy k from its position after this step's sales.
template <typename OrderRule>
std::vector<Money> run_sandbox(const SeriesView& view, int j, const CostParams& costs, const SkuStart& start,
                               const WarehouseConfig& room, int copies, Objective objective, OrderRule order) {
  std::vector<Money> total(copies);
  if (copies == 0 || view.range().empty()) return total;
  const std::vector<int> columns(copies, j);
  const SeriesSet local = view.extract(columns);
  const Step offset = view.range().begin;
  const Network network{{room}, {costs}};

  EnvState state = EnvState::empty(1, copies, 0);
  for (int k = 0; k < copies; ++k) {
    state.inventory(0, k) = start.inventory;
    for (const Shipment& s : start.shipments) {
      if (s.arrival_step < offset) throw ConfigError("sandbox start holds a shipment due before the range");
      state.pipeline.add(0, k, s.arrival_step - offset, s.quantity);
    }
  }

  Matrix<Quantity> orders(1, copies, 0);
  StepRecord record;
  for (Step t = 0; t < local.horizon(); ++t) {
    const Quantity d = local.demand(t, 0);
    for (int k = 0; k < copies; ++k) orders(0, k) = order(k, state.position_after_sales(0, k, d));
    step(state, orders, local, network, record);
    for (int k = 0; k < copies; ++k) {
      if (objective == Objective::Profit) {
        total[k] += record.profit(0, k);
      } else {
        total[k] += record.income(0, k) - record.procurement(0, k) - record.holding_cost(0, k);
      }
    }
  }
  return total;
}

template <typename T>
std::size_t argmax_first(const std::vector<T>& values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

}  // namespace

WarehouseConfig unlimited_warehouse() { return {kUnlimited, AcceptStrategy::AcceptAll}; }

WarehouseConfig sku_share(const WarehouseConfig& warehouse, int skus) {
  if (warehouse.accept == AcceptStrategy::AcceptAll) return unlimited_warehouse();
  if (skus < 1) throw ConfigError("sku_share needs at least one SKU");
  return {std::max<Quantity>(1, warehouse.capacity / skus), AcceptStrategy::PerSkuProportional};
}

std::vector<Money> evaluate_base_stock(const SeriesView& view, int j, const CostParams& costs,
                                       const SkuStart& start, const std::vector<Quantity>& levels) {
  return run_sandbox(view, j, costs, start, unlimited_warehouse(), static_cast<int>(levels.size()),
                     Objective::IncomeLessProcurementAndHolding,
                     [&](int k, Quantity position) { return base_stock_order(levels[k], position, 0); });
}

std::vector<Money> evaluate_ss(const SeriesView& view, int j, const CostParams& costs, const SkuStart& start,
                               const std::vector<SsPair>& pairs, const WarehouseConfig& room) {
  return run_sandbox(view, j, costs, start, room, static_cast<int>(pairs.size()), Objective::Profit,
                     [&](int k, Quantity position) { return ss_order(pairs[k].s, pairs[k].S, position, 0); });
}

std::vector<Quantity> base_stock_grid(const SeriesView& view, int j, double max_multiple) {
  const StepRange r = view.range();
  if (r.empty()) return {0};
  std::vector<Quantity> demand;
  demand.reserve(r.length());
  int max_lead = 0;
  for (Step t = r.begin; t < r.end; ++t) {
    demand.push_back(view.demand(t, j));
    max_lead = std::max(max_lead, view.lead_time(t, j));
  }
  std::sort(demand.begin(), demand.end());
  const auto q_index = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(demand.size()))) - 1;
  const double q99 = static_cast<double>(demand[std::min(q_index, demand.size() - 1)]);
  const double by_mean = std::ceil(max_multiple * view.mean_demand(j));
  const double by_quantile = std::ceil((max_lead + 3) * q99);
  const auto top = static_cast<Quantity>(std::min(by_mean, by_quantile));
  std::vector<Quantity> grid(static_cast<std::size_t>(top) + 1);
  for (Quantity z = 0; z <= top; ++z) grid[z] = z;
  return grid;
}

std::vector<SsPair> ss_grid(double mean_demand, double step, double max_multiple) {
  std::vector<Quantity> levels;
  const auto count = static_cast<int>(std::floor(max_multiple / step + 1e-9));
  for (int k = 0; k <= count; ++k) levels.push_back(static_cast<Quantity>(std::llround(k * step * mean_demand)));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<SsPair> pairs;
  for (std::size_t b = 0; b < levels.size(); ++b) {
    for (std::size_t a = 0; a <= b; ++a) pairs.push_back({levels[a], levels[b]});
  }
  return pairs;
}

Quantity solve_base_stock_sku(const SeriesView& view, int j, const CostParams& costs, const SkuStart& start,
                              const SolverSpec& solver) {
  const std::vector<Quantity> grid = base_stock_grid(view, j, solver.base_stock_max_multiple);
  if (grid.size() <= kMaxExhaustive) {
    const auto value = evaluate_base_stock(view, j, costs, start, grid);
    return grid[argmax_first(value)];
  }
  // Large grids: every stride-th level first, then each level around the
  // coarse winner.
  const Quantity top = grid.back();
  const Quantity stride = (top + kMaxExhaustive - 1) / static_cast<Quantity>(kMaxExhaustive / 2);
  std::vector<Quantity> coarse;
  for (Quantity z = 0; z <= top; z += stride) coarse.push_back(z);
  const Quantity centre = coarse[argmax_first(evaluate_base_stock(view, j, costs, start, coarse))];
  std::vector<Quantity> fine;
  for (Quantity z = std::max<Quantity>(0, centre - stride); z <= std::min(top, centre + stride); ++z) fine.push_back(z);
  return fine[argmax_first(evaluate_base_stock(view, j, costs, start, fine))];
}

SsPair solve_ss_sku(const SeriesView& view, int j, const CostParams& costs, const SkuStart& start,
                    const std::vector<SsPair>& grid, const WarehouseConfig& room) {
  if (grid.empty()) return {};
  const auto value = evaluate_ss(view, j, costs, start, grid, room);
  return grid[argmax_first(value)];
}

Matrix<Quantity> solve_base_stock(const SeriesView& view, const EnvState& start, const Network& network,
                                  const SolverSpec& solver) {
  const int m = start.echelons();
  const int n = start.skus();
  Matrix<Quantity> z(m, n, 0);
  if (view.range().empty()) throw ConfigError("base stock solver needs a non-empty range");
  parallel_for(n, [&](int j) {
    for (int i = 0; i < m; ++i) {
      z(i, j) = solve_base_stock_sku(view, j, network.costs[i], sku_start(start, view.series(), i, j), solver);
    }
  });
  return z;
}

SsLevels solve_ss(const SeriesView& view, const EnvState& start, const Network& network,
                  const std::vector<double>& grid_means, const SolverSpec& solver) {
  const int m = start.echelons();
  const int n = start.skus();
  if (view.range().empty()) throw ConfigError("(s,S) solver needs a non-empty range");
  if (static_cast<int>(grid_means.size()) != n) throw ConfigError("one grid mean per SKU is required");
  SsLevels out{Matrix<Quantity>(m, n, 0), Matrix<Quantity>(m, n, 0)};
  parallel_for(n, [&](int j) {
    const std::vector<SsPair> grid = ss_grid(grid_means[j], solver.ss_grid_step, solver.ss_grid_max);
    for (int i = 0; i < m; ++i) {
      const SsPair best = solve_ss_sku(view, j, network.costs[i], sku_start(start, view.series(), i, j), grid,
                                       sku_share(network.warehouses[i], n));
      out.s(i, j) = best.s;
      out.S(i, j) = best.S;
    }
  });
  return out;
}

}  // namespace invsim
