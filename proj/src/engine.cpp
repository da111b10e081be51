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

#include "invsim/engine.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "invsim/error.hpp"

namespace invsim {

// --- Pipeline --------------------------------------------------------------

Pipeline::Pipeline(int echelons, int skus, Step first_arrival, Step reach)
    : echelons_(echelons),
      skus_(skus),
      reach_(std::max<Step>(1, reach)),
      base_(first_arrival),
      slots_(static_cast<std::size_t>(reach_) * echelons * skus, 0),
      in_transit_(echelons, skus, 0) {}

void Pipeline::grow(Step needed_arrival) {
  const auto needed = static_cast<std::uint64_t>(needed_arrival - base_ + 1);
  const auto new_reach = static_cast<Step>(std::bit_ceil(std::max<std::uint64_t>(needed, 2 * reach_)));
  const std::size_t plane = static_cast<std::size_t>(echelons_) * skus_;
  std::vector<Quantity> moved(static_cast<std::size_t>(new_reach) * plane, 0);
  for (Step a = base_; a < base_ + reach_; ++a) {
    const std::size_t from = slot_offset(a);
    const std::size_t to = static_cast<std::size_t>(a % new_reach) * plane;
    std::copy_n(slots_.begin() + static_cast<std::ptrdiff_t>(from), plane,
                moved.begin() + static_cast<std::ptrdiff_t>(to));
  }
  slots_ = std::move(moved);
  reach_ = new_reach;
}

void Pipeline::add(int i, int j, Step arrival_step, Quantity quantity) {
  if (quantity <= 0) return;
  if (arrival_step < base_) {
    throw ConfigError("shipment arriving at " + std::to_string(arrival_step) +
                      " is behind the pipeline frontier " + std::to_string(base_));
  }
  if (arrival_step >= base_ + reach_) grow(arrival_step);
  slots_[slot_offset(arrival_step) + static_cast<std::size_t>(i) * skus_ + j] += quantity;
  in_transit_(i, j) += quantity;
}

void Pipeline::collect_row(Step t, int i, std::span<Quantity> out) {
  if (t < base_) throw ConfigError("pipeline steps must be collected in increasing order");
  if (t >= base_ + reach_) {
    // Nothing can be due this far out; everything before it is gone too.
    std::fill(out.begin(), out.end(), 0);
    base_ = t;
    return;
  }
  base_ = t;
  Quantity* slot = slots_.data() + slot_offset(t) + static_cast<std::size_t>(i) * skus_;
  auto transit = in_transit_.row(i);
  for (int j = 0; j < skus_; ++j) {
    out[j] = slot[j];
    transit[j] -= slot[j];
    slot[j] = 0;
  }
}

Quantity Pipeline::collect(Step t, int i, int j) {
  if (t < base_) throw ConfigError("pipeline steps must be collected in increasing order");
  if (t >= base_ + reach_) {
    base_ = t;
    return 0;
  }
  base_ = t;
  Quantity& cell = slots_[slot_offset(t) + static_cast<std::size_t>(i) * skus_ + j];
  const Quantity q = cell;
  cell = 0;
  in_transit_(i, j) -= q;
  return q;
}

std::vector<Shipment> Pipeline::shipments(int i, int j) const {
  std::vector<Shipment> out;
  for (Step a = base_; a < base_ + reach_; ++a) {
    const Quantity q = slots_[slot_offset(a) + static_cast<std::size_t>(i) * skus_ + j];
    if (q != 0) out.push_back({a, q});
  }
  return out;
}

std::size_t Pipeline::bytes() const {
  return slots_.size() * sizeof(Quantity) + in_transit_.size() * sizeof(Quantity);
}

bool operator==(const Pipeline& a, const Pipeline& b) {
  if (a.echelons_ != b.echelons_ || a.skus_ != b.skus_ || !(a.in_transit_ == b.in_transit_)) {
    return false;
  }
  for (int i = 0; i < a.echelons_; ++i) {
    for (int j = 0; j < a.skus_; ++j) {
      if (a.shipments(i, j) != b.shipments(i, j)) return false;
    }
  }
  return true;
}

// --- State and records -----------------------------------------------------

EnvState EnvState::empty(int echelons, int skus, Step t0) {
  if (echelons < 1 || skus < 1) throw ConfigError("need at least one echelon and one SKU");
  EnvState s;
  s.t = t0;
  s.inventory = Matrix<Quantity>(echelons, skus, 0);
  s.pipeline = Pipeline(echelons, skus, t0);
  s.pending_demand = Matrix<Quantity>(echelons, skus, 0);
  return s;
}

void StepRecord::reshape(int echelons, int skus) {
  if (demand.same_shape(echelons, skus)) return;
  for (auto* m : {&demand, &sale, &arrival, &received, &order, &inventory, &in_transit}) {
    m->resize(echelons, skus);
  }
  for (auto* m : {&income, &procurement, &overflow_cost, &order_cost, &holding_cost, &backlog_cost,
                  &profit}) {
    m->resize(echelons, skus);
  }
  accept_num.assign(static_cast<std::size_t>(echelons), 1);
  accept_den.assign(static_cast<std::size_t>(echelons), 1);
}

Money StepRecord::total_profit() const {
  Money total;
  for (Money p : profit.flat()) total += p;
  return total;
}

std::size_t StepRecord::bytes() const {
  return demand.size() * (7 * sizeof(Quantity) + 7 * sizeof(Money)) +
         accept_num.size() * 2 * sizeof(Quantity);
}

// --- Profit ----------------------------------------------------------------

ProfitBreakdown profit(const Flows& f, const UnitEconomics& u) {
  ProfitBreakdown out;
  out.income = u.price * f.sale;
  out.procurement = u.cost * f.sale;
  out.overflow = u.overflow * (f.arrival - f.received);
  out.order = f.order > 0 ? u.order : Money{};
  out.holding = u.holding * f.end_inventory;
  out.backlog = u.backlog * (f.demand - f.sale);
  out.profit = out.income - out.procurement - out.overflow - out.order - out.holding - out.backlog;
  return out;
}

UnitEconomics unit_economics(const SeriesSet& series, const CostParams& costs, Step t, int j) {
  const Money p = series.price(t, j);
  const Money c = series.cost(t, j);
  return {p, c, costs.overflow.at(p, c), costs.order.at(p, c), costs.holding.at(p, c),
          costs.backlog.at(p, c)};
}

Matrix<Quantity> current_demand(const EnvState& state, const SeriesSet& series) {
  Matrix<Quantity> d = state.pending_demand;
  const auto consumer = series.demand_row(state.t);
  std::copy(consumer.begin(), consumer.end(), d.row(0).begin());
  return d;
}

// --- Validation shared by both engines -------------------------------------

namespace detail {

void validate_step_inputs(const EnvState& state, const Matrix<Quantity>& orders,
                          const SeriesSet& series, const Network& network) {
  const int m = state.echelons();
  const int n = state.skus();
  const auto shape = [](int r, int c) { return std::to_string(r) + "x" + std::to_string(c); };
  if (network.echelons() != m || static_cast<int>(network.costs.size()) != m) {
    throw ConfigError("network describes " + std::to_string(network.echelons()) +
                      " warehouses and " + std::to_string(network.costs.size()) +
                      " cost sets, state has " + std::to_string(m) + " echelons");
  }
  if (!orders.same_shape(m, n)) {
    throw ConfigError("orders are " + shape(orders.rows(), orders.cols()) + ", state is " + shape(m, n));
  }
  if (!state.pending_demand.same_shape(m, n) || state.pipeline.echelons() != m ||
      state.pipeline.skus() != n) {
    throw ConfigError("inconsistent state shapes");
  }
  if (series.skus() != n) {
    throw ConfigError("series has " + std::to_string(series.skus()) + " SKUs, state has " +
                      std::to_string(n));
  }
  if (state.t < 0 || state.t >= series.horizon()) {
    throw ConfigError("step " + std::to_string(state.t) + " outside series horizon " +
                      std::to_string(series.horizon()));
  }
  if (state.pipeline.frontier() > state.t) {
    throw ConfigError("pipeline frontier is ahead of the clock");
  }
  for (int i = 0; i < m; ++i) {
    if (network.warehouses[i].capacity <= 0) {
      throw ConfigError("warehouse " + std::to_string(i) + " capacity must be positive");
    }
    for (int j = 0; j < n; ++j) {
      if (orders(i, j) < 0) {
        throw ConfigError("negative order " + std::to_string(orders(i, j)) + " at warehouse " +
                          std::to_string(i) + ", SKU " + std::to_string(j));
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    if (series.lead_time(state.t, j) < 0) throw ConfigError("negative lead time");
    if (series.volume(j) < 1) throw ConfigError("unit volume must be positive");
  }
}

}  // namespace detail

// --- Matrix engine ---------------------------------------------------------

namespace {

// Accepted units for one warehouse row, per strategy. Returns gamma as a
// clamped fraction num/den.
std::pair<Quantity, Quantity> receive_row(std::span<const Quantity> start_inventory,
                                          std::span<const Quantity> arrival,
                                          std::span<const Quantity> volume,
                                          const WarehouseConfig& warehouse,
                                          std::span<Quantity> received) {
  const std::size_t n = arrival.size();
  Quantity used = 0;
  Quantity requested = 0;
  for (std::size_t j = 0; j < n; ++j) {
    used += volume[j] * start_inventory[j];
    requested += volume[j] * arrival[j];
  }
  const Quantity free_space = warehouse.capacity - used;

  const auto accept_all = [&] {
    std::copy(arrival.begin(), arrival.end(), received.begin());
    return std::pair<Quantity, Quantity>{1, 1};
  };
  const auto reject_all = [&] {
    std::fill(received.begin(), received.end(), 0);
    return std::pair<Quantity, Quantity>{0, 1};
  };

  if (requested == 0) return accept_all();
  switch (warehouse.accept) {
    case AcceptStrategy::AcceptAll:
      return accept_all();
    case AcceptStrategy::RejectAll:
      return free_space >= requested ? accept_all() : reject_all();
    case AcceptStrategy::PerSkuProportional: {
      Quantity taken = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const Quantity want = volume[j] * arrival[j];
        const Quantity room = warehouse.capacity - volume[j] * start_inventory[j];
        if (want == 0 || room >= want) {
          received[j] = arrival[j];
        } else if (room <= 0) {
          received[j] = 0;
        } else {
          received[j] = static_cast<Quantity>(static_cast<__int128>(arrival[j]) * room / want);
        }
        taken += volume[j] * received[j];
      }
      return {taken, requested};
    }
    case AcceptStrategy::UniformProportional:
      break;
  }
  if (free_space >= requested) return accept_all();
  if (free_space <= 0) return reject_all();
  for (std::size_t j = 0; j < n; ++j) {
    received[j] = static_cast<Quantity>(static_cast<__int128>(arrival[j]) * free_space / requested);
  }
  return {free_space, requested};
}

}  // namespace

void step(EnvState& state, const Matrix<Quantity>& orders, const SeriesSet& series,
          const Network& network, StepRecord& record) {
  detail::validate_step_inputs(state, orders, series, network);
  const int m = state.echelons();
  const int n = state.skus();
  const Step t = state.t;
  record.reshape(m, n);
  record.t = t;

  const auto lead = series.lead_time_row(t);
  const auto volume = series.volumes();
  const auto price = series.price_row(t);
  const auto cost = series.cost_row(t);
  Pipeline& pipeline = state.pipeline;

  // 1. Replenish. The factory fulfils the topmost echelon's orders now.
  record.order = orders;
  {
    const auto top = orders.row(m - 1);
    for (int j = 0; j < n; ++j) {
      if (top[j] > 0) pipeline.add(m - 1, j, t + lead[j], top[j]);
    }
  }

  // 2. Sell.
  for (int i = 0; i < m; ++i) {
    const auto demand = i == 0 ? series.demand_row(t) : state.pending_demand.row(i);
    const auto stock = state.inventory.row(i);
    auto d = record.demand.row(i);
    auto s = record.sale.row(i);
    for (int j = 0; j < n; ++j) {
      d[j] = demand[j];
      s[j] = std::min(demand[j], stock[j]);
    }
  }
  for (int i = 0; i + 1 < m; ++i) {
    const auto shipped = record.sale.row(i + 1);
    for (int j = 0; j < n; ++j) {
      if (shipped[j] > 0) pipeline.add(i, j, t + lead[j], shipped[j]);
    }
  }

  // 3. Arrive, 4. Receive.
  for (int i = 0; i < m; ++i) {
    pipeline.collect_row(t, i, record.arrival.row(i));
    const auto [num, den] = receive_row(state.inventory.row(i), record.arrival.row(i), volume,
                                        network.warehouses[i], record.received.row(i));
    record.accept_num[i] = num;
    record.accept_den[i] = den;
  }

  // 5. Update.
  for (int i = 0; i < m; ++i) {
    auto stock = state.inventory.row(i);
    const auto s = record.sale.row(i);
    const auto b = record.received.row(i);
    for (int j = 0; j < n; ++j) stock[j] += b[j] - s[j];
  }
  for (int i = m - 1; i >= 1; --i) {
    std::copy_n(orders.row(i - 1).begin(), n, state.pending_demand.row(i).begin());
  }
  record.inventory = state.inventory;
  record.in_transit = pipeline.in_transit();

  // Profit.
  for (int i = 0; i < m; ++i) {
    const CostParams& c = network.costs[i];
    const auto d = record.demand.row(i);
    const auto s = record.sale.row(i);
    const auto a = record.arrival.row(i);
    const auto b = record.received.row(i);
    const auto r = orders.row(i);
    const auto stock = state.inventory.row(i);
    auto income = record.income.row(i);
    auto procurement = record.procurement.row(i);
    auto overflow = record.overflow_cost.row(i);
    auto ordering = record.order_cost.row(i);
    auto holding = record.holding_cost.row(i);
    auto backlog = record.backlog_cost.row(i);
    auto total = record.profit.row(i);
    for (int j = 0; j < n; ++j) {
      income[j] = price[j] * s[j];
      procurement[j] = cost[j] * s[j];
      overflow[j] = a[j] == b[j] ? Money{} : c.overflow.at(price[j], cost[j]) * (a[j] - b[j]);
      ordering[j] = r[j] > 0 ? c.order.at(price[j], cost[j]) : Money{};
      holding[j] = stock[j] == 0 ? Money{} : c.holding.at(price[j], cost[j]) * stock[j];
      backlog[j] = d[j] == s[j] ? Money{} : c.backlog.at(price[j], cost[j]) * (d[j] - s[j]);
      total[j] = income[j] - procurement[j] - overflow[j] - ordering[j] - holding[j] - backlog[j];
    }
  }

  state.t = t + 1;
}

StepRecord step(EnvState& state, const Matrix<Quantity>& orders, const SeriesSet& series,
                const Network& network) {
  StepRecord record;
  step(state, orders, series, network, record);
  return record;
}

}  // namespace invsim
