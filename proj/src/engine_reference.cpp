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

// Reference engine: one (warehouse, SKU) at a time, shipment queues held in
// ordered maps, no row buffers shared with the matrix engine. It exists to
// be compared against step() and is not tuned for speed.

#include <map>
#include <vector>

#include "invsim/engine.hpp"
#include "invsim/error.hpp"

namespace invsim {

namespace detail {
void validate_step_inputs(const EnvState& state, const Matrix<Quantity>& orders,
                          const SeriesSet& series, const Network& network);
}

namespace {

struct Cell {
  std::map<Step, Quantity> queue;
  Quantity start_inventory = 0;
  Quantity demand = 0;
  Quantity sale = 0;
  Quantity arrival = 0;
  Quantity received = 0;
  Quantity end_inventory = 0;
};

}  // namespace

void step_scalar_reference(EnvState& state, const Matrix<Quantity>& orders, const SeriesSet& series,
                           const Network& network, StepRecord& record) {
  detail::validate_step_inputs(state, orders, series, network);
  const int warehouses = state.echelons();
  const int skus = state.skus();
  const Step now = state.t;

  std::vector<std::vector<Cell>> cells(warehouses, std::vector<Cell>(skus));
  for (int i = 0; i < warehouses; ++i) {
    for (int j = 0; j < skus; ++j) {
      Cell& cell = cells[i][j];
      for (const Shipment& s : state.pipeline.shipments(i, j)) cell.queue[s.arrival_step] += s.quantity;
      cell.start_inventory = state.inventory(i, j);
    }
  }

  for (int j = 0; j < skus; ++j) {
    const int lead = series.lead_time(now, j);
    // Factory orders ship at once.
    const Quantity factory = orders(warehouses - 1, j);
    if (factory > 0) cells[warehouses - 1][j].queue[now + lead] += factory;

    for (int i = 0; i < warehouses; ++i) {
      Cell& cell = cells[i][j];
      cell.demand = i == 0 ? series.demand(now, j) : state.pending_demand(i, j);
      cell.sale = cell.demand < cell.start_inventory ? cell.demand : cell.start_inventory;
    }
    for (int i = 1; i < warehouses; ++i) {
      if (cells[i][j].sale > 0) cells[i - 1][j].queue[now + lead] += cells[i][j].sale;
    }
    for (int i = 0; i < warehouses; ++i) {
      Cell& cell = cells[i][j];
      auto due = cell.queue.find(now);
      if (due != cell.queue.end()) {
        cell.arrival = due->second;
        cell.queue.erase(due);
      }
    }
  }

  record.reshape(warehouses, skus);
  record.t = now;
  for (int i = 0; i < warehouses; ++i) {
    const WarehouseConfig& w = network.warehouses[i];
    Quantity occupied = 0;
    Quantity incoming = 0;
    for (int j = 0; j < skus; ++j) {
      occupied += series.volume(j) * cells[i][j].start_inventory;
      incoming += series.volume(j) * cells[i][j].arrival;
    }
    const Quantity room = w.capacity - occupied;

    if (w.accept == AcceptStrategy::PerSkuProportional && incoming > 0) {
      Quantity taken = 0;
      for (int j = 0; j < skus; ++j) {
        Cell& cell = cells[i][j];
        const Quantity vol = series.volume(j);
        const Quantity own_room = w.capacity - vol * cell.start_inventory;
        if (own_room >= vol * cell.arrival) {
          cell.received = cell.arrival;
        } else if (own_room <= 0) {
          cell.received = 0;
        } else {
          cell.received = static_cast<Quantity>(static_cast<__int128>(cell.arrival) * own_room / (vol * cell.arrival));
        }
        taken += vol * cell.received;
        cell.end_inventory = cell.start_inventory - cell.sale + cell.received;
      }
      record.accept_num[i] = taken;
      record.accept_den[i] = incoming;
      continue;
    }

    // gamma = num / den, clamped to [0, 1].
    Quantity num = 1;
    Quantity den = 1;
    if (incoming > 0) {
      if (w.accept == AcceptStrategy::AcceptAll || room >= incoming) {
        num = den = 1;
      } else if (w.accept == AcceptStrategy::RejectAll || room <= 0) {
        num = 0;
      } else {
        num = room;
        den = incoming;
      }
    }
    record.accept_num[i] = num;
    record.accept_den[i] = den;

    for (int j = 0; j < skus; ++j) {
      Cell& cell = cells[i][j];
      if (num == den) {
        cell.received = cell.arrival;
      } else {
        __int128 scaled = static_cast<__int128>(cell.arrival) * num;
        cell.received = static_cast<Quantity>(scaled / den);
      }
      cell.end_inventory = cell.start_inventory - cell.sale + cell.received;
    }
  }

  Pipeline next(warehouses, skus, now);
  for (int i = 0; i < warehouses; ++i) {
    for (int j = 0; j < skus; ++j) {
      const Cell& cell = cells[i][j];
      for (const auto& [when, quantity] : cell.queue) next.add(i, j, when, quantity);

      const UnitEconomics unit = unit_economics(series, network.costs[i], now, j);
      Money income = unit.price * cell.sale;
      Money procurement = unit.cost * cell.sale;
      Money overflow = unit.overflow * (cell.arrival - cell.received);
      Money ordering = orders(i, j) > 0 ? unit.order : Money{};
      Money holding = unit.holding * cell.end_inventory;
      Money backlog = unit.backlog * (cell.demand - cell.sale);

      record.demand(i, j) = cell.demand;
      record.sale(i, j) = cell.sale;
      record.arrival(i, j) = cell.arrival;
      record.received(i, j) = cell.received;
      record.order(i, j) = orders(i, j);
      record.inventory(i, j) = cell.end_inventory;
      record.income(i, j) = income;
      record.procurement(i, j) = procurement;
      record.overflow_cost(i, j) = overflow;
      record.order_cost(i, j) = ordering;
      record.holding_cost(i, j) = holding;
      record.backlog_cost(i, j) = backlog;
      record.profit(i, j) = income - procurement - overflow - ordering - holding - backlog;
    }
  }
  for (int i = 0; i < warehouses; ++i) {
    for (int j = 0; j < skus; ++j) record.in_transit(i, j) = next.in_transit(i, j);
  }

  for (int i = 0; i < warehouses; ++i) {
    for (int j = 0; j < skus; ++j) {
      state.inventory(i, j) = cells[i][j].end_inventory;
      if (i > 0) state.pending_demand(i, j) = orders(i - 1, j);
    }
  }
  state.pipeline = std::move(next);
  state.t = now + 1;
}

StepRecord step_scalar_reference(EnvState& state, const Matrix<Quantity>& orders,
                                 const SeriesSet& series, const Network& network) {
  StepRecord record;
  step_scalar_reference(state, orders, series, network, record);
  return record;
}

}  // namespace invsim
