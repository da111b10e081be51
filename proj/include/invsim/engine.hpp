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

// Discrete-time multi-echelon inventory dynamics.
//
// Echelon 0 faces consumers; echelon i+1 supplies echelon i; the topmost
// echelon M-1 orders from an unconstrained factory. One call to step()
// runs, in order:
//
//   1. Replenish  orders R of echelon i become echelon i+1's demand at t+1;
//                 factory orders ship immediately.
//   2. Sell       S = min(D, I) with I the start-of-step inventory. Unmet
//                 demand is lost and charged backlog cost. Units sold by
//                 echelon i+1 ship to echelon i.
//   3. Arrive     shipments due at t leave the pipeline (A).
//   4. Receive    per warehouse, accept B = floor(A * gamma) where
//                 gamma = clamp((W - sum vol*I) / sum vol*A, 0, 1).
//   5. Update     I <- I - S + B.
//
// A shipment created at step t with lead time L is due at t + L. Lead time
// 0 is allowed: such units are received in the same step and can be sold
// from the next one.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "invsim/decimal.hpp"
#include "invsim/matrix.hpp"
#include "invsim/series.hpp"

namespace invsim {

struct Shipment {
  Step arrival_step = 0;
  Quantity quantity = 0;
  friend bool operator==(const Shipment&, const Shipment&) = default;
};

// Units in transit to each (warehouse, SKU), bucketed by arrival step in a
// ring of M x N slot matrices. The ring grows when a shipment lands beyond
// its current reach.
class Pipeline {
 public:
  Pipeline() = default;
  Pipeline(int echelons, int skus, Step first_arrival = 0, Step reach = 8);

  int echelons() const { return echelons_; }
  int skus() const { return skus_; }

  // quantity must be > 0 and arrival_step >= frontier().
  void add(int i, int j, Step arrival_step, Quantity quantity);

  // Removes everything due at `t` for warehouse i and writes it to `out`
  // (size N). Steps must be collected in increasing order; collecting t
  // moves the frontier to t, so nothing may be added for an earlier step.
  void collect_row(Step t, int i, std::span<Quantity> out);

  // Per-(i, j) equivalents for reference code.
  Quantity collect(Step t, int i, int j);

  Quantity in_transit(int i, int j) const { return in_transit_(i, j); }
  const Matrix<Quantity>& in_transit() const { return in_transit_; }

  // Pending shipments for (i, j) ordered by arrival step.
  std::vector<Shipment> shipments(int i, int j) const;

  // Earliest arrival step a new shipment may carry.
  Step frontier() const { return base_; }

  std::size_t bytes() const;

  // Same pending shipments for every (i, j); ring layout is ignored.
  friend bool operator==(const Pipeline& a, const Pipeline& b);

 private:
  std::size_t slot_offset(Step arrival) const {
    return static_cast<std::size_t>(arrival % reach_) * static_cast<std::size_t>(echelons_) * skus_;
  }
  void grow(Step needed_arrival);

  int echelons_ = 0;
  int skus_ = 0;
  Step reach_ = 0;  // number of slots
  Step base_ = 0;   // smallest arrival step that can still be stored
  std::vector<Quantity> slots_;
  Matrix<Quantity> in_transit_;
};

struct EnvState {
  Step t = 0;
  Matrix<Quantity> inventory;       // M x N, on hand
  Pipeline pipeline;                // M x N queues
  Matrix<Quantity> pending_demand;  // row i > 0: orders placed by echelon i-1 at t-1; row 0 unused

  int echelons() const { return inventory.rows(); }
  int skus() const { return inventory.cols(); }

  // Empty shelves, empty pipeline, clock at t0.
  static EnvState empty(int echelons, int skus, Step t0 = 0);

  // Orders placed by echelon i that its supplier has not yet processed
  // (zero for the topmost echelon, whose factory ships immediately).
  Quantity outstanding(int i, int j) const {
    return i + 1 < echelons() ? pending_demand(i + 1, j) : 0;
  }
  // On hand + in transit + outstanding.
  Quantity position(int i, int j) const {
    return inventory(i, j) + pipeline.in_transit(i, j) + outstanding(i, j);
  }
  // Position once this step's demand d has been served from stock. Order-up-to
  // rules compare their level against this value.
  Quantity position_after_sales(int i, int j, Quantity d) const {
    const Quantity on_hand = inventory(i, j);
    return on_hand - (d < on_hand ? d : on_hand) + pipeline.in_transit(i, j) + outstanding(i, j);
  }

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

// A unit cost that may depend on the step's selling price p and procurement
// cost c: fixed + per_price * p + per_cost * c, floored at zero.
struct LinearCost {
  Money fixed;
  Money per_price;
  Money per_cost;

  Money at(Money price, Money cost) const {
    if (per_price == Money{} && per_cost == Money{}) return fixed < Money{} ? Money{} : fixed;
    Money v = fixed + per_price.times(price) + per_cost.times(cost);
    return v < Money{} ? Money{} : v;
  }
  static LinearCost constant(Money value) { return {value, {}, {}}; }
  friend bool operator==(const LinearCost&, const LinearCost&) = default;
};

// Cost parameters of one echelon. Selling price and procurement cost come
// from the SKU series.
struct CostParams {
  LinearCost overflow;  // per unit not accepted
  LinearCost order;     // per order placed (R > 0)
  LinearCost holding;   // per unit on hand at end of step
  LinearCost backlog;   // per unit of unmet demand
  friend bool operator==(const CostParams&, const CostParams&) = default;
};

enum class AcceptStrategy {
  UniformProportional,  // ration by the common factor gamma
  RejectAll,            // accept everything if it fits, otherwise nothing
  AcceptAll,            // ignore capacity
  // Each SKU rationed against the whole capacity as if it were alone:
  // gamma_j = clamp((W - vol_j*I_j) / vol_j*A_j, 0, 1). Models a per-SKU
  // capacity share in single-SKU sandboxes.
  PerSkuProportional,
};

struct WarehouseConfig {
  Quantity capacity = 1;  // volume units, > 0
  AcceptStrategy accept = AcceptStrategy::UniformProportional;
  friend bool operator==(const WarehouseConfig&, const WarehouseConfig&) = default;
};

// Static description of the supply chain: one entry per echelon.
struct Network {
  std::vector<WarehouseConfig> warehouses;
  std::vector<CostParams> costs;

  int echelons() const { return static_cast<int>(warehouses.size()); }
  friend bool operator==(const Network&, const Network&) = default;
};

// Per-step ledger. Quantity matrices are M x N; `inventory` and `in_transit`
// are end-of-step values. `accept_num / accept_den` is the clamped receive
// ratio gamma of each warehouse (den 1 when nothing arrived); under
// PerSkuProportional it is the accepted share of arriving volume.
struct StepRecord {
  Step t = 0;
  Matrix<Quantity> demand, sale, arrival, received, order, inventory, in_transit;
  Matrix<Money> income, procurement, overflow_cost, order_cost, holding_cost, backlog_cost, profit;
  std::vector<Quantity> accept_num, accept_den;

  void reshape(int echelons, int skus);
  Quantity overflow(int i, int j) const { return arrival(i, j) - received(i, j); }
  Money total_profit() const;
  std::size_t bytes() const;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct Flows {
  Quantity demand = 0;
  Quantity sale = 0;
  Quantity arrival = 0;
  Quantity received = 0;
  Quantity order = 0;
  Quantity end_inventory = 0;
};

struct UnitEconomics {
  Money price, cost, overflow, order, holding, backlog;
};

struct ProfitBreakdown {
  Money income, procurement, overflow, order, holding, backlog, profit;
  friend bool operator==(const ProfitBreakdown&, const ProfitBreakdown&) = default;
};

// p*S - c*S - v*(A-B) - o*[R>0] - h*I - k*(D-S), exactly.
ProfitBreakdown profit(const Flows& flows, const UnitEconomics& unit);

// Resolves the per-unit values for warehouse i, SKU j at step t.
UnitEconomics unit_economics(const SeriesSet& series, const CostParams& costs, Step t, int j);

// Vectorized engine. Advances `state` by one step and overwrites `record`.
// Throws ConfigError on shape mismatches, negative orders, or a step past
// the series horizon; state is untouched in that case.
void step(EnvState& state, const Matrix<Quantity>& orders, const SeriesSet& series,
          const Network& network, StepRecord& record);

// Independent per-SKU loop implementation of the same contract.
void step_scalar_reference(EnvState& state, const Matrix<Quantity>& orders, const SeriesSet& series,
                           const Network& network, StepRecord& record);

// Value-returning conveniences.
StepRecord step(EnvState& state, const Matrix<Quantity>& orders, const SeriesSet& series,
                const Network& network);
StepRecord step_scalar_reference(EnvState& state, const Matrix<Quantity>& orders,
                                 const SeriesSet& series, const Network& network);

// Demand each (warehouse, SKU) faces at state.t: consumer demand from the
// series for echelon 0, downstream orders of the previous step above it.
Matrix<Quantity> current_demand(const EnvState& state, const SeriesSet& series);

enum class EngineKind { Matrix, ScalarReference };

// Built-in warmup rule: order up to round(mean_demand * (mean_lead_time + 1))
// whenever the position after this step's sales falls below it. Means are
// taken over the warmup window's consumer demand and lead times, per SKU.
struct WarmupRule {
  std::function<void(const StepRecord&)> on_step;  // optional observer
};

inline constexpr Step kDefaultWarmupLength = 100;

// Runs `length` steps from `state` under the rule, discarding profit.
EnvState warmup(EnvState state, const SeriesSet& series, const Network& network, Step length,
                const WarmupRule& rule = {}, EngineKind engine = EngineKind::Matrix);

// Levels the default rule orders up to, per (echelon, SKU).
Matrix<Quantity> warmup_levels(const SeriesSet& series, int echelons, StepRange window);

}  // namespace invsim
