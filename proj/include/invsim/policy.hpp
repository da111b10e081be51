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

// Replenishment policies and their per-SKU solvers.
//
// Order-up-to rules look at the position a warehouse will hold once this
// step's demand has been served from stock (EnvState::position_after_sales),
// so a level z keeps z units on hand, in transit or on order after every
// step's sales.

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "invsim/engine.hpp"
#include "invsim/task.hpp"

namespace invsim {

// max(0, z - I - T)
inline Quantity base_stock_order(Quantity z, Quantity inventory, Quantity in_transit) {
  const Quantity gap = z - inventory - in_transit;
  return gap > 0 ? gap : 0;
}

// S - I - T when I + T <= s, else 0.
inline Quantity ss_order(Quantity s, Quantity S, Quantity inventory, Quantity in_transit) {
  const Quantity position = inventory + in_transit;
  return position <= s ? S - position : 0;
}

// --- Single-SKU sandbox ------------------------------------------------------

// Starting stock of one (warehouse, SKU): on hand plus pending shipments
// (absolute arrival steps). Orders the supplier has not processed yet are
// treated as shipments leaving at the range start.
struct SkuStart {
  Quantity inventory = 0;
  std::vector<Shipment> shipments;
};

SkuStart sku_start(const EnvState& state, const SeriesSet& series, int i, int j);

// Simulates `levels.size()` copies of SKU j side by side over view.range(),
// ignoring capacity, and returns income - procurement - holding per copy.
std::vector<Money> evaluate_base_stock(const SeriesView& view, int j, const CostParams& costs,
                                       const SkuStart& start, const std::vector<Quantity>& levels);

struct SsPair {
  Quantity s = 0;
  Quantity S = 0;
  friend bool operator==(const SsPair&, const SsPair&) = default;
};

// Unlimited room: the base-stock program has no capacity term.
WarehouseConfig unlimited_warehouse();
// One SKU's share of `warehouse` when it holds `skus` SKUs: capacity / skus,
// rationed per SKU. AcceptAll stays unlimited.
WarehouseConfig sku_share(const WarehouseConfig& warehouse, int skus);

// Same sandbox, full step profit per copy (overflow included), each copy
// stored in its own `room`.
std::vector<Money> evaluate_ss(const SeriesView& view, int j, const CostParams& costs, const SkuStart& start,
                               const std::vector<SsPair>& pairs, const WarehouseConfig& room = unlimited_warehouse());

// Candidate levels for SKU j: 0 .. min(ceil(max_multiple * mean),
// ceil((max lead time + 3) * q99)) with mean, q99 and lead time taken over
// the view.
std::vector<Quantity> base_stock_grid(const SeriesView& view, int j, double max_multiple);

// Pairs s <= S drawn from round(k * step * mean), k = 0 .. max/step, sorted
// by S then s, duplicates removed.
std::vector<SsPair> ss_grid(double mean_demand, double step, double max_multiple);

// Best level for one SKU; ties go to the smaller z.
Quantity solve_base_stock_sku(const SeriesView& view, int j, const CostParams& costs, const SkuStart& start,
                              const SolverSpec& solver);
// Best pair among `grid` for one SKU; ties go to the smaller S, then s.
SsPair solve_ss_sku(const SeriesView& view, int j, const CostParams& costs, const SkuStart& start,
                    const std::vector<SsPair>& grid, const WarehouseConfig& room = unlimited_warehouse());

// Per-(echelon, SKU) solves, run in parallel across SKUs. Every echelon is
// fitted against consumer demand with its own costs and starting stock.
// Base stock ignores capacity; (s,S) sees each SKU's share of it
// (sku_share), so neither reads another SKU's series.
Matrix<Quantity> solve_base_stock(const SeriesView& view, const EnvState& start, const Network& network,
                                  const SolverSpec& solver);
struct SsLevels {
  Matrix<Quantity> s, S;
};
// `grid_means[j]` sets the scale of SKU j's grid.
SsLevels solve_ss(const SeriesView& view, const EnvState& start, const Network& network,
                  const std::vector<double>& grid_means, const SolverSpec& solver);

// --- Policies ----------------------------------------------------------------

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  // `demand` is what each warehouse faces at state.t (see current_demand).
  virtual void orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) = 0;
  virtual void observe(const StepRecord&) {}
};

class NeverPolicy : public Policy {
 public:
  std::string name() const override { return "never"; }
  void orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) override;
};

class BaseStockPolicy : public Policy {
 public:
  BaseStockPolicy(Matrix<Quantity> levels, std::string name = "bs-static")
      : levels_(std::move(levels)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  void orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) override;
  const Matrix<Quantity>& levels() const { return levels_; }

 protected:
  Matrix<Quantity> levels_;
  std::string name_;
};

// Starts from train-fitted levels and refits on [0, t) every `interval`
// steps after `first_step`.
class DynamicBaseStockPolicy : public BaseStockPolicy {
 public:
  DynamicBaseStockPolicy(const Task& task, Matrix<Quantity> initial, Step first_step, Step interval);
  void orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) override;
  // (step, levels) for every refit so far.
  const std::vector<std::pair<Step, Matrix<Quantity>>>& refits() const { return refits_; }

 private:
  const Task* task_;
  Step next_refresh_;
  Step interval_;
  std::vector<std::pair<Step, Matrix<Quantity>>> refits_;
};

class SsPolicy : public Policy {
 public:
  SsPolicy(SsLevels levels, std::string name) : levels_(std::move(levels)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  void orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) override;
  const SsLevels& levels() const { return levels_; }

 private:
  SsLevels levels_;
  std::string name_;
};

// Replays a CSV of `t,warehouse,sku_id,quantity`; steps or cells not listed
// order nothing.
class ExternalPolicy : public Policy {
 public:
  ExternalPolicy(const std::filesystem::path& path, const SeriesSet& series, int echelons);
  std::string name() const override { return "external:" + path_; }
  void orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) override;

 private:
  std::string path_;
  std::map<Step, std::vector<std::pair<std::size_t, Quantity>>> by_step_;  // flat (i * N + j)
};

// Fitted policies for a task. Static modes fit on the train range from the
// train start state; hindsight fits on `evaluated`. The (s,S) grid of both
// modes is scaled by train-range mean demand, so they search the same pairs.
Matrix<Quantity> fit_base_stock_static(const Task& task);
SsLevels fit_ss_static(const Task& task);
SsLevels fit_ss_hindsight(const Task& task, Split evaluated);
std::vector<double> train_mean_demand(const Task& task);

// "never", "bs-static", "bs-dynamic", "ss-static", "ss-hindsight",
// "bs-warmup" (order up to the warmup levels, no fitting),
// "external:<csv>", "bs-params:<csv>", "ss-params:<csv>".
std::unique_ptr<Policy> make_policy(const std::string& spec, const Task& task, Split split);

// Parameter files: `warehouse,sku_id,z` and `warehouse,sku_id,s,S`.
void write_base_stock_params(const Matrix<Quantity>& z, const SeriesSet& series, const std::filesystem::path& path);
void write_ss_params(const SsLevels& levels, const SeriesSet& series, const std::filesystem::path& path);
Matrix<Quantity> read_base_stock_params(const std::filesystem::path& path, const SeriesSet& series, int echelons);
SsLevels read_ss_params(const std::filesystem::path& path, const SeriesSet& series, int echelons);

}  // namespace invsim
