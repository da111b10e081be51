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

// Agent view of a task: one agent per (warehouse, SKU), indexed
// a = i * N + j. Actions pick a multiplier of the agent's trailing mean
// demand; rewards are the agent's step profit.

#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "invsim/engine.hpp"
#include "invsim/task.hpp"

namespace invsim {

// All available features, in manifest order.
enum class Feature {
  InStock,
  SellingPrice,
  ProcurementCost,
  DemandMean,
  DemandStd,
  HoldingCost,
  OrderCost,
  LeadTime,
  TotalInStock,
  RemainingSpace,
  TotalProfitInStock,
  TotalInTransit,
  TotalProfitInTransit,
};
inline constexpr int kFeatureCount = 13;

const char* feature_name(Feature f);
Feature parse_feature(std::string_view name);
bool is_warehouse_feature(Feature f);

struct ObservationSpec {
  std::vector<Feature> features;
  int demand_window = 21;  // trailing steps behind DemandMean / DemandStd

  // Every feature: 8 per SKU, then 5 per warehouse.
  static ObservationSpec standard();
  int size() const { return static_cast<int>(features.size()); }
  int sku_feature_count() const;
  int warehouse_feature_count() const;
};

struct ActionSpace {
  std::vector<Money> multipliers;  // ascending, starts at 0
  int window = 21;                 // H

  int size() const { return static_cast<int>(multipliers.size()); }
};

// Mean and standard deviation of everything pushed so far, or of the last
// `window` values when window > 0.
class RollingStats {
 public:
  explicit RollingStats(std::size_t window = 0) : window_(window) {}
  void push(double x);
  std::size_t count() const { return count_; }  // values pushed so far
  double mean() const;
  double stddev() const;

 private:
  std::size_t window_;
  std::deque<double> recent_;
  std::size_t count_ = 0;
  // Welford accumulators for the unbounded case.
  double w_mean_ = 0.0;
  double w_m2_ = 0.0;
};

inline constexpr double kNormalizeEpsilon = 1e-8;

// (x - mean) / max(std, eps); 0 before any value has been pushed.
double normalize(double x, const RollingStats& stats);

// Trailing per-agent demand: consumer demand at echelon 0, downstream orders
// received above it.
class DemandHistory {
 public:
  DemandHistory() = default;
  DemandHistory(int agents, int capacity);
  void push(const Matrix<Quantity>& demand);
  int agents() const { return agents_; }
  // Last min(window, available) values of agent a.
  std::size_t available(int a, int window) const;
  // Sum of the last min(window, available) values.
  Quantity sum(int a, int window) const;
  double mean(int a, int window) const;
  double stddev(int a, int window) const;

 private:
  int agents_ = 0;
  int capacity_ = 0;
  std::size_t pushed_ = 0;
  std::vector<Quantity> ring_;  // capacity rows of `agents` values
  Quantity value(int a, std::size_t back) const;
};

// round(multiplier * sum / count), half away from zero; 0 with no history.
Quantity convert_multiplier(Money multiplier, Quantity demand_sum, std::size_t count);

struct EpisodeOptions {
  Split split = Split::Test;
  std::uint64_t seed = 0;
  ObservationSpec observation = ObservationSpec::standard();
  bool normalize_observations = false;
  bool normalize_rewards = false;
  std::size_t stats_window = 0;  // 0: full history
  EngineKind engine = EngineKind::Matrix;
};

struct StepResult {
  std::vector<double> observation;       // agents x features, row-major, raw
  std::vector<double> observation_norm;  // same shape; empty unless enabled
  std::vector<Money> reward;             // agents, exact
  std::vector<double> reward_norm;       // empty unless enabled
  bool done = false;
  StepRecord record;
};

class Episode {
 public:
  Episode(std::shared_ptr<const Task> task, EpisodeOptions options = {});

  // Warmed state at the split start plus the first observation.
  StepResult reset();
  // One action index per agent.
  StepResult step(const std::vector<int>& actions);
  // Bypasses the action converter.
  StepResult step_orders(const Matrix<Quantity>& orders);

  Matrix<Quantity> convert_action(const std::vector<int>& actions) const;

  const Task& task() const { return *task_; }
  const EnvState& state() const { return state_; }
  const ObservationSpec& observation_spec() const { return options_.observation; }
  const ActionSpace& action_space() const { return actions_; }
  const DemandHistory& demand_history() const { return history_; }
  int agents() const { return task_->agents(); }
  bool done() const { return started_ && state_.t >= range_.end; }
  StepRange range() const { return range_; }

  // JSON: engine version, agent layout, feature list, action multipliers.
  std::string feature_manifest() const;

 private:
  std::vector<double> observe() const;
  void fill_normalized(StepResult& r);

  std::shared_ptr<const Task> task_;
  EpisodeOptions options_;
  ActionSpace actions_;
  StepRange range_;
  EnvState state_;
  DemandHistory history_;
  std::vector<RollingStats> obs_stats_;
  std::vector<RollingStats> reward_stats_;
  bool started_ = false;
};

const char* engine_version();
// FNV-1a over the built-in task names and their JSON specs.
std::uint64_t registry_hash();

}  // namespace invsim
