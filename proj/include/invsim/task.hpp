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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "invsim/engine.hpp"
#include "invsim/series.hpp"

namespace invsim {

enum class Split { Train, Validation, Test };

const char* to_string(Split split);
// Accepts "train", "validation"/"val", "test".
Split parse_split(std::string_view text);

// Warehouse capacity as "#SKU * k" (per_sku = k) or a plain number (fixed).
struct CapacityRule {
  Quantity per_sku = 0;
  Quantity fixed = 0;

  Quantity evaluate(int sku_count) const { return fixed + per_sku * sku_count; }
  std::string to_string() const;
  static CapacityRule parse(std::string_view text);
  friend bool operator==(const CapacityRule&, const CapacityRule&) = default;
};

struct DataSource {
  enum class Kind { Synthetic, Csv };
  Kind kind = Kind::Synthetic;
  std::uint64_t seed = 2023;
  Step horizon = 1825;
  SyntheticProfile profile;
  std::string path;  // CSV; relative paths resolve against data_directory()
  friend bool operator==(const DataSource&, const DataSource&) = default;
};

// Context changes applied on top of the loaded or generated series.
struct TransformSpec {
  int gap_level = 0;       // test range only
  int noise_level = 0;     // whole horizon
  double gap_scale = 0.1;
  double noise_scale = 0.05;
  std::uint64_t seed = 7;
  bool dynamic_lead_time = false;
  double demand_trend = 0.0;            // demand * (1 + trend * t / (H - 1))
  Money margin_scale = Money::from_int(1);  // price' = cost + (price - cost) * scale
  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

struct SolverSpec {
  Step refresh_interval = 30;     // dynamic base stock
  double base_stock_max_multiple = 30.0;
  double ss_grid_step = 0.5;      // multiples of mean demand
  double ss_grid_max = 12.0;
  friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

std::vector<Money> default_action_multipliers();

// Costs of the standard task: holding 0.002 + 0.001, order 10, backlog
// 0.1 * (price - cost), overflow 0.5 * cost.
CostParams standard_costs();

// Declarative description of one benchmark task.
struct TaskSpec {
  std::string name;
  int echelons = 1;
  int sku_count = 200;
  CapacityRule capacity{100, 0};
  AcceptStrategy accept = AcceptStrategy::UniformProportional;
  // One entry per echelon, or a single entry shared by all of them.
  std::vector<CostParams> costs = {standard_costs()};
  DataSource data;
  TransformSpec transforms;
  double train_fraction = 0.6;
  double validation_fraction = 0.2;
  Step warmup_length = kDefaultWarmupLength;
  std::vector<Money> action_multipliers = default_action_multipliers();
  int action_window = 21;
  SolverSpec solver;

  // Throws ConfigError if any field is out of range.
  void validate() const;
  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct HorizonSplit {
  StepRange train, validation, test;
  StepRange operator[](Split s) const {
    return s == Split::Train ? train : s == Split::Validation ? validation : test;
  }
};

HorizonSplit split_horizon(Step horizon, double train_fraction, double validation_fraction);

// A TaskSpec with its data generated, transformed and validated.
class Task {
 public:
  Task(TaskSpec spec, SeriesSet series, std::uint64_t data_seed);

  const TaskSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  const SeriesSet& series() const { return series_; }
  const Network& network() const { return network_; }
  const HorizonSplit& split() const { return split_; }
  std::uint64_t data_seed() const { return data_seed_; }
  int echelons() const { return spec_.echelons; }
  int skus() const { return spec_.sku_count; }
  int agents() const { return spec_.echelons * spec_.sku_count; }

  StepRange range(Split s) const { return split_[s]; }
  // Range-restricted read access; static solvers get Train, hindsight
  // solvers get Test.
  SeriesView view(Split s) const { return SeriesView(series_, split_[s]); }
  // Everything strictly before `end`.
  SeriesView history(Step end) const { return SeriesView(series_, {0, end}); }

  // The steps warmup consumes before `s` begins: up to warmup_length steps
  // immediately preceding the split, clipped at step 0.
  StepRange warmup_window(Split s) const;
  // Empty environment at the start of the warmup window, warmed up to the
  // first step of `s`.
  EnvState start_state(Split s, const WarmupRule& rule = {}) const;

 private:
  TaskSpec spec_;
  SeriesSet series_;
  Network network_;
  HorizonSplit split_;
  std::uint64_t data_seed_;
};

// --- Registry --------------------------------------------------------------

// All built-in tasks, in table order.
const std::vector<TaskSpec>& builtin_tasks();
std::optional<TaskSpec> find_builtin_task(std::string_view name);
// Closest built-in names by edit distance.
std::vector<std::string> nearest_task_names(std::string_view name, std::size_t count = 3);

// Directory holding task files and CSV data: $INVSIM_DATA_DIR when set,
// otherwise the current directory.
std::filesystem::path data_directory();

// Resolves a built-in name, a path to a task file, or a file
// <data_directory>/tasks/<name>.json. Throws UnknownTaskError listing the
// nearest built-in names.
TaskSpec resolve_task_spec(std::string_view name_or_path);

// seed 0 keeps the data seed written in the spec; any other value derives a
// new one from both.
Task build_task(const TaskSpec& spec, std::uint64_t seed = 0);
Task build_task(std::string_view name_or_path, std::uint64_t seed = 0);

// --- Task files ------------------------------------------------------------

std::string task_spec_to_json(const TaskSpec& spec);
TaskSpec task_spec_from_json(std::string_view text, const std::string& source_name = "<memory>");
TaskSpec load_task_spec(const std::filesystem::path& path);
void save_task_spec(const TaskSpec& spec, const std::filesystem::path& path);

}  // namespace invsim
