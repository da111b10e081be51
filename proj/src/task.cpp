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

#include "invsim/task.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "invsim/error.hpp"
#include "invsim/random.hpp"

namespace invsim {

const char* to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "?";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "validation" || text == "val") return Split::Validation;
  if (text == "test") return Split::Test;
  throw ConfigError("unknown split '" + std::string(text) + "' (expected train, val or test)");
}

// --- CapacityRule ------------------------------------------------------------

std::string CapacityRule::to_string() const {
  if (per_sku != 0 && fixed == 0) return "#SKU * " + std::to_string(per_sku);
  if (per_sku == 0) return std::to_string(fixed);
  return "#SKU * " + std::to_string(per_sku) + " + " + std::to_string(fixed);
}

namespace {

std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

Quantity parse_count(const std::string& digits, std::string_view whole) {
  if (digits.empty() || digits.size() > 15 ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ConfigError("bad capacity rule '" + std::string(whole) + "'");
  }
  return std::stoll(digits);
}

}  // namespace

CapacityRule CapacityRule::parse(std::string_view text) {
  const std::string s = strip_spaces(text);
  CapacityRule rule;
  std::string rest = s;
  if (rest.rfind("#SKU*", 0) == 0) {
    rest = rest.substr(5);
    const auto plus = rest.find('+');
    rule.per_sku = parse_count(rest.substr(0, plus), text);
    if (plus != std::string::npos) rule.fixed = parse_count(rest.substr(plus + 1), text);
  } else {
    rule.fixed = parse_count(rest, text);
  }
  return rule;
}

// --- TaskSpec ------------------------------------------------------------------

std::vector<Money> default_action_multipliers() {
  std::vector<Money> out;
  for (const char* m : {"0", "0.5", "1", "1.5", "2", "2.5", "3", "4", "5", "6", "8", "10", "12"}) {
    out.push_back(Money::parse(m));
  }
  return out;
}

CostParams standard_costs() {
  CostParams c;
  c.holding = LinearCost::constant(Money::parse("0.002") + Money::parse("0.001"));
  c.order = LinearCost::constant(Money::from_int(10));
  c.backlog = {Money{}, Money::parse("0.1"), Money::parse("-0.1")};
  c.overflow = {Money{}, Money{}, Money::parse("0.5")};
  return c;
}

namespace {

void check_cost(const LinearCost& cost, const std::string& what) {
  if (cost.per_price == Money{} && cost.per_cost == Money{} && cost.fixed < Money{}) {
    throw ConfigError(what + " must be non-negative");
  }
}

}  // namespace

void TaskSpec::validate() const {
  const std::string where = "task '" + name + "': ";
  if (name.empty()) throw ConfigError("task name must not be empty");
  if (echelons < 1 || echelons > 16) throw ConfigError(where + "echelons must be in 1..16");
  if (sku_count < 1) throw ConfigError(where + "sku_count must be >= 1");
  if (capacity.per_sku < 0 || capacity.fixed < 0 || capacity.evaluate(sku_count) <= 0) {
    throw ConfigError(where + "capacity rule '" + capacity.to_string() + "' must evaluate to a positive integer");
  }
  if (costs.size() != 1 && costs.size() != static_cast<std::size_t>(echelons)) {
    throw ConfigError(where + "costs need one entry or one per echelon");
  }
  for (const CostParams& c : costs) {
    check_cost(c.overflow, where + "overflow cost");
    check_cost(c.order, where + "order cost");
    check_cost(c.holding, where + "holding cost");
    check_cost(c.backlog, where + "backlog cost");
  }
  if (data.kind == DataSource::Kind::Synthetic) {
    if (data.horizon < 1) throw ConfigError(where + "horizon must be >= 1");
    const SyntheticProfile& p = data.profile;
    if (!(p.demand_rate_min >= 0 && p.demand_rate_min <= p.demand_rate_max) ||
        !(p.cost_min >= 0 && p.cost_min <= p.cost_max) ||
        !(p.markup_min >= 0 && p.markup_min <= p.markup_max) ||
        !(p.lead_time_min >= 1 && p.lead_time_min <= p.lead_time_max)) {
      throw ConfigError(where + "synthetic profile ranges are inconsistent");
    }
  } else if (data.path.empty()) {
    throw ConfigError(where + "csv data source needs a path");
  }
  const TransformSpec& tr = transforms;
  if (tr.gap_level < 0 || tr.gap_level > 6) throw ConfigError(where + "gap level must be in 0..6");
  if (tr.noise_level < 0 || tr.noise_level > 6) throw ConfigError(where + "noise level must be in 0..6");
  if (!(tr.gap_scale >= 0) || !(tr.noise_scale >= 0)) throw ConfigError(where + "transform scales must be >= 0");
  if (!(tr.demand_trend > -1.0) || !std::isfinite(tr.demand_trend)) {
    throw ConfigError(where + "demand trend must be > -1");
  }
  if (tr.margin_scale < Money{}) throw ConfigError(where + "margin scale must be >= 0");
  if (!(train_fraction > 0) || !(validation_fraction > 0) || !(train_fraction + validation_fraction < 1)) {
    throw ConfigError(where + "split fractions must be positive and leave room for a test range");
  }
  if (warmup_length < 0) throw ConfigError(where + "warmup length must be >= 0");
  if (action_multipliers.empty() || action_multipliers.front() != Money{}) {
    throw ConfigError(where + "action multipliers must start with 0");
  }
  if (!std::is_sorted(action_multipliers.begin(), action_multipliers.end()) ||
      std::adjacent_find(action_multipliers.begin(), action_multipliers.end()) != action_multipliers.end()) {
    throw ConfigError(where + "action multipliers must be strictly ascending");
  }
  if (action_window < 1) throw ConfigError(where + "action window must be >= 1");
  if (solver.refresh_interval < 1) throw ConfigError(where + "refresh interval must be >= 1");
  if (!(solver.base_stock_max_multiple > 0) || !(solver.ss_grid_step > 0) || !(solver.ss_grid_max >= 0)) {
    throw ConfigError(where + "solver grid settings must be positive");
  }
}

HorizonSplit split_horizon(Step horizon, double train_fraction, double validation_fraction) {
  const auto train_end = static_cast<Step>(std::floor(static_cast<double>(horizon) * train_fraction));
  const auto val_end =
      static_cast<Step>(std::floor(static_cast<double>(horizon) * (train_fraction + validation_fraction)));
  HorizonSplit s{{0, train_end}, {train_end, val_end}, {val_end, horizon}};
  if (s.train.empty() || s.validation.empty() || s.test.empty()) {
    throw ConfigError("horizon " + std::to_string(horizon) + " is too short for a train/validation/test split");
  }
  return s;
}

// --- Task ---------------------------------------------------------------------

Task::Task(TaskSpec spec, SeriesSet series, std::uint64_t data_seed)
    : spec_(std::move(spec)), series_(std::move(series)), data_seed_(data_seed) {
  spec_.validate();
  if (series_.skus() != spec_.sku_count) throw ConfigError("series SKU count does not match the task");
  split_ = split_horizon(series_.horizon(), spec_.train_fraction, spec_.validation_fraction);
  const Quantity capacity = spec_.capacity.evaluate(spec_.sku_count);
  for (int i = 0; i < spec_.echelons; ++i) {
    network_.warehouses.push_back({capacity, spec_.accept});
    network_.costs.push_back(spec_.costs.size() == 1 ? spec_.costs[0] : spec_.costs[i]);
  }
}

StepRange Task::warmup_window(Split s) const {
  const Step begin = split_[s].begin;
  return {std::max<Step>(0, begin - spec_.warmup_length), begin};
}

EnvState Task::start_state(Split s, const WarmupRule& rule) const {
  const StepRange window = warmup_window(s);
  EnvState state = EnvState::empty(spec_.echelons, spec_.sku_count, window.begin);
  return warmup(std::move(state), series_, network_, window.length(), rule);
}

// --- Materialization -----------------------------------------------------------

namespace {

constexpr std::uint64_t kLeadTimeStream = 5;

std::filesystem::path resolve_data_path(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  const std::filesystem::path under_data = data_directory() / p;
  if (std::filesystem::exists(under_data)) return under_data;
  return p;
}

void scale_margin(SeriesSet& s, Money scale) {
  if (scale == Money::from_int(1)) return;
  for (Step t = 0; t < s.horizon(); ++t) {
    for (int j = 0; j < s.skus(); ++j) {
      const Money c = s.cost(t, j);
      s.price(t, j) = c + (s.price(t, j) - c).times(scale);
    }
  }
}

void apply_trend(SeriesSet& s, double trend) {
  if (trend == 0.0) return;
  const double span = s.horizon() > 1 ? static_cast<double>(s.horizon() - 1) : 1.0;
  for (Step t = 0; t < s.horizon(); ++t) {
    const double factor = 1.0 + trend * static_cast<double>(t) / span;
    for (int j = 0; j < s.skus(); ++j) {
      const auto d = std::llround(static_cast<double>(s.demand(t, j)) * factor);
      s.demand(t, j) = std::max<Quantity>(0, d);
    }
  }
}

// SKUs whose lead time is constant get a per-step draw from {L-1, L, L+1},
// floored at 1; SKUs that already carry a varying column keep it.
void jitter_lead_times(SeriesSet& s, std::uint64_t seed) {
  for (int j = 0; j < s.skus(); ++j) {
    const int base = s.lead_time(0, j);
    bool constant = true;
    for (Step t = 1; t < s.horizon() && constant; ++t) constant = s.lead_time(t, j) == base;
    if (!constant) continue;
    Rng rng(mix_seed(seed, kLeadTimeStream), static_cast<std::uint64_t>(j));
    for (Step t = 0; t < s.horizon(); ++t) {
      const auto l = base + static_cast<int>(rng.uniform_int(-1, 1));
      s.lead_time(t, j) = std::max(1, l);
    }
  }
}

std::uint64_t derive(std::uint64_t base, std::uint64_t run_seed) {
  return run_seed == 0 ? base : mix_seed(base, run_seed);
}

}  // namespace

Task build_task(const TaskSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::uint64_t data_seed = derive(spec.data.seed, seed);
  const std::uint64_t transform_seed = derive(spec.transforms.seed, seed);

  SeriesSet series;
  if (spec.data.kind == DataSource::Kind::Synthetic) {
    series = generate_synthetic(data_seed, spec.sku_count, spec.data.horizon, spec.data.profile);
  } else {
    series = load_series(resolve_data_path(spec.data.path), spec.sku_count);
  }

  const TransformSpec& tr = spec.transforms;
  scale_margin(series, tr.margin_scale);
  apply_trend(series, tr.demand_trend);
  if (tr.dynamic_lead_time) jitter_lead_times(series, transform_seed);
  const HorizonSplit split = split_horizon(series.horizon(), spec.train_fraction, spec.validation_fraction);
  series = apply_gap(series, tr.gap_level, transform_seed, split.test, GapOptions{tr.gap_scale});
  series = apply_noise(series, tr.noise_level, transform_seed, {0, series.horizon()},
                       NoiseOptions{tr.noise_scale});
  series.validate(1);
  return Task(spec, std::move(series), data_seed);
}

Task build_task(std::string_view name_or_path, std::uint64_t seed) {
  return build_task(resolve_task_spec(name_or_path), seed);
}

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("INVSIM_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return std::filesystem::current_path();
}

TaskSpec resolve_task_spec(std::string_view name_or_path) {
  if (auto builtin = find_builtin_task(name_or_path)) return *builtin;
  const std::filesystem::path direct(name_or_path);
  if (direct.extension() == ".json" && std::filesystem::is_regular_file(direct)) return load_task_spec(direct);
  const std::filesystem::path in_dir = data_directory() / "tasks" / (std::string(name_or_path) + ".json");
  if (std::filesystem::is_regular_file(in_dir)) return load_task_spec(in_dir);

  std::string message = "unknown task '" + std::string(name_or_path) + "'";
  const auto near = nearest_task_names(name_or_path);
  if (!near.empty()) {
    message += "; did you mean ";
    for (std::size_t k = 0; k < near.size(); ++k) message += (k ? ", " : "") + near[k];
    message += "?";
  }
  throw UnknownTaskError(message);
}

}  // namespace invsim
