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

#include "invsim/episode.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "invsim/error.hpp"
#include "invsim/random.hpp"

namespace invsim {

namespace {

constexpr const char* kFeatureNames[kFeatureCount] = {
    "in_stock",       "selling_price",   "procurement_cost",      "demand_mean",
    "demand_std",     "holding_cost",    "order_cost",            "lead_time",
    "total_in_stock", "remaining_space", "total_profit_in_stock", "total_in_transit",
    "total_profit_in_transit",
};

}  // namespace

const char* feature_name(Feature f) { return kFeatureNames[static_cast<int>(f)]; }

Feature parse_feature(std::string_view name) {
  for (int k = 0; k < kFeatureCount; ++k) {
    if (name == kFeatureNames[k]) return static_cast<Feature>(k);
  }
  throw ConfigError("unknown observation feature '" + std::string(name) + "'");
}

bool is_warehouse_feature(Feature f) { return static_cast<int>(f) >= static_cast<int>(Feature::TotalInStock); }

ObservationSpec ObservationSpec::standard() {
  ObservationSpec spec;
  for (int k = 0; k < kFeatureCount; ++k) spec.features.push_back(static_cast<Feature>(k));
  return spec;
}

int ObservationSpec::sku_feature_count() const {
  return static_cast<int>(std::count_if(features.begin(), features.end(),
                                        [](Feature f) { return !is_warehouse_feature(f); }));
}

int ObservationSpec::warehouse_feature_count() const { return size() - sku_feature_count(); }

// --- RollingStats --------------------------------------------------------------

void RollingStats::push(double x) {
  ++count_;
  if (window_ > 0) {
    recent_.push_back(x);
    if (recent_.size() > window_) recent_.pop_front();
    return;
  }
  const double delta = x - w_mean_;
  w_mean_ += delta / static_cast<double>(count_);
  w_m2_ += delta * (x - w_mean_);
}

double RollingStats::mean() const {
  if (window_ == 0) return w_mean_;
  if (recent_.empty()) return 0.0;
  double total = 0.0;
  for (double v : recent_) total += v;
  return total / static_cast<double>(recent_.size());
}

double RollingStats::stddev() const {
  if (window_ == 0) return count_ > 0 ? std::sqrt(w_m2_ / static_cast<double>(count_)) : 0.0;
  if (recent_.empty()) return 0.0;
  const double m = mean();
  double acc = 0.0;
  for (double v : recent_) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(recent_.size()));
}

double normalize(double x, const RollingStats& stats) {
  if (stats.count() == 0) return 0.0;
  return (x - stats.mean()) / std::max(stats.stddev(), kNormalizeEpsilon);
}

// --- DemandHistory -------------------------------------------------------------

DemandHistory::DemandHistory(int agents, int capacity)
    : agents_(agents), capacity_(std::max(1, capacity)), ring_(static_cast<std::size_t>(agents) * capacity_, 0) {}

void DemandHistory::push(const Matrix<Quantity>& demand) {
  const auto flat = demand.flat();
  if (static_cast<int>(flat.size()) != agents_) throw ConfigError("demand history shape mismatch");
  const std::size_t slot = pushed_ % static_cast<std::size_t>(capacity_);
  std::copy(flat.begin(), flat.end(), ring_.begin() + static_cast<std::ptrdiff_t>(slot * agents_));
  ++pushed_;
}

std::size_t DemandHistory::available(int, int window) const {
  return std::min({pushed_, static_cast<std::size_t>(capacity_), static_cast<std::size_t>(std::max(0, window))});
}

Quantity DemandHistory::value(int a, std::size_t back) const {
  const std::size_t slot = (pushed_ - 1 - back) % static_cast<std::size_t>(capacity_);
  return ring_[slot * agents_ + a];
}

Quantity DemandHistory::sum(int a, int window) const {
  Quantity total = 0;
  const std::size_t n = available(a, window);
  for (std::size_t k = 0; k < n; ++k) total += value(a, k);
  return total;
}

double DemandHistory::mean(int a, int window) const {
  const std::size_t n = available(a, window);
  return n ? static_cast<double>(sum(a, window)) / static_cast<double>(n) : 0.0;
}

double DemandHistory::stddev(int a, int window) const {
  const std::size_t n = available(a, window);
  if (n == 0) return 0.0;
  const double m = mean(a, window);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = static_cast<double>(value(a, k)) - m;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

Quantity convert_multiplier(Money multiplier, Quantity demand_sum, std::size_t count) {
  if (count == 0) return 0;
  const __int128 num = static_cast<__int128>(multiplier.raw()) * demand_sum;
  const __int128 den = static_cast<__int128>(Money::kScale) * static_cast<__int128>(count);
  return Money::round_div(num, den);
}

// --- Episode -------------------------------------------------------------------

Episode::Episode(std::shared_ptr<const Task> task, EpisodeOptions options)
    : task_(std::move(task)), options_(std::move(options)) {
  if (!task_) throw ConfigError("episode needs a task");
  for (Feature f : options_.observation.features) {
    if (static_cast<int>(f) < 0 || static_cast<int>(f) >= kFeatureCount) throw ConfigError("bad feature id");
  }
  if (options_.observation.demand_window < 1) throw ConfigError("demand window must be >= 1");
  actions_.multipliers = task_->spec().action_multipliers;
  actions_.window = task_->spec().action_window;
  range_ = task_->range(options_.split);
  if (range_.empty()) throw EpisodeError("split range is empty");
}

StepResult Episode::reset() {
  const int agents = task_->agents();
  history_ = DemandHistory(agents, std::max(actions_.window, options_.observation.demand_window));
  WarmupRule rule;
  rule.on_step = [this](const StepRecord& r) { history_.push(r.demand); };
  state_ = task_->start_state(options_.split, rule);
  started_ = true;

  const std::size_t width = static_cast<std::size_t>(options_.observation.size());
  obs_stats_.assign(options_.normalize_observations ? agents * width : 0, RollingStats(options_.stats_window));
  reward_stats_.assign(options_.normalize_rewards ? agents : 0, RollingStats(options_.stats_window));

  StepResult r;
  r.observation = observe();
  r.done = done();
  fill_normalized(r);
  return r;
}

Matrix<Quantity> Episode::convert_action(const std::vector<int>& actions) const {
  const int agents = task_->agents();
  if (static_cast<int>(actions.size()) != agents) {
    throw ConfigError("expected " + std::to_string(agents) + " actions, got " + std::to_string(actions.size()));
  }
  Matrix<Quantity> orders(task_->echelons(), task_->skus(), 0);
  auto flat = orders.flat();
  for (int a = 0; a < agents; ++a) {
    const int k = actions[a];
    if (k < 0 || k >= actions_.size()) {
      throw ConfigError("action " + std::to_string(k) + " of agent " + std::to_string(a) + " is outside 0.." +
                        std::to_string(actions_.size() - 1));
    }
    flat[a] = convert_multiplier(actions_.multipliers[k], history_.sum(a, actions_.window),
                                 history_.available(a, actions_.window));
  }
  return orders;
}

StepResult Episode::step(const std::vector<int>& actions) {
  if (!started_) throw EpisodeError("reset() must be called before step()");
  if (done()) throw EpisodeError("episode is done");
  return step_orders(convert_action(actions));
}

StepResult Episode::step_orders(const Matrix<Quantity>& orders) {
  if (!started_) throw EpisodeError("reset() must be called before step()");
  if (done()) throw EpisodeError("episode is done");
  StepResult r;
  if (options_.engine == EngineKind::Matrix) {
    invsim::step(state_, orders, task_->series(), task_->network(), r.record);
  } else {
    step_scalar_reference(state_, orders, task_->series(), task_->network(), r.record);
  }
  history_.push(r.record.demand);
  const auto profit = r.record.profit.flat();
  r.reward.assign(profit.begin(), profit.end());
  r.observation = observe();
  r.done = done();
  fill_normalized(r);
  return r;
}

void Episode::fill_normalized(StepResult& r) {
  if (options_.normalize_observations) {
    r.observation_norm.resize(r.observation.size());
    for (std::size_t k = 0; k < r.observation.size(); ++k) {
      r.observation_norm[k] = normalize(r.observation[k], obs_stats_[k]);
      obs_stats_[k].push(r.observation[k]);
    }
  }
  if (options_.normalize_rewards && !r.reward.empty()) {
    r.reward_norm.resize(r.reward.size());
    for (std::size_t a = 0; a < r.reward.size(); ++a) {
      const double x = r.reward[a].to_double();
      r.reward_norm[a] = normalize(x, reward_stats_[a]);
      reward_stats_[a].push(x);
    }
  }
}

std::vector<double> Episode::observe() const {
  const Task& task = *task_;
  const SeriesSet& series = task.series();
  const Network& network = task.network();
  const int m = task.echelons();
  const int n = task.skus();
  const auto& features = options_.observation.features;
  const std::size_t width = features.size();
  const Step t = std::min(state_.t, series.horizon() - 1);  // prices after the last step repeat it

  // Warehouse aggregates first.
  struct Totals {
    double stock = 0, space = 0, stock_profit = 0, transit = 0, transit_profit = 0;
  };
  std::vector<Totals> totals(m);
  for (int i = 0; i < m; ++i) {
    Quantity occupied = 0, stock = 0, transit = 0;
    Money stock_profit, transit_profit;
    for (int j = 0; j < n; ++j) {
      const Money margin = series.price(t, j) - series.cost(t, j);
      occupied += series.volume(j) * state_.inventory(i, j);
      stock += state_.inventory(i, j);
      transit += state_.pipeline.in_transit(i, j);
      stock_profit += margin * state_.inventory(i, j);
      transit_profit += margin * state_.pipeline.in_transit(i, j);
    }
    const double capacity = static_cast<double>(network.warehouses[i].capacity);
    totals[i] = {static_cast<double>(stock), (capacity - static_cast<double>(occupied)) / capacity,
                 stock_profit.to_double(), static_cast<double>(transit), transit_profit.to_double()};
  }

  std::vector<double> out(static_cast<std::size_t>(m) * n * width);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = i * n + j;
      const UnitEconomics unit = unit_economics(series, network.costs[i], t, j);
      double* row = out.data() + static_cast<std::size_t>(a) * width;
      for (std::size_t f = 0; f < width; ++f) {
        double v = 0.0;
        switch (features[f]) {
          case Feature::InStock: v = static_cast<double>(state_.inventory(i, j)); break;
          case Feature::SellingPrice: v = unit.price.to_double(); break;
          case Feature::ProcurementCost: v = unit.cost.to_double(); break;
          case Feature::DemandMean: v = history_.mean(a, options_.observation.demand_window); break;
          case Feature::DemandStd: v = history_.stddev(a, options_.observation.demand_window); break;
          case Feature::HoldingCost: v = unit.holding.to_double(); break;
          case Feature::OrderCost: v = unit.order.to_double(); break;
          case Feature::LeadTime: v = series.lead_time(t, j); break;
          case Feature::TotalInStock: v = totals[i].stock; break;
          case Feature::RemainingSpace: v = totals[i].space; break;
          case Feature::TotalProfitInStock: v = totals[i].stock_profit; break;
          case Feature::TotalInTransit: v = totals[i].transit; break;
          case Feature::TotalProfitInTransit: v = totals[i].transit_profit; break;
        }
        row[f] = v;
      }
    }
  }
  return out;
}

const char* engine_version() { return "0.1.0"; }

std::uint64_t registry_hash() {
  std::string all;
  for (const TaskSpec& s : builtin_tasks()) all += task_spec_to_json(s);
  return hash_name(all);
}

std::string Episode::feature_manifest() const {
  nlohmann::ordered_json j;
  j["engine_version"] = engine_version();
  j["registry_hash"] = registry_hash();
  j["task"] = task_->name();
  j["split"] = to_string(options_.split);
  j["seed"] = options_.seed;
  j["echelons"] = task_->echelons();
  j["skus"] = task_->skus();
  j["agents"] = task_->agents();
  j["agent_index"] = "warehouse * skus + sku";
  j["steps"] = range_.length();
  nlohmann::ordered_json feats = nlohmann::ordered_json::array();
  for (Feature f : options_.observation.features) {
    feats.push_back({{"name", feature_name(f)}, {"scope", is_warehouse_feature(f) ? "warehouse" : "sku"}});
  }
  j["features"] = feats;
  j["demand_window"] = options_.observation.demand_window;
  nlohmann::ordered_json mults = nlohmann::ordered_json::array();
  for (Money m : actions_.multipliers) mults.push_back(m.to_string());
  j["action_multipliers"] = mults;
  j["action_window"] = actions_.window;
  j["normalize_observations"] = options_.normalize_observations;
  j["normalize_rewards"] = options_.normalize_rewards;
  return j.dump();
}

}  // namespace invsim
