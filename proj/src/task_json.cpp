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

// Task files: JSON objects with one section per TaskSpec group. Money values
// are written as strings so they round-trip exactly; numbers are accepted on
// input. Missing keys keep their defaults; unknown keys are rejected.

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "invsim/error.hpp"
#include "invsim/task.hpp"

namespace invsim {

namespace {

using nlohmann::ordered_json;

class Reader {
 public:
  Reader(const ordered_json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail("expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return obj_.contains(key);
  }
  const ordered_json& at(const char* key) { return obj_.at(key); }
  std::string sub(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  template <typename T>
  void number(const char* key, T& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number()) fail(std::string(key) + " must be a number");
    out = v.get<T>();
  }
  void boolean(const char* key, bool& out) {
    if (!has(key)) return;
    if (!at(key).is_boolean()) fail(std::string(key) + " must be true or false");
    out = at(key).get<bool>();
  }
  void text(const char* key, std::string& out) {
    if (!has(key)) return;
    if (!at(key).is_string()) fail(std::string(key) + " must be a string");
    out = at(key).get<std::string>();
  }
  void money(const char* key, Money& out) {
    if (has(key)) out = to_money(at(key), sub(key));
  }

  // Call after reading every known key.
  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail("unknown key '" + it.key() + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("task file") : path_) + ": " + what);
  }

  static Money to_money(const ordered_json& v, const std::string& where) {
    try {
      if (v.is_string()) return Money::parse(v.get<std::string>());
      if (v.is_number_integer()) return Money::from_int(v.get<std::int64_t>());
      if (v.is_number()) return Money::from_double(v.get<double>());
    } catch (const std::invalid_argument&) {
    }
    throw ConfigError(where + ": expected a decimal number");
  }

 private:
  const ordered_json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* accept_name(AcceptStrategy a) {
  switch (a) {
    case AcceptStrategy::UniformProportional: return "uniform_proportional";
    case AcceptStrategy::RejectAll: return "reject_all";
    case AcceptStrategy::AcceptAll: return "accept_all";
    case AcceptStrategy::PerSkuProportional: return "per_sku_proportional";
  }
  return "?";
}

AcceptStrategy parse_accept(const std::string& s, const std::string& where) {
  if (s == "uniform_proportional") return AcceptStrategy::UniformProportional;
  if (s == "reject_all") return AcceptStrategy::RejectAll;
  if (s == "accept_all") return AcceptStrategy::AcceptAll;
  if (s == "per_sku_proportional") return AcceptStrategy::PerSkuProportional;
  throw ConfigError(where + ": unknown accept strategy '" + s + "'");
}

ordered_json cost_json(const LinearCost& c) {
  if (c.per_price == Money{} && c.per_cost == Money{}) return c.fixed.to_string();
  ordered_json j = ordered_json::object();
  if (c.fixed != Money{}) j["fixed"] = c.fixed.to_string();
  if (c.per_price != Money{}) j["per_price"] = c.per_price.to_string();
  if (c.per_cost != Money{}) j["per_cost"] = c.per_cost.to_string();
  return j;
}

LinearCost parse_cost(const ordered_json& v, const std::string& where) {
  if (!v.is_object()) return LinearCost::constant(Reader::to_money(v, where));
  LinearCost c;
  Reader r(v, where);
  r.money("fixed", c.fixed);
  r.money("per_price", c.per_price);
  r.money("per_cost", c.per_cost);
  r.finish();
  return c;
}

}  // namespace

std::string task_spec_to_json(const TaskSpec& spec) {
  ordered_json j;
  j["name"] = spec.name;
  j["echelons"] = spec.echelons;
  j["sku_count"] = spec.sku_count;
  j["warehouse"] = {{"capacity", spec.capacity.to_string()}, {"accept_strategy", accept_name(spec.accept)}};

  ordered_json costs = ordered_json::array();
  for (const CostParams& c : spec.costs) {
    costs.push_back({{"holding", cost_json(c.holding)},
                     {"order", cost_json(c.order)},
                     {"backlog", cost_json(c.backlog)},
                     {"overflow", cost_json(c.overflow)}});
  }
  j["costs"] = costs;

  ordered_json data;
  if (spec.data.kind == DataSource::Kind::Synthetic) {
    const SyntheticProfile& p = spec.data.profile;
    data = {{"source", "synthetic"},
            {"seed", spec.data.seed},
            {"horizon", spec.data.horizon},
            {"profile",
             {{"demand_rate_min", p.demand_rate_min},
              {"demand_rate_max", p.demand_rate_max},
              {"cost_min", p.cost_min},
              {"cost_max", p.cost_max},
              {"markup_min", p.markup_min},
              {"markup_max", p.markup_max},
              {"lead_time_min", p.lead_time_min},
              {"lead_time_max", p.lead_time_max}}}};
  } else {
    data = {{"source", "csv"}, {"path", spec.data.path}};
  }
  j["data"] = data;

  const TransformSpec& tr = spec.transforms;
  j["transforms"] = {{"gap_level", tr.gap_level},
                     {"noise_level", tr.noise_level},
                     {"gap_scale", tr.gap_scale},
                     {"noise_scale", tr.noise_scale},
                     {"seed", tr.seed},
                     {"dynamic_lead_time", tr.dynamic_lead_time},
                     {"demand_trend", tr.demand_trend},
                     {"margin_scale", tr.margin_scale.to_string()}};
  j["split"] = {{"train", spec.train_fraction}, {"validation", spec.validation_fraction}};
  j["warmup_length"] = spec.warmup_length;

  ordered_json mults = ordered_json::array();
  for (Money m : spec.action_multipliers) mults.push_back(m.to_string());
  j["actions"] = {{"multipliers", mults}, {"window", spec.action_window}};
  j["solver"] = {{"refresh_interval", spec.solver.refresh_interval},
                 {"base_stock_max_multiple", spec.solver.base_stock_max_multiple},
                 {"ss_grid_step", spec.solver.ss_grid_step},
                 {"ss_grid_max", spec.solver.ss_grid_max}};
  return j.dump(2) + "\n";
}

namespace {

TaskSpec spec_from(const ordered_json& j) {
  TaskSpec spec;
  spec.costs = {standard_costs()};
  Reader top(j, "");
  if (!top.has("name")) top.fail("missing 'name'");
  top.text("name", spec.name);
  top.number("echelons", spec.echelons);
  top.number("sku_count", spec.sku_count);

  if (top.has("warehouse")) {
    Reader w(top.at("warehouse"), "warehouse");
    if (w.has("capacity")) {
      const auto& v = w.at("capacity");
      spec.capacity = v.is_string() ? CapacityRule::parse(v.get<std::string>())
                                    : CapacityRule{0, v.get<Quantity>()};
    }
    std::string accept = accept_name(spec.accept);
    w.text("accept_strategy", accept);
    spec.accept = parse_accept(accept, "warehouse.accept_strategy");
    w.finish();
  }

  if (top.has("costs")) {
    const auto& arr = top.at("costs");
    if (!arr.is_array()) top.fail("costs must be an array");
    spec.costs.clear();
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string where = "costs[" + std::to_string(k) + "]";
      Reader c(arr[k], where);
      CostParams p = standard_costs();
      if (c.has("holding")) p.holding = parse_cost(c.at("holding"), where + ".holding");
      if (c.has("order")) p.order = parse_cost(c.at("order"), where + ".order");
      if (c.has("backlog")) p.backlog = parse_cost(c.at("backlog"), where + ".backlog");
      if (c.has("overflow")) p.overflow = parse_cost(c.at("overflow"), where + ".overflow");
      c.finish();
      spec.costs.push_back(p);
    }
  }

  if (top.has("data")) {
    Reader d(top.at("data"), "data");
    std::string source = "synthetic";
    d.text("source", source);
    if (source == "synthetic") {
      spec.data.kind = DataSource::Kind::Synthetic;
      d.number("seed", spec.data.seed);
      d.number("horizon", spec.data.horizon);
      if (d.has("profile")) {
        Reader p(d.at("profile"), "data.profile");
        SyntheticProfile& prof = spec.data.profile;
        p.number("demand_rate_min", prof.demand_rate_min);
        p.number("demand_rate_max", prof.demand_rate_max);
        p.number("cost_min", prof.cost_min);
        p.number("cost_max", prof.cost_max);
        p.number("markup_min", prof.markup_min);
        p.number("markup_max", prof.markup_max);
        p.number("lead_time_min", prof.lead_time_min);
        p.number("lead_time_max", prof.lead_time_max);
        p.finish();
      }
    } else if (source == "csv") {
      spec.data.kind = DataSource::Kind::Csv;
      d.text("path", spec.data.path);
    } else {
      d.fail("source must be 'synthetic' or 'csv'");
    }
    d.finish();
  }

  if (top.has("transforms")) {
    Reader t(top.at("transforms"), "transforms");
    TransformSpec& tr = spec.transforms;
    t.number("gap_level", tr.gap_level);
    t.number("noise_level", tr.noise_level);
    t.number("gap_scale", tr.gap_scale);
    t.number("noise_scale", tr.noise_scale);
    t.number("seed", tr.seed);
    t.boolean("dynamic_lead_time", tr.dynamic_lead_time);
    t.number("demand_trend", tr.demand_trend);
    t.money("margin_scale", tr.margin_scale);
    t.finish();
  }
  if (top.has("split")) {
    Reader s(top.at("split"), "split");
    s.number("train", spec.train_fraction);
    s.number("validation", spec.validation_fraction);
    s.finish();
  }
  top.number("warmup_length", spec.warmup_length);
  if (top.has("actions")) {
    Reader a(top.at("actions"), "actions");
    if (a.has("multipliers")) {
      const auto& arr = a.at("multipliers");
      if (!arr.is_array()) a.fail("multipliers must be an array");
      spec.action_multipliers.clear();
      for (const auto& v : arr) spec.action_multipliers.push_back(Reader::to_money(v, "actions.multipliers"));
    }
    a.number("window", spec.action_window);
    a.finish();
  }
  if (top.has("solver")) {
    Reader s(top.at("solver"), "solver");
    s.number("refresh_interval", spec.solver.refresh_interval);
    s.number("base_stock_max_multiple", spec.solver.base_stock_max_multiple);
    s.number("ss_grid_step", spec.solver.ss_grid_step);
    s.number("ss_grid_max", spec.solver.ss_grid_max);
    s.finish();
  }
  top.finish();
  return spec;
}

}  // namespace

TaskSpec task_spec_from_json(std::string_view text, const std::string& source_name) {
  TaskSpec spec;
  try {
    spec = spec_from(ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(source_name + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  spec.validate();
  return spec;
}

TaskSpec load_task_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open task file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return task_spec_from_json(buf.str(), path.string());
}

void save_task_spec(const TaskSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write task file " + path.string());
  out << task_spec_to_json(spec);
}

}  // namespace invsim
