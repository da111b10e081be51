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

#include "invsim/policy.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "invsim/csv.hpp"
#include "invsim/error.hpp"

namespace invsim {

namespace {

// Post-sale position of (i, j) split the way the order rules expect it:
// stock left on hand, and everything already on its way or on order.
struct Position {
  Quantity on_hand;
  Quantity inbound;
};

Position position_of(const EnvState& state, const Matrix<Quantity>& demand, int i, int j) {
  const Quantity on_hand = state.inventory(i, j);
  const Quantity d = demand(i, j);
  return {on_hand - (d < on_hand ? d : on_hand), state.pipeline.in_transit(i, j) + state.outstanding(i, j)};
}

}  // namespace

void NeverPolicy::orders(const EnvState&, const Matrix<Quantity>&, Matrix<Quantity>& out) { out.fill(0); }

void BaseStockPolicy::orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) {
  for (int i = 0; i < state.echelons(); ++i) {
    for (int j = 0; j < state.skus(); ++j) {
      const Position p = position_of(state, demand, i, j);
      out(i, j) = base_stock_order(levels_(i, j), p.on_hand, p.inbound);
    }
  }
}

DynamicBaseStockPolicy::DynamicBaseStockPolicy(const Task& task, Matrix<Quantity> initial, Step first_step,
                                               Step interval)
    : BaseStockPolicy(std::move(initial), "bs-dynamic"),
      task_(&task),
      next_refresh_(first_step + interval),
      interval_(interval) {
  if (interval < 1) throw ConfigError("refresh interval must be >= 1");
}

void DynamicBaseStockPolicy::orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) {
  if (state.t >= next_refresh_) {
    // Everything observed so far, nothing from step t on.
    const SeriesView history = task_->history(state.t);
    levels_ = solve_base_stock(history, task_->start_state(Split::Train), task_->network(), task_->spec().solver);
    refits_.emplace_back(state.t, levels_);
    while (next_refresh_ <= state.t) next_refresh_ += interval_;
  }
  BaseStockPolicy::orders(state, demand, out);
}

void SsPolicy::orders(const EnvState& state, const Matrix<Quantity>& demand, Matrix<Quantity>& out) {
  for (int i = 0; i < state.echelons(); ++i) {
    for (int j = 0; j < state.skus(); ++j) {
      const Position p = position_of(state, demand, i, j);
      out(i, j) = ss_order(levels_.s(i, j), levels_.S(i, j), p.on_hand, p.inbound);
    }
  }
}

// --- CSV helpers -------------------------------------------------------------

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Header-indexed CSV reader for the small files policies consume.
class Table {
 public:
  Table(const std::filesystem::path& path, const std::vector<std::string>& required) : source_(path.string()) {
    rows_ = csv::parse(read_file(path));
    if (rows_.empty()) throw DataError(source_ + ": empty file");
    for (std::size_t c = 0; c < rows_[0].size(); ++c) index_[csv::trim(rows_[0][c])] = c;
    for (const auto& name : required) {
      if (!index_.count(name)) throw DataError(source_ + ": missing column '" + name + "'", 0, name);
    }
  }
  std::size_t rows() const { return rows_.size() - 1; }

  const std::string& text(std::size_t r, const std::string& column) const {
    const auto& row = rows_[r + 1];
    const std::size_t c = index_.at(column);
    if (c >= row.size()) fail(r, column, "missing value");
    return row[c];
  }
  std::int64_t integer(std::size_t r, const std::string& column, std::int64_t min) const {
    const std::string v = csv::trim(text(r, column));
    std::size_t used = 0;
    std::int64_t out = 0;
    try {
      out = std::stoll(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size()) fail(r, column, "not an integer: '" + v + "'");
    if (out < min) fail(r, column, "value " + v + " below " + std::to_string(min));
    return out;
  }
  [[noreturn]] void fail(std::size_t r, const std::string& column, const std::string& what) const {
    throw DataError(source_ + ": row " + std::to_string(r + 1) + ", column '" + column + "': " + what,
                    static_cast<long>(r + 1), column);
  }

 private:
  std::string source_;
  std::vector<csv::Row> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::unordered_map<std::string, int> sku_index(const SeriesSet& series) {
  std::unordered_map<std::string, int> out;
  for (int j = 0; j < series.skus(); ++j) out[series.sku_id(j)] = j;
  return out;
}

int lookup_sku(const Table& table, std::size_t r, const std::unordered_map<std::string, int>& skus) {
  const std::string id = csv::trim(table.text(r, "sku_id"));
  auto it = skus.find(id);
  if (it == skus.end()) table.fail(r, "sku_id", "unknown SKU '" + id + "'");
  return it->second;
}

int lookup_warehouse(const Table& table, std::size_t r, int echelons) {
  const auto w = table.integer(r, "warehouse", 0);
  if (w >= echelons) table.fail(r, "warehouse", "no warehouse " + std::to_string(w));
  return static_cast<int>(w);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

ExternalPolicy::ExternalPolicy(const std::filesystem::path& path, const SeriesSet& series, int echelons)
    : path_(path.string()) {
  const Table table(path, {"t", "warehouse", "sku_id", "quantity"});
  const auto skus = sku_index(series);
  const auto n = static_cast<std::size_t>(series.skus());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const Step t = table.integer(r, "t", 0);
    const int i = lookup_warehouse(table, r, echelons);
    const int j = lookup_sku(table, r, skus);
    const Quantity q = table.integer(r, "quantity", 0);
    by_step_[t].emplace_back(static_cast<std::size_t>(i) * n + j, q);
  }
}

void ExternalPolicy::orders(const EnvState& state, const Matrix<Quantity>&, Matrix<Quantity>& out) {
  out.fill(0);
  auto it = by_step_.find(state.t);
  if (it == by_step_.end()) return;
  for (const auto& [cell, q] : it->second) out.flat()[cell] += q;
}

void write_base_stock_params(const Matrix<Quantity>& z, const SeriesSet& series, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "warehouse,sku_id,z\n";
  for (int i = 0; i < z.rows(); ++i) {
    for (int j = 0; j < z.cols(); ++j) out << i << ',' << csv::escape(series.sku_id(j)) << ',' << z(i, j) << '\n';
  }
}

void write_ss_params(const SsLevels& levels, const SeriesSet& series, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "warehouse,sku_id,s,S\n";
  for (int i = 0; i < levels.s.rows(); ++i) {
    for (int j = 0; j < levels.s.cols(); ++j) {
      out << i << ',' << csv::escape(series.sku_id(j)) << ',' << levels.s(i, j) << ',' << levels.S(i, j) << '\n';
    }
  }
}

Matrix<Quantity> read_base_stock_params(const std::filesystem::path& path, const SeriesSet& series, int echelons) {
  const Table table(path, {"warehouse", "sku_id", "z"});
  const auto skus = sku_index(series);
  Matrix<Quantity> z(echelons, series.skus(), 0);
  for (std::size_t r = 0; r < table.rows(); ++r) {
    z(lookup_warehouse(table, r, echelons), lookup_sku(table, r, skus)) = table.integer(r, "z", 0);
  }
  return z;
}

SsLevels read_ss_params(const std::filesystem::path& path, const SeriesSet& series, int echelons) {
  const Table table(path, {"warehouse", "sku_id", "s", "S"});
  const auto skus = sku_index(series);
  SsLevels out{Matrix<Quantity>(echelons, series.skus(), 0), Matrix<Quantity>(echelons, series.skus(), 0)};
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const int i = lookup_warehouse(table, r, echelons);
    const int j = lookup_sku(table, r, skus);
    out.s(i, j) = table.integer(r, "s", 0);
    out.S(i, j) = table.integer(r, "S", 0);
    if (out.s(i, j) > out.S(i, j)) table.fail(r, "s", "s must not exceed S");
  }
  return out;
}

// --- Fitting -----------------------------------------------------------------

std::vector<double> train_mean_demand(const Task& task) {
  const SeriesView train = task.view(Split::Train);
  std::vector<double> means(task.skus());
  for (int j = 0; j < task.skus(); ++j) means[j] = train.mean_demand(j);
  return means;
}

Matrix<Quantity> fit_base_stock_static(const Task& task) {
  return solve_base_stock(task.view(Split::Train), task.start_state(Split::Train), task.network(),
                          task.spec().solver);
}

SsLevels fit_ss_static(const Task& task) {
  return solve_ss(task.view(Split::Train), task.start_state(Split::Train), task.network(), train_mean_demand(task),
                  task.spec().solver);
}

SsLevels fit_ss_hindsight(const Task& task, Split evaluated) {
  return solve_ss(task.view(evaluated), task.start_state(evaluated), task.network(), train_mean_demand(task),
                  task.spec().solver);
}

std::unique_ptr<Policy> make_policy(const std::string& spec, const Task& task, Split split) {
  const auto suffix = [&](const std::string& prefix) -> std::optional<std::string> {
    if (spec.rfind(prefix, 0) != 0) return std::nullopt;
    std::string rest = spec.substr(prefix.size());
    if (rest.empty()) throw ConfigError("policy '" + spec + "' needs a file path");
    return rest;
  };
  if (spec == "never") return std::make_unique<NeverPolicy>();
  if (spec == "bs-static") return std::make_unique<BaseStockPolicy>(fit_base_stock_static(task));
  if (spec == "bs-dynamic") {
    return std::make_unique<DynamicBaseStockPolicy>(task, fit_base_stock_static(task), task.range(split).begin,
                                                    task.spec().solver.refresh_interval);
  }
  if (spec == "bs-warmup") {
    // The train split has no warmup window; its levels come from the train range.
    StepRange window = task.warmup_window(split);
    if (window.empty()) window = task.range(Split::Train);
    return std::make_unique<BaseStockPolicy>(warmup_levels(task.series(), task.echelons(), window), "bs-warmup");
  }
  if (spec == "ss-static") return std::make_unique<SsPolicy>(fit_ss_static(task), "ss-static");
  if (spec == "ss-hindsight") return std::make_unique<SsPolicy>(fit_ss_hindsight(task, split), "ss-hindsight");
  if (auto path = suffix("external:")) return std::make_unique<ExternalPolicy>(*path, task.series(), task.echelons());
  if (auto path = suffix("bs-params:")) {
    return std::make_unique<BaseStockPolicy>(read_base_stock_params(*path, task.series(), task.echelons()),
                                             "bs-params:" + *path);
  }
  if (auto path = suffix("ss-params:")) {
    return std::make_unique<SsPolicy>(read_ss_params(*path, task.series(), task.echelons()), "ss-params:" + *path);
  }
  throw ConfigError("unknown policy '" + spec +
                    "' (expected never, bs-static, bs-dynamic, bs-warmup, ss-static, ss-hindsight, external:<csv>, "
                    "bs-params:<csv> or ss-params:<csv>)");
}

}  // namespace invsim
