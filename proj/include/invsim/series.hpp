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
#include <span>
#include <string>
#include <vector>

#include "invsim/decimal.hpp"

namespace invsim {

using Quantity = std::int64_t;
using Step = std::int64_t;

// Half-open range of absolute steps [begin, end).
struct StepRange {
  Step begin = 0;
  Step end = 0;

  Step length() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(Step t) const { return t >= begin && t < end; }
  friend bool operator==(const StepRange&, const StepRange&) = default;
};

// Per-SKU exogenous time series over a shared horizon: consumer demand,
// selling price, procurement cost, lead time, and a constant unit volume.
// Storage is time-major so that one engine step reads contiguous rows.
class SeriesSet {
 public:
  SeriesSet() = default;
  SeriesSet(int skus, Step horizon);

  int skus() const { return skus_; }
  Step horizon() const { return horizon_; }

  const std::string& sku_id(int j) const { return ids_[j]; }
  void set_sku_id(int j, std::string id) { ids_[j] = std::move(id); }
  const std::vector<std::string>& sku_ids() const { return ids_; }

  Quantity demand(Step t, int j) const { return demand_[index(t, j)]; }
  Money price(Step t, int j) const { return price_[index(t, j)]; }
  Money cost(Step t, int j) const { return cost_[index(t, j)]; }
  int lead_time(Step t, int j) const { return lead_time_[index(t, j)]; }
  Quantity volume(int j) const { return volume_[j]; }

  Quantity& demand(Step t, int j) { return demand_[index(t, j)]; }
  Money& price(Step t, int j) { return price_[index(t, j)]; }
  Money& cost(Step t, int j) { return cost_[index(t, j)]; }
  int& lead_time(Step t, int j) { return lead_time_[index(t, j)]; }
  Quantity& volume(int j) { return volume_[j]; }

  std::span<const Quantity> demand_row(Step t) const { return row(demand_, t); }
  std::span<const Money> price_row(Step t) const { return row(price_, t); }
  std::span<const Money> cost_row(Step t) const { return row(cost_, t); }
  std::span<const int> lead_time_row(Step t) const { return row(lead_time_, t); }
  std::span<const Quantity> volumes() const { return volume_; }

  // Copies SKUs `columns` (repeats allowed) over `range` into a new set whose
  // step 0 corresponds to range.begin.
  SeriesSet extract(std::span<const int> columns, StepRange range) const;

  // Throws ConfigError when a stored value breaks the type's invariants.
  // `min_lead_time` is 1 for loaded data and 0 for analytic sandboxes.
  void validate(int min_lead_time = 1) const;

  std::size_t bytes() const;

  friend bool operator==(const SeriesSet&, const SeriesSet&) = default;

 private:
  std::size_t index(Step t, int j) const {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(skus_) + static_cast<std::size_t>(j);
  }
  template <typename T>
  std::span<const T> row(const std::vector<T>& v, Step t) const {
    return {v.data() + index(t, 0), static_cast<std::size_t>(skus_)};
  }

  int skus_ = 0;
  Step horizon_ = 0;
  std::vector<std::string> ids_;
  std::vector<Quantity> demand_;
  std::vector<Money> price_;
  std::vector<Money> cost_;
  std::vector<int> lead_time_;
  std::vector<Quantity> volume_;
};

// Read-only window over a SeriesSet. Accessors outside the range throw, so
// a solver handed this view cannot read data it was not given.
class SeriesView {
 public:
  SeriesView(const SeriesSet& series, StepRange range);

  const SeriesSet& series() const { return *series_; }
  StepRange range() const { return range_; }
  int skus() const { return series_->skus(); }

  Quantity demand(Step t, int j) const { return series_->demand(checked(t), j); }
  Money price(Step t, int j) const { return series_->price(checked(t), j); }
  Money cost(Step t, int j) const { return series_->cost(checked(t), j); }
  int lead_time(Step t, int j) const { return series_->lead_time(checked(t), j); }
  Quantity volume(int j) const { return series_->volume(j); }

  double mean_demand(int j) const;
  double mean_lead_time(int j) const;

  // Copies SKUs over the whole view; step 0 of the result is range().begin.
  SeriesSet extract(std::span<const int> columns) const { return series_->extract(columns, range_); }

 private:
  Step checked(Step t) const;

  const SeriesSet* series_;
  StepRange range_;
};

// --- Loading ---------------------------------------------------------------

struct LoadOptions {
  int default_lead_time = 1;
  Quantity default_volume = 1;
  Money default_price = Money::from_int(0);
  Money default_cost = Money::from_int(0);
};

// Reads the long-format CSV `sku_id,t,demand[,price,cost,lead_time,vol]`.
// Columns may appear in any order; the header row is required. SKUs keep
// their first-appearance order and the first `sku_count` are returned.
// Throws DataError naming the offending data row (1-based, header excluded;
// the message also gives the file line) and column for ragged rows,
// unparsable or negative values, gaps in t, or when the file holds fewer
// than `sku_count` SKUs.
SeriesSet load_series(const std::filesystem::path& path, int sku_count,
                      const LoadOptions& options = {});
SeriesSet parse_series_csv(std::string_view text, int sku_count, const LoadOptions& options = {},
                           const std::string& source_name = "<memory>");

void write_series_csv(const SeriesSet& series, const std::filesystem::path& path);

// --- Generation ------------------------------------------------------------

struct SyntheticProfile {
  double demand_rate_min = 2.0;
  double demand_rate_max = 20.0;
  double cost_min = 1.0;
  double cost_max = 50.0;
  double markup_min = 1.5;
  double markup_max = 3.0;
  int lead_time_min = 1;
  int lead_time_max = 7;

  friend bool operator==(const SyntheticProfile&, const SyntheticProfile&) = default;
};

// Demand ~ Poisson(rate_j) with rate_j ~ Uniform(min, max); cost in cents
// ~ Uniform(cost_min, cost_max); price = cost * Uniform(markup) in cents;
// lead time constant per SKU, uniform on the integer range; volume 1.
// SKU j draws from its own stream, so the first k SKUs of a larger set equal
// a k-SKU set generated with the same seed.
SeriesSet generate_synthetic(std::uint64_t seed, int sku_count, Step horizon,
                             const SyntheticProfile& profile = {});

// Rate parameter used for SKU j; lets tests check the generated means.
double synthetic_demand_rate(std::uint64_t seed, int j, const SyntheticProfile& profile = {});

// --- Context transforms ----------------------------------------------------

struct GapOptions {
  double scale = 0.1;  // relative offset per level
};

struct NoiseOptions {
  double scale = 0.05;  // relative standard deviation per level
};

// Constant per-SKU offset on `range`: delta_j = round(u_j * scale * g * mean_j)
// with u_j ~ Uniform(-1, 1) and mean_j the SKU's mean demand over `range`;
// demand' = max(0, demand + delta_j). Level 0 returns the input unchanged.
SeriesSet apply_gap(const SeriesSet& series, int level, std::uint64_t seed, StepRange range,
                    const GapOptions& options = {});

// Multiplicative noise on `range`: demand' = max(0, round(demand * (1 + e)))
// with e ~ Normal(0, scale * n), one draw per SKU and step.
SeriesSet apply_noise(const SeriesSet& series, int level, std::uint64_t seed, StepRange range,
                      const NoiseOptions& options = {});

}  // namespace invsim
