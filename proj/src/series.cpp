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

#include "invsim/series.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "invsim/csv.hpp"
#include "invsim/error.hpp"
#include "invsim/random.hpp"

namespace invsim {

SeriesSet::SeriesSet(int skus, Step horizon)
    : skus_(skus),
      horizon_(horizon),
      ids_(static_cast<std::size_t>(skus)),
      demand_(static_cast<std::size_t>(skus) * horizon, 0),
      price_(static_cast<std::size_t>(skus) * horizon),
      cost_(static_cast<std::size_t>(skus) * horizon),
      lead_time_(static_cast<std::size_t>(skus) * horizon, 1),
      volume_(static_cast<std::size_t>(skus), 1) {
  if (skus < 1) throw ConfigError("series needs at least one SKU");
  if (horizon < 1) throw ConfigError("series horizon must be positive");
  for (int j = 0; j < skus; ++j) ids_[j] = "SKU" + std::to_string(j);
}

SeriesSet SeriesSet::extract(std::span<const int> columns, StepRange range) const {
  if (range.begin < 0 || range.end > horizon_ || range.empty()) {
    throw ConfigError("extract: range [" + std::to_string(range.begin) + ", " +
                      std::to_string(range.end) + ") outside horizon " + std::to_string(horizon_));
  }
  SeriesSet out(static_cast<int>(columns.size()), range.length());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const int j = columns[c];
    out.ids_[c] = ids_[j];
    out.volume_[c] = volume_[j];
  }
  for (Step t = range.begin; t < range.end; ++t) {
    const Step u = t - range.begin;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const int j = columns[c];
      const int k = static_cast<int>(c);
      out.demand(u, k) = demand(t, j);
      out.price(u, k) = price(t, j);
      out.cost(u, k) = cost(t, j);
      out.lead_time(u, k) = lead_time(t, j);
    }
  }
  return out;
}

void SeriesSet::validate(int min_lead_time) const {
  for (int j = 0; j < skus_; ++j) {
    if (volume_[j] < 1) throw ConfigError("SKU " + ids_[j] + ": unit volume must be positive");
  }
  for (Step t = 0; t < horizon_; ++t) {
    for (int j = 0; j < skus_; ++j) {
      const auto where = [&] { return "SKU " + ids_[j] + " at t=" + std::to_string(t) + ": "; };
      if (demand(t, j) < 0) throw ConfigError(where() + "negative demand");
      if (lead_time(t, j) < min_lead_time) {
        throw ConfigError(where() + "lead time below " + std::to_string(min_lead_time));
      }
      if (price(t, j) < Money{} || cost(t, j) < Money{}) {
        throw ConfigError(where() + "negative price or cost");
      }
    }
  }
}

std::size_t SeriesSet::bytes() const {
  return demand_.size() * sizeof(Quantity) + price_.size() * sizeof(Money) * 2 +
         lead_time_.size() * sizeof(int) + volume_.size() * sizeof(Quantity);
}

SeriesView::SeriesView(const SeriesSet& series, StepRange range) : series_(&series), range_(range) {
  if (range.begin < 0 || range.end > series.horizon() || range.empty()) {
    throw ConfigError("series view [" + std::to_string(range.begin) + ", " +
                      std::to_string(range.end) + ") outside horizon " +
                      std::to_string(series.horizon()));
  }
}

Step SeriesView::checked(Step t) const {
  if (!range_.contains(t)) {
    throw std::out_of_range("step " + std::to_string(t) + " outside view [" +
                            std::to_string(range_.begin) + ", " + std::to_string(range_.end) + ")");
  }
  return t;
}

double SeriesView::mean_demand(int j) const {
  double total = 0.0;
  for (Step t = range_.begin; t < range_.end; ++t) total += static_cast<double>(series_->demand(t, j));
  return total / static_cast<double>(range_.length());
}

double SeriesView::mean_lead_time(int j) const {
  double total = 0.0;
  for (Step t = range_.begin; t < range_.end; ++t) total += series_->lead_time(t, j);
  return total / static_cast<double>(range_.length());
}

// --- CSV -------------------------------------------------------------------

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

struct RawRow {
  long row;
  std::int64_t t;
  Quantity demand;
  std::optional<Money> price, cost;
  std::optional<int> lead_time;
  std::optional<Quantity> volume;
};

}  // namespace

SeriesSet parse_series_csv(std::string_view text, int sku_count, const LoadOptions& options,
                           const std::string& source_name) {
  if (sku_count < 1) throw ConfigError("sku_count must be positive");
  const auto rows = csv::parse(text);
  if (rows.empty()) throw DataError(source_name + ": missing header row");

  const auto& header = rows.front();
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column[csv::trim(header[c])] = c;
  for (const char* required : {"sku_id", "t", "demand"}) {
    if (!column.contains(required)) {
      throw DataError(source_name + ": missing required column '" + required + "'", 0, required);
    }
  }
  const auto find = [&](const char* name) -> std::optional<std::size_t> {
    auto it = column.find(name);
    return it == column.end() ? std::nullopt : std::optional(it->second);
  };
  const auto col_price = find("price");
  const auto col_cost = find("cost");
  const auto col_lead = find("lead_time");
  const auto col_vol = find("vol");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<RawRow>> by_sku;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    const long row = static_cast<long>(r);  // 1-based data row
    const auto fail = [&](const std::string& what, const std::string& col) {
      return DataError(source_name + ": row " + std::to_string(row) + " (line " +
                           std::to_string(row + 1) + "), column '" + col + "': " + what,
                       row, col);
    };
    if (fields.size() != header.size()) {
      throw fail("expected " + std::to_string(header.size()) + " fields, found " +
                     std::to_string(fields.size()),
                 "*");
    }
    const auto integer = [&](const char* name) {
      const auto v = parse_int(fields[column.at(name)]);
      if (!v) throw fail("not an integer: '" + fields[column.at(name)] + "'", name);
      return *v;
    };
    RawRow raw{row, integer("t"), integer("demand"), {}, {}, {}, {}};
    if (raw.t < 0) throw fail("negative step", "t");
    if (raw.demand < 0) throw fail("negative demand " + std::to_string(raw.demand), "demand");
    const auto decimal = [&](std::optional<std::size_t> c, const char* name) -> std::optional<Money> {
      if (!c || csv::trim(fields[*c]).empty()) return std::nullopt;
      try {
        auto v = Money::parse(fields[*c]);
        if (v < Money{}) throw fail("negative value", name);
        return v;
      } catch (const std::invalid_argument&) {
        throw fail("not a decimal: '" + fields[*c] + "'", name);
      }
    };
    raw.price = decimal(col_price, "price");
    raw.cost = decimal(col_cost, "cost");
    if (col_lead && !csv::trim(fields[*col_lead]).empty()) {
      const auto v = parse_int(fields[*col_lead]);
      if (!v || *v < 1) throw fail("lead time must be an integer >= 1", "lead_time");
      raw.lead_time = static_cast<int>(*v);
    }
    if (col_vol && !csv::trim(fields[*col_vol]).empty()) {
      const auto v = parse_int(fields[*col_vol]);
      if (!v || *v < 1) throw fail("volume must be an integer >= 1", "vol");
      raw.volume = *v;
    }
    const std::string id = csv::trim(fields[column.at("sku_id")]);
    auto [it, inserted] = by_sku.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.push_back(std::move(raw));
  }

  if (static_cast<int>(order.size()) < sku_count) {
    throw DataError(source_name + ": found " + std::to_string(order.size()) + " SKUs, need " +
                        std::to_string(sku_count),
                    0, "sku_id");
  }
  const Step horizon = static_cast<Step>(by_sku.at(order.front()).size());
  SeriesSet out(sku_count, horizon);
  for (int j = 0; j < sku_count; ++j) {
    const auto& id = order[j];
    auto& raws = by_sku.at(id);
    std::vector<const RawRow*> at(static_cast<std::size_t>(horizon), nullptr);
    for (const auto& raw : raws) {
      if (raw.t >= horizon || at[raw.t] != nullptr) {
        throw DataError(source_name + ": row " + std::to_string(raw.row) + ", column 't': SKU '" +
                            id + "' has duplicate or out-of-range step " + std::to_string(raw.t) +
                            " (horizon " + std::to_string(horizon) + ")",
                        raw.row, "t");
      }
      at[raw.t] = &raw;
    }
    if (static_cast<Step>(raws.size()) != horizon) {
      throw DataError(source_name + ": SKU '" + id + "' has " + std::to_string(raws.size()) +
                          " steps, expected " + std::to_string(horizon),
                      0, "t");
    }
    out.set_sku_id(j, id);
    std::optional<Quantity> volume;
    for (Step t = 0; t < horizon; ++t) {
      const RawRow& raw = *at[t];
      out.demand(t, j) = raw.demand;
      out.price(t, j) = raw.price.value_or(options.default_price);
      out.cost(t, j) = raw.cost.value_or(options.default_cost);
      out.lead_time(t, j) = raw.lead_time.value_or(options.default_lead_time);
      if (raw.volume) {
        if (volume && *volume != *raw.volume) {
          throw DataError(source_name + ": row " + std::to_string(raw.row) +
                              ", column 'vol': unit volume changes over time",
                          raw.row, "vol");
        }
        volume = raw.volume;
      }
    }
    out.volume(j) = volume.value_or(options.default_volume);
  }
  return out;
}

SeriesSet load_series(const std::filesystem::path& path, int sku_count, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open series file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_series_csv(buffer.str(), sku_count, options, path.string());
}

void write_series_csv(const SeriesSet& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "sku_id,t,demand,price,cost,lead_time,vol\n";
  for (int j = 0; j < series.skus(); ++j) {
    for (Step t = 0; t < series.horizon(); ++t) {
      out << series.sku_id(j) << ',' << t << ',' << series.demand(t, j) << ','
          << series.price(t, j).to_string() << ',' << series.cost(t, j).to_string() << ','
          << series.lead_time(t, j) << ',' << series.volume(j) << '\n';
    }
  }
}

// --- Generation ------------------------------------------------------------

namespace {
constexpr std::uint64_t kRateStream = 1;
constexpr std::uint64_t kDemandStream = 2;
constexpr std::uint64_t kGapStream = 3;
constexpr std::uint64_t kNoiseStream = 4;

Money cents(double value) { return Money::from_raw(std::llround(value * 100.0) * 10'000); }
}  // namespace

double synthetic_demand_rate(std::uint64_t seed, int j, const SyntheticProfile& profile) {
  Rng rng(mix_seed(seed, kRateStream), static_cast<std::uint64_t>(j));
  return rng.uniform(profile.demand_rate_min, profile.demand_rate_max);
}

SeriesSet generate_synthetic(std::uint64_t seed, int sku_count, Step horizon,
                             const SyntheticProfile& profile) {
  SeriesSet out(sku_count, horizon);
  for (int j = 0; j < sku_count; ++j) {
    Rng params(mix_seed(seed, kRateStream), static_cast<std::uint64_t>(j));
    const double rate = params.uniform(profile.demand_rate_min, profile.demand_rate_max);
    const Money cost = max(cents(params.uniform(profile.cost_min, profile.cost_max)), cents(0.01));
    const Money price = cents(cost.to_double() * params.uniform(profile.markup_min, profile.markup_max));
    const int lead = static_cast<int>(params.uniform_int(profile.lead_time_min, profile.lead_time_max));

    Rng demand(mix_seed(seed, kDemandStream), static_cast<std::uint64_t>(j));
    for (Step t = 0; t < horizon; ++t) {
      out.demand(t, j) = demand.poisson(rate);
      out.price(t, j) = price;
      out.cost(t, j) = cost;
      out.lead_time(t, j) = lead;
    }
  }
  return out;
}

// --- Transforms ------------------------------------------------------------

SeriesSet apply_gap(const SeriesSet& series, int level, std::uint64_t seed, StepRange range,
                    const GapOptions& options) {
  if (level < 0 || level > 6) throw ConfigError("gap level must be in 0..6");
  SeriesSet out = series;
  if (level == 0) return out;
  const SeriesView view(series, range);
  for (int j = 0; j < series.skus(); ++j) {
    Rng rng(mix_seed(seed, kGapStream), static_cast<std::uint64_t>(j));
    const double u = rng.uniform(-1.0, 1.0);
    const auto delta =
        static_cast<Quantity>(std::llround(u * options.scale * level * view.mean_demand(j)));
    for (Step t = range.begin; t < range.end; ++t) {
      out.demand(t, j) = std::max<Quantity>(0, series.demand(t, j) + delta);
    }
  }
  return out;
}

SeriesSet apply_noise(const SeriesSet& series, int level, std::uint64_t seed, StepRange range,
                      const NoiseOptions& options) {
  if (level < 0 || level > 6) throw ConfigError("noise level must be in 0..6");
  SeriesSet out = series;
  if (level == 0) return out;
  (void)SeriesView(series, range);  // range check
  const double sigma = options.scale * level;
  for (int j = 0; j < series.skus(); ++j) {
    Rng rng(mix_seed(seed, kNoiseStream), static_cast<std::uint64_t>(j));
    for (Step t = range.begin; t < range.end; ++t) {
      const double eps = sigma * rng.normal();
      const double noisy = static_cast<double>(series.demand(t, j)) * (1.0 + eps);
      out.demand(t, j) = std::max<Quantity>(0, std::llround(noisy));
    }
  }
  return out;
}

}  // namespace invsim
