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

#include <cmath>

#include "invsim/engine.hpp"
#include "invsim/error.hpp"

namespace invsim {

Matrix<Quantity> warmup_levels(const SeriesSet& series, int echelons, StepRange window) {
  Matrix<Quantity> levels(echelons, series.skus(), 0);
  if (window.empty()) return levels;
  const SeriesView view(series, window);
  for (int j = 0; j < series.skus(); ++j) {
    const double level = view.mean_demand(j) * (view.mean_lead_time(j) + 1.0);
    const auto rounded = static_cast<Quantity>(std::llround(level));
    for (int i = 0; i < echelons; ++i) levels(i, j) = rounded;
  }
  return levels;
}

EnvState warmup(EnvState state, const SeriesSet& series, const Network& network, Step length,
                const WarmupRule& rule, EngineKind engine) {
  if (length < 0) throw ConfigError("warmup length must be non-negative");
  if (length == 0) return state;
  const StepRange window{state.t, state.t + length};
  if (window.end > series.horizon()) throw ConfigError("warmup runs past the series horizon");

  const int m = state.echelons();
  const int n = state.skus();
  const Matrix<Quantity> levels = warmup_levels(series, m, window);
  Matrix<Quantity> orders(m, n, 0);
  StepRecord record;
  for (Step k = 0; k < length; ++k) {
    const Matrix<Quantity> demand = current_demand(state, series);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const Quantity position = state.position_after_sales(i, j, demand(i, j));
        orders(i, j) = position < levels(i, j) ? levels(i, j) - position : 0;
      }
    }
    if (engine == EngineKind::Matrix) {
      step(state, orders, series, network, record);
    } else {
      step_scalar_reference(state, orders, series, network, record);
    }
    if (rule.on_step) rule.on_step(record);
  }
  return state;
}

}  // namespace invsim
