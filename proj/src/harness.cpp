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

#include "invsim/harness.hpp"

#include <algorithm>
#include <chrono>

#include "invsim/error.hpp"

namespace invsim {

Money metric_from_total(Money total, int agents) {
  if (agents <= 0) throw ConfigError("metric needs at least one agent");
  return total.divided_by(agents);
}

Money metric_from_records(const std::vector<StepRecord>& records, int agents) {
  Money total;
  for (const StepRecord& r : records) {
    for (Money p : r.profit.flat()) total += p;
  }
  return metric_from_total(total, agents);
}

namespace {

std::size_t state_bytes(const EnvState& s) {
  return s.pipeline.bytes() + (s.inventory.flat().size() + s.pending_demand.flat().size()) * sizeof(Quantity);
}

}  // namespace

RunResult run(const Task& task, Policy& policy, Split split, std::uint64_t seed, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const int m = task.echelons();
  const int n = task.skus();
  const SeriesSet& series = task.series();

  RunResult result;
  result.task = task.name();
  result.policy = policy.name();
  result.split = split;
  result.seed = seed;
  result.range = task.range(split);
  result.echelons = m;
  result.skus = n;
  result.gmv = Matrix<Money>(m, n, Money{});
  result.holding = Matrix<Money>(m, n, Money{});
  result.step_profit.reserve(result.range.length());

  std::optional<ReportWriter> writer;
  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    writer.emplace(*options.out_dir, series, m);
  }

  EnvState state = task.start_state(split);
  Matrix<Quantity> orders(m, n, 0);
  StepRecord record;
  std::size_t peak = series.bytes();
  for (Step t = result.range.begin; t < result.range.end; ++t) {
    const Matrix<Quantity> demand = current_demand(state, series);
    policy.orders(state, demand, orders);
    if (options.engine == EngineKind::Matrix) {
      step(state, orders, series, task.network(), record);
    } else {
      step_scalar_reference(state, orders, series, task.network(), record);
    }
    policy.observe(record);

    Money step_total;
    const auto profit = record.profit.flat();
    const auto income = record.income.flat();
    const auto holding = record.holding_cost.flat();
    auto gmv = result.gmv.flat();
    auto hold = result.holding.flat();
    for (std::size_t k = 0; k < profit.size(); ++k) {
      step_total += profit[k];
      gmv[k] += income[k];
      hold[k] += holding[k];
    }
    result.step_profit.push_back(step_total);
    result.total_profit += step_total;
    if (writer) writer->add(record);
    if (options.keep_records) result.records.push_back(record);
    peak = std::max(peak, series.bytes() + state_bytes(state) + record.bytes() * (1 + result.records.size()));
  }
  result.metric = metric_from_total(result.total_profit, m * n);
  result.peak_bytes = peak;
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (writer) {
    writer->close();
    write_run_json(result, *options.out_dir);
    regenerate_report(*options.out_dir, options.html_max_rows);
  }
  return result;
}

RunResult run(const Task& task, const std::string& policy, Split split, std::uint64_t seed,
              const RunOptions& options) {
  auto p = make_policy(policy, task, split);
  return run(task, *p, split, seed, options);
}

Matrix<Money> compute_gmv(const RunResult& run) {
  if (run.records.empty()) return run.gmv;
  Matrix<Money> gmv(run.echelons, run.skus, Money{});
  for (const StepRecord& r : run.records) {
    for (int i = 0; i < run.echelons; ++i) {
      for (int j = 0; j < run.skus; ++j) gmv(i, j) += r.income(i, j);
    }
  }
  return gmv;
}

BenchmarkResult benchmark_throughput(const Task& task, const std::string& policy, int repetitions, Step steps,
                                     EngineKind engine) {
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  const StepRange range = task.range(Split::Test);
  const Step length = steps > 0 ? std::min(steps, range.length()) : range.length();
  const EnvState start = task.start_state(Split::Test);
  auto p = make_policy(policy, task, Split::Test);

  Matrix<Quantity> orders(task.echelons(), task.skus(), 0);
  StepRecord record;
  auto pass = [&] {
    EnvState state = start;
    for (Step k = 0; k < length; ++k) {
      const Matrix<Quantity> demand = current_demand(state, task.series());
      p->orders(state, demand, orders);
      if (engine == EngineKind::Matrix) {
        step(state, orders, task.series(), task.network(), record);
      } else {
        step_scalar_reference(state, orders, task.series(), task.network(), record);
      }
      p->observe(record);
    }
  };

  BenchmarkResult out;
  out.steps = length;
  pass();  // warm caches
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    pass();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.samples.push_back(static_cast<double>(length) / std::max(seconds, 1e-9));
  }
  std::vector<double> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  out.median_steps_per_second = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return out;
}

}  // namespace invsim
