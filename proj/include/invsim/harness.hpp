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
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "invsim/engine.hpp"
#include "invsim/policy.hpp"
#include "invsim/task.hpp"

namespace invsim {

struct RunOptions {
  EngineKind engine = EngineKind::Matrix;
  bool keep_records = false;
  // When set, the per-warehouse CSVs are streamed while the run executes and
  // the HTML pages and run.json are written from them afterwards.
  std::optional<std::filesystem::path> out_dir;
  std::size_t html_max_rows = 50000;  // per warehouse page; 0 means all
};

struct RunResult {
  std::string task;
  std::string policy;
  Split split = Split::Test;
  std::uint64_t seed = 0;
  StepRange range;
  int echelons = 0;
  int skus = 0;
  std::vector<StepRecord> records;  // only with keep_records
  std::vector<Money> step_profit;   // summed over (i, j), one per step
  Money total_profit;
  Money metric;                     // total_profit / (M * N)
  Matrix<Money> gmv;                // sum of p * S per (i, j)
  Matrix<Money> holding;            // sum of holding cost per (i, j)
  double wall_seconds = 0.0;
  std::size_t peak_bytes = 0;       // engine-allocated matrices, estimate

  int agents() const { return echelons * skus; }
};

// total / agents, rounded half away from zero to the micro-unit.
Money metric_from_total(Money total, int agents);
// Recomputes the metric from stored records.
Money metric_from_records(const std::vector<StepRecord>& records, int agents);

RunResult run(const Task& task, Policy& policy, Split split, std::uint64_t seed = 0, const RunOptions& options = {});
// Builds the policy from its CLI name first.
RunResult run(const Task& task, const std::string& policy, Split split, std::uint64_t seed = 0,
              const RunOptions& options = {});

// Per (i, j): sum over the run of S * p. Needs either records or the
// accumulated matrix, which run() always fills.
Matrix<Money> compute_gmv(const RunResult& run);

// --- Reports -------------------------------------------------------------------

// Appends StepRecords to warehouse_<i>.csv files.
class ReportWriter {
 public:
  ReportWriter(const std::filesystem::path& dir, const SeriesSet& series, int echelons);
  void add(const StepRecord& record);
  void close();

 private:
  const SeriesSet* series_;
  std::vector<std::unique_ptr<std::ofstream>> files_;
};

std::vector<std::string> report_columns();
std::filesystem::path warehouse_csv_path(const std::filesystem::path& dir, int warehouse);

// Writes CSVs from run.records (keep_records must have been set), then the
// HTML pages and run.json.
void emit_report(const RunResult& run, const SeriesSet& series, const std::filesystem::path& out_dir,
                 std::size_t html_max_rows = 50000);

struct WarehouseTotals {
  std::size_t rows = 0;
  std::vector<std::string> columns;  // numeric columns, CSV order
  std::vector<Money> sums;           // same order
};

struct ReportSummary {
  std::vector<WarehouseTotals> warehouses;
  Money total_profit;
  Money metric;
  int agents = 0;
};

// Reads the CSVs in `dir` and recomputes every total and the metric.
ReportSummary summarize_report(const std::filesystem::path& dir, int agents);

// Regenerates index.html, warehouse_<i>.html and sku_audit.csv from the CSVs
// and run.json in `dir`; returns the recomputed summary.
ReportSummary regenerate_report(const std::filesystem::path& dir, std::size_t html_max_rows = 50000);

// Writes run.json (no records) into dir.
void write_run_json(const RunResult& run, const std::filesystem::path& dir);

// --- Benchmark -------------------------------------------------------------------

struct BenchmarkResult {
  double median_steps_per_second = 0.0;
  std::vector<double> samples;  // steps/second per repetition
  Step steps = 0;
};

// Runs `steps` steps of the test split from its warmed start state per
// repetition after one untimed pass. steps <= 0 means the whole range.
BenchmarkResult benchmark_throughput(const Task& task, const std::string& policy, int repetitions, Step steps = 0,
                                     EngineKind engine = EngineKind::Matrix);

}  // namespace invsim
