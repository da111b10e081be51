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

// Command-line front end. Results go to stdout as one JSON object per line;
// failures print {"error": code, "message": ...} to stderr and exit 2.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "invsim/episode.hpp"
#include "invsim/error.hpp"
#include "invsim/harness.hpp"
#include "invsim/policy.hpp"
#include "invsim/task.hpp"

using namespace invsim;
using nlohmann::ordered_json;

namespace {

EngineKind parse_engine(const std::string& s) {
  if (s == "matrix") return EngineKind::Matrix;
  if (s == "reference") return EngineKind::ScalarReference;
  throw ConfigError("unknown engine '" + s + "' (expected matrix or reference)");
}

int fail(const std::string& code, const std::string& message) {
  std::cerr << ordered_json{{"error", code}, {"message", message}}.dump() << std::endl;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-echelon inventory simulator"};
  app.require_subcommand(1);

  std::string task_name, policy = "bs-static", split_name = "test", out, engine = "matrix";
  std::uint64_t seed = 0;
  std::size_t html_rows = 50000;

  auto* run_cmd = app.add_subcommand("run", "Run one episode and write a report");
  run_cmd->add_option("--task", task_name, "Task name or task file")->required();
  run_cmd->add_option("--policy", policy, "never|bs-static|bs-dynamic|bs-warmup|ss-static|ss-hindsight|external:<csv>");
  run_cmd->add_option("--split", split_name, "train|val|test");
  run_cmd->add_option("--seed", seed, "0 keeps the task's own data seed");
  run_cmd->add_option("--out", out, "Report directory");
  run_cmd->add_option("--engine", engine, "matrix|reference");
  run_cmd->add_option("--html-rows", html_rows, "Rows per warehouse page (0 = all)");

  bool as_json = false;
  auto* list_cmd = app.add_subcommand("list-tasks", "List built-in tasks");
  list_cmd->add_flag("--json", as_json, "Print each task as a JSON spec");

  auto* solve_cmd = app.add_subcommand("solve", "Fit policy parameters and write them as CSV");
  solve_cmd->add_option("--task", task_name)->required();
  solve_cmd->add_option("--policy", policy, "bs-static|ss-static|ss-hindsight")->required();
  solve_cmd->add_option("--split", split_name, "Evaluation split (hindsight fits on it)");
  solve_cmd->add_option("--seed", seed);
  solve_cmd->add_option("--out", out, "Parameter CSV")->required();

  int reps = 5;
  Step steps = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Measure engine steps per second");
  bench_cmd->add_option("--task", task_name)->required();
  std::string bench_policy = "bs-warmup";
  bench_cmd->add_option("--policy", bench_policy);
  bench_cmd->add_option("--reps", reps);
  bench_cmd->add_option("--steps", steps, "Steps per repetition (0 = whole test range)");
  bench_cmd->add_option("--engine", engine);
  bench_cmd->add_option("--seed", seed);

  std::string run_dir;
  auto* report_cmd = app.add_subcommand("report", "Rebuild HTML from a run's CSVs and check its metric");
  report_cmd->add_option("--run", run_dir)->required();
  report_cmd->add_option("--html-rows", html_rows);

  std::string actions_file;
  auto* episode_cmd = app.add_subcommand("episode", "Replay an action script through the agent interface");
  episode_cmd->add_option("--task", task_name)->required();
  episode_cmd->add_option("--split", split_name);
  episode_cmd->add_option("--seed", seed);
  episode_cmd->add_option("--actions", actions_file, "CSV, one row of action indices per step")->required();

  std::string export_dir;
  auto* export_cmd = app.add_subcommand("export-tasks", "Write every built-in task as a JSON file");
  export_cmd->add_option("--dir", export_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*list_cmd) {
      for (const TaskSpec& s : builtin_tasks()) {
        if (as_json) {
          std::cout << ordered_json::parse(task_spec_to_json(s)).dump() << '\n';
        } else {
          std::cout << s.name << '\n';
        }
      }
      return 0;
    }
    if (*export_cmd) {
      std::filesystem::create_directories(export_dir);
      for (const TaskSpec& s : builtin_tasks()) save_task_spec(s, std::filesystem::path(export_dir) / (s.name + ".json"));
      std::cout << ordered_json{{"written", builtin_tasks().size()}, {"dir", export_dir}}.dump() << '\n';
      return 0;
    }
    if (*report_cmd) {
      const ReportSummary s = regenerate_report(run_dir, html_rows);
      const auto meta = ordered_json::parse(std::ifstream(std::filesystem::path(run_dir) / "run.json"));
      const std::string recorded = meta.at("metric").get<std::string>();
      const bool match = recorded == s.metric.to_string();
      std::cout << ordered_json{{"run", run_dir},
                                {"total_profit", s.total_profit.to_string()},
                                {"metric", s.metric.to_string()},
                                {"recorded_metric", recorded},
                                {"match", match}}
                       .dump()
                << '\n';
      return match ? 0 : fail("metric_mismatch", "metric recomputed from CSV differs from run.json");
    }

    const Split split = parse_split(split_name);
    const Task task = build_task(task_name, seed);

    if (*episode_cmd) {
      EpisodeOptions options;
      options.split = split;
      options.seed = seed;
      Episode env(std::make_shared<const Task>(task), options);
      auto emit = [](Step t, const StepResult& r) {
        std::vector<std::string> reward;
        for (Money m : r.reward) reward.push_back(m.to_string());
        std::cout << ordered_json{{"t", t}, {"observation", r.observation}, {"reward", reward}, {"done", r.done}}.dump()
                  << '\n';
      };
      const StepResult first = env.reset();
      emit(env.state().t, first);
      std::ifstream in(actions_file);
      if (!in) throw DataError("cannot open " + actions_file);
      std::string line;
      while (!env.done() && std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<int> actions;
        std::stringstream cells(line);
        for (std::string cell; std::getline(cells, cell, ',');) actions.push_back(std::stoi(cell));
        const StepResult r = env.step(actions);
        emit(env.state().t, r);
      }
      return 0;
    }
    if (*run_cmd) {
      RunOptions options;
      options.engine = parse_engine(engine);
      options.html_max_rows = html_rows;
      if (!out.empty()) options.out_dir = out;
      const RunResult r = run(task, policy, split, seed, options);
      std::cout << ordered_json{{"task", r.task},
                                {"policy", r.policy},
                                {"split", to_string(r.split)},
                                {"seed", r.seed},
                                {"steps", r.range.length()},
                                {"agents", r.agents()},
                                {"total_profit", r.total_profit.to_string()},
                                {"metric", r.metric.to_string()},
                                {"wall_seconds", r.wall_seconds},
                                {"peak_bytes", r.peak_bytes}}
                       .dump()
                << '\n';
      return 0;
    }
    if (*solve_cmd) {
      if (policy == "bs-static") {
        write_base_stock_params(fit_base_stock_static(task), task.series(), out);
      } else if (policy == "ss-static") {
        write_ss_params(fit_ss_static(task), task.series(), out);
      } else if (policy == "ss-hindsight") {
        write_ss_params(fit_ss_hindsight(task, split), task.series(), out);
      } else {
        throw ConfigError("solve supports bs-static, ss-static and ss-hindsight");
      }
      std::cout << ordered_json{{"task", task.name()}, {"policy", policy}, {"out", out}}.dump() << '\n';
      return 0;
    }
    if (*bench_cmd) {
      const BenchmarkResult b = benchmark_throughput(task, bench_policy, reps, steps, parse_engine(engine));
      std::cout << ordered_json{{"task", task.name()},
                                {"policy", bench_policy},
                                {"engine", engine},
                                {"agents", task.agents()},
                                {"steps", b.steps},
                                {"median_steps_per_second", b.median_steps_per_second},
                                {"samples", b.samples}}
                       .dump()
                << '\n';
      return 0;
    }
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
