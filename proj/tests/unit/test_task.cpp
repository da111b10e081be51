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


#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "../support.hpp"
#include "invsim/error.hpp"
#include "invsim/task.hpp"

using namespace invsim;
using namespace invsim::literals;

TEST_CASE("registry holds exactly the expected tasks") {
  const auto& tasks = builtin_tasks();
  REQUIRE(tasks.size() == 51);
  for (std::size_t k = 0; k < tasks.size(); ++k) CHECK(tasks[k].name == testing::expected_task_names()[k]);
  for (const TaskSpec& s : tasks) s.validate();
}

TEST_CASE("standard task configuration") {
  const Task task = build_task("sku200.single_store.standard");
  CHECK(task.skus() == 200);
  CHECK(task.echelons() == 1);
  CHECK(task.network().warehouses[0].capacity == 20000);
  const CostParams& c = task.network().costs[0];
  CHECK(c.order == LinearCost::constant(10_dec));
  CHECK(c.holding == LinearCost::constant(0.003_dec));
  CHECK(c.backlog == LinearCost{Money{}, 0.1_dec, -0.1_dec});
  CHECK(c.overflow == LinearCost{Money{}, Money{}, 0.5_dec});
  // p = 10, c = 6
  CHECK(c.backlog.at(10_dec, 6_dec) == 0.4_dec);
  CHECK(c.overflow.at(10_dec, 6_dec) == 3_dec);
  CHECK(task.series().horizon() == 1825);
  CHECK(task.range(Split::Train) == StepRange{0, 1095});
  CHECK(task.range(Split::Validation) == StepRange{1095, 1460});
  CHECK(task.range(Split::Test) == StepRange{1460, 1825});
}

TEST_CASE("multi-store tasks repeat capacity per warehouse") {
  const TaskSpec s = *find_builtin_task("sku500.2_stores.standard");
  CHECK(s.echelons == 2);
  CHECK(s.sku_count == 500);
  const Task task = build_task(s);
  REQUIRE(task.network().echelons() == 2);
  CHECK(task.network().warehouses[0].capacity == 50000);
  CHECK(task.network().warehouses[1].capacity == 50000);
}

TEST_CASE("capacity rule") {
  const CapacityRule r = CapacityRule::parse("#SKU * 25");
  CHECK(r.evaluate(200) == 5000);
  CHECK(r.to_string() == "#SKU * 25");
  CHECK(CapacityRule::parse("1234").evaluate(7) == 1234);
  CHECK(CapacityRule::parse(r.to_string()) == r);
  CHECK_THROWS_AS(CapacityRule::parse("#SKU times 3"), ConfigError);
}

TEST_CASE("variants change one knob") {
  CHECK(find_builtin_task("sku200.2_stores.lowest_capacity")->capacity.evaluate(200) == 5000);
  CHECK(find_builtin_task("sku200.single_store.highest_order_cost")->costs[0].order == LinearCost::constant(50_dec));
  CHECK(find_builtin_task("sku200.single_store.add_gap_3")->transforms.gap_level == 3);
  CHECK(find_builtin_task("sku200.single_store.add_noise_6")->transforms.noise_level == 6);

  const Task standard = build_task("sku200.single_store.standard");
  const Task gap = build_task("sku200.single_store.add_gap_4");
  const StepRange test = gap.range(Split::Test);
  bool changed = false;
  for (int j = 0; j < 200; ++j) {
    for (Step t = 0; t < test.begin; ++t) REQUIRE(gap.series().demand(t, j) == standard.series().demand(t, j));
    changed = changed || gap.series().demand(test.begin, j) != standard.series().demand(test.begin, j);
  }
  CHECK(changed);

  const Task vlt = build_task("sku200.single_store.dynamic_vlt");
  bool varies = false;
  for (int j = 0; j < 20; ++j) {
    const int base = standard.series().lead_time(0, j);
    for (Step t = 0; t < 200; ++t) {
      const int l = vlt.series().lead_time(t, j);
      REQUIRE(l >= std::max(1, base - 1));
      REQUIRE(l <= base + 1);
      varies = varies || l != base;
    }
  }
  CHECK(varies);

  const Task low = build_task("sku200.single_store.low_profit");
  const Money margin = standard.series().price(5, 3) - standard.series().cost(5, 3);
  CHECK(low.series().price(5, 3) - low.series().cost(5, 3) == margin.times(0.5_dec));
}

TEST_CASE("seeds") {
  const TaskSpec spec = testing::small_spec("tiny", 5, 1, 120, 41);
  const Task a = build_task(spec);
  CHECK(a.data_seed() == 41);
  CHECK(build_task(spec).series() == a.series());
  const Task b = build_task(spec, 3);
  CHECK(b.data_seed() != 41);
  CHECK_FALSE(b.series() == a.series());
  CHECK(build_task(spec, 3).series() == b.series());
}

TEST_CASE("warmup window and start state") {
  TaskSpec spec = testing::small_spec("tiny", 4, 2, 100, 9);
  spec.warmup_length = 30;
  const Task task = build_task(spec);
  CHECK(task.warmup_window(Split::Train) == StepRange{0, 0});
  CHECK(task.warmup_window(Split::Test) == StepRange{50, 80});
  CHECK(task.start_state(Split::Train) == EnvState::empty(2, 4, 0));
  const EnvState s = task.start_state(Split::Test);
  CHECK(s.t == 80);
  CHECK(s == task.start_state(Split::Test));
  Quantity stock = 0;
  for (Quantity q : s.inventory.flat()) stock += q;
  CHECK(stock > 0);
}

TEST_CASE("unknown names suggest neighbours") {
  try {
    build_task("sku200.single_stor.standard");
    FAIL("expected UnknownTaskError");
  } catch (const UnknownTaskError& e) {
    CHECK(std::string(e.what()).find("sku200.single_store.standard") != std::string::npos);
    CHECK(e.code() == "unknown_task");
  }
  CHECK(nearest_task_names("sku50.single_store.standrd", 1) == std::vector<std::string>{"sku50.single_store.standard"});
}

TEST_CASE("task specs survive json") {
  for (const TaskSpec& s : builtin_tasks()) {
    CHECK(task_spec_from_json(task_spec_to_json(s)) == s);
  }
  TaskSpec odd = testing::small_spec("odd", 3, 2, 90, 5);
  odd.costs = {standard_costs(), CostParams{}};
  odd.costs[1].holding = LinearCost{0.25_dec, 0.01_dec, Money{}};
  odd.accept = AcceptStrategy::RejectAll;
  odd.data.profile.lead_time_max = 3;
  odd.transforms.noise_level = 2;
  odd.transforms.margin_scale = 1.5_dec;
  odd.action_multipliers = {0_dec, 1_dec, 2.5_dec};
  odd.solver.refresh_interval = 7;
  CHECK(task_spec_from_json(task_spec_to_json(odd)) == odd);

  const auto path = std::filesystem::temp_directory_path() / "invsim_odd_task.json";
  save_task_spec(odd, path);
  CHECK(load_task_spec(path) == odd);
  CHECK(resolve_task_spec(path.string()) == odd);
  std::filesystem::remove(path);
}

TEST_CASE("bad task files are config errors") {
  CHECK_THROWS_AS(task_spec_from_json("{"), ConfigError);
  CHECK_THROWS_AS(task_spec_from_json(R"({"name": "x", "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(task_spec_from_json(R"({"name": "x", "echelons": 0})"), ConfigError);
  CHECK_THROWS_AS(task_spec_from_json(R"({"name": "x", "echelons": "two"})"), ConfigError);
}

TEST_CASE("split names") {
  CHECK(parse_split("val") == Split::Validation);
  CHECK(parse_split("validation") == Split::Validation);
  CHECK(std::string(to_string(Split::Test)) == "test");
  CHECK_THROWS_AS(parse_split("dev"), ConfigError);
}

TEST_CASE("csv-backed tasks") {
  const auto dir = std::filesystem::temp_directory_path() / "invsim_csv_task";
  std::filesystem::create_directories(dir);
  write_series_csv(generate_synthetic(4, 3, 60), dir / "demand.csv");
  TaskSpec spec = testing::small_spec("from_csv", 3, 1, 60, 1);
  spec.data.kind = DataSource::Kind::Csv;
  spec.data.path = (dir / "demand.csv").string();
  const Task task = build_task(spec);
  CHECK(task.series() == generate_synthetic(4, 3, 60));
  spec.sku_count = 4;
  CHECK_THROWS_AS(build_task(spec), DataError);
  std::filesystem::remove_all(dir);
}
