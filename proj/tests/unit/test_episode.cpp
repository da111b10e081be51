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

#include <cmath>
#include <json.hpp>

#include "../support.hpp"
#include "invsim/episode.hpp"
#include "invsim/error.hpp"

using namespace invsim;
using namespace invsim::literals;

namespace {

std::shared_ptr<const Task> small_task(int skus, int echelons, Step horizon, std::uint64_t seed) {
  return std::make_shared<const Task>(build_task(testing::small_spec("ep", skus, echelons, horizon, seed)));
}

int feature_index(const ObservationSpec& spec, Feature f) {
  for (int k = 0; k < spec.size(); ++k) {
    if (spec.features[k] == f) return k;
  }
  return -1;
}

}  // namespace

TEST_CASE("observation layout") {
  const ObservationSpec spec = ObservationSpec::standard();
  CHECK(spec.size() == kFeatureCount);
  CHECK(spec.sku_feature_count() == 8);
  CHECK(spec.warehouse_feature_count() == 5);
  CHECK(parse_feature(feature_name(Feature::RemainingSpace)) == Feature::RemainingSpace);

  auto task = small_task(5, 2, 150, 3);
  Episode ep(task);
  const StepResult r = ep.reset();
  CHECK(r.observation.size() == static_cast<std::size_t>(10 * kFeatureCount));
  CHECK(r.reward.empty());
  for (double v : r.observation) CHECK(std::isfinite(v));

  EpisodeOptions narrow;
  narrow.observation.features = {Feature::InStock, Feature::LeadTime, Feature::RemainingSpace};
  Episode small(task, narrow);
  CHECK(small.reset().observation.size() == 30u);
}

TEST_CASE("resets are deterministic") {
  auto task = small_task(6, 1, 150, 4);
  Episode a(task), b(task);
  CHECK(a.reset().observation == b.reset().observation);
  CHECK(a.state() == b.state());
  CHECK(a.state().t == task->range(Split::Test).begin);
  const std::vector<int> actions(6, 4);
  CHECK(a.step(actions).reward == b.step(actions).reward);
  CHECK(a.reset().observation == Episode(task).reset().observation);
}

TEST_CASE("remaining space after warmup") {
  auto task = small_task(8, 2, 200, 5);
  Episode ep(task);
  const StepResult r = ep.reset();
  const int k = feature_index(ep.observation_spec(), Feature::RemainingSpace);
  for (int i = 0; i < 2; ++i) {
    Quantity used = 0;
    for (int j = 0; j < 8; ++j) used += task->series().volume(j) * ep.state().inventory(i, j);
    const double capacity = static_cast<double>(task->network().warehouses[i].capacity);
    const double expected = (capacity - static_cast<double>(used)) / capacity;
    for (int j = 0; j < 8; ++j) {
      const double v = r.observation[static_cast<std::size_t>(i * 8 + j) * kFeatureCount + k];
      CHECK(v == doctest::Approx(expected).epsilon(1e-12));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("action conversion") {
  CHECK(convert_multiplier(2_dec, 5 * 21, 21) == 10);
  CHECK(convert_multiplier(0_dec, 100, 21) == 0);
  CHECK(convert_multiplier(1.5_dec, 7, 2) == 5);  // 5.25
  CHECK(convert_multiplier(0.5_dec, 5, 1) == 3);  // 2.5 rounds away from zero
  CHECK(convert_multiplier(3_dec, 0, 0) == 0);

  auto task = small_task(4, 2, 150, 6);
  Episode ep(task);
  ep.reset();
  const auto& mult = ep.action_space().multipliers;
  CHECK(mult.front() == Money{});
  CHECK(std::is_sorted(mult.begin(), mult.end()));
  CHECK(ep.convert_action(std::vector<int>(8, 0)) == Matrix<Quantity>(2, 4, 0));

  const DemandHistory& h = ep.demand_history();
  const int window = ep.action_space().window;
  std::vector<int> actions(8);
  for (int a = 0; a < 8; ++a) actions[a] = a % ep.action_space().size();
  const Matrix<Quantity> r = ep.convert_action(actions);
  for (int a = 0; a < 8; ++a) {
    CHECK(h.available(a, window) == static_cast<std::size_t>(window));
    CHECK(r.flat()[a] == convert_multiplier(mult[actions[a]], h.sum(a, window), window));
  }
  // Larger multipliers never order less.
  for (int a = 0; a < 8; ++a) {
    Quantity prev = 0;
    for (int k = 0; k < ep.action_space().size(); ++k) {
      std::vector<int> one(8, 0);
      one[a] = k;
      const Quantity q = ep.convert_action(one).flat()[a];
      CHECK(q >= prev);
      prev = q;
    }
  }
  actions[0] = ep.action_space().size();
  CHECK_THROWS_AS(ep.convert_action(actions), ConfigError);
  CHECK_THROWS_AS(ep.convert_action(std::vector<int>(7, 0)), ConfigError);
}

TEST_CASE("short history averages what is available") {
  DemandHistory h(1, 21);
  Matrix<Quantity> d(1, 1, 4);
  h.push(d);
  d(0, 0) = 8;
  h.push(d);
  CHECK(h.available(0, 21) == 2);
  CHECK(h.mean(0, 21) == 6.0);
  CHECK(h.sum(0, 1) == 8);
  CHECK(convert_multiplier(1_dec, h.sum(0, 21), h.available(0, 21)) == 6);
}

TEST_CASE("rewards decompose the step profit") {
  auto task = small_task(5, 3, 150, 7);
  Episode ep(task);
  ep.reset();
  int steps = 0;
  while (!ep.done()) {
    std::vector<int> actions(15);
    for (int a = 0; a < 15; ++a) actions[a] = (a + steps) % 6;
    const StepResult r = ep.step(actions);
    Money sum;
    for (Money x : r.reward) sum += x;
    REQUIRE(sum == r.record.total_profit());
    REQUIRE(r.reward.size() == 15u);
    ++steps;
    CHECK(r.done == (steps == task->range(Split::Test).length()));
  }
  CHECK(steps == task->range(Split::Test).length());
  CHECK_THROWS_AS(ep.step(std::vector<int>(15, 0)), EpisodeError);
}

TEST_CASE("an empty store pays only backlog") {
  TaskSpec spec = testing::small_spec("empty", 4, 1, 100, 8);
  spec.warmup_length = 0;
  auto task = std::make_shared<const Task>(build_task(spec));
  EpisodeOptions opts;
  opts.split = Split::Train;
  Episode ep(task, opts);
  ep.reset();
  const StepResult r = ep.step(std::vector<int>(4, 0));
  for (int j = 0; j < 4; ++j) {
    const Money p = task->series().price(0, j), c = task->series().cost(0, j);
    const Money k = task->network().costs[0].backlog.at(p, c);
    CHECK(r.reward[j] == -(k * task->series().demand(0, j)));
  }
}

TEST_CASE("episode misuse") {
  auto task = small_task(3, 1, 100, 9);
  Episode ep(task);
  CHECK_THROWS_AS(ep.step(std::vector<int>(3, 0)), EpisodeError);
}

TEST_CASE("normalization") {
  RollingStats s;
  CHECK(normalize(5.0, s) == 0.0);
  s.push(5.0);
  CHECK(normalize(5.0, s) == 0.0);
  s.push(5.0);
  CHECK(normalize(5.0, s) == 0.0);
  RollingStats w(2);
  for (double x : {1.0, 100.0, 3.0, 5.0}) w.push(x);
  CHECK(w.count() == 4);
  CHECK(w.mean() == 4.0);
  CHECK(w.stddev() == 1.0);
  CHECK(normalize(6.0, w) == 2.0);

  auto task = small_task(3, 1, 120, 10);
  EpisodeOptions on;
  on.normalize_observations = true;
  on.normalize_rewards = true;
  Episode a(task, on), b(task);
  const StepResult ra = a.reset();
  const StepResult rb = b.reset();
  CHECK(ra.observation == rb.observation);
  CHECK(ra.observation_norm.size() == ra.observation.size());
  CHECK(rb.observation_norm.empty());
  for (double v : ra.observation_norm) CHECK(v == 0.0);  // nothing pushed yet
  const StepResult sa = a.step({2, 2, 2});
  const StepResult sb = b.step({2, 2, 2});
  CHECK(sa.reward == sb.reward);
  CHECK(sa.reward_norm.size() == 3u);
  CHECK(sb.reward_norm.empty());
}

TEST_CASE("feature manifest") {
  auto task = small_task(3, 2, 100, 11);
  Episode ep(task);
  const auto j = nlohmann::json::parse(ep.feature_manifest());
  CHECK(j.at("engine_version") == engine_version());
  CHECK(j.at("agents") == 6);
  CHECK(j.at("features").size() == static_cast<std::size_t>(kFeatureCount));
  CHECK(registry_hash() == registry_hash());
}

TEST_CASE("both engines drive identical episodes") {
  auto task = small_task(6, 2, 150, 12);
  EpisodeOptions ref;
  ref.engine = EngineKind::ScalarReference;
  Episode a(task), b(task, ref);
  CHECK(a.reset().observation == b.reset().observation);
  while (!a.done()) {
    const std::vector<int> actions(12, 5);
    const StepResult x = a.step(actions), y = b.step(actions);
    REQUIRE(x.record == y.record);
    REQUIRE(x.observation == y.observation);
  }
}
