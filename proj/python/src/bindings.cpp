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

// Python boundary: flat numpy arrays in and out, plus the JSON manifest.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "invsim/episode.hpp"
#include "invsim/error.hpp"
#include "invsim/task.hpp"

namespace py = pybind11;
using namespace invsim;

namespace {

class BoundEnv {
 public:
  BoundEnv(const std::string& task, const std::string& split, std::uint64_t seed) {
    EpisodeOptions options;
    options.split = parse_split(split);
    options.seed = seed;
    episode_ = std::make_unique<Episode>(std::make_shared<const Task>(build_task(task, seed)), options);
  }

  py::tuple reset() {
    const StepResult r = open().reset();
    return py::make_tuple(observation(r), info(r));
  }

  py::tuple step(py::array_t<int, py::array::c_style | py::array::forcecast> actions) {
    Episode& env = open();
    if (actions.ndim() != 1 || actions.shape(0) != env.agents()) {
      throw ConfigError("actions must have shape (" + std::to_string(env.agents()) + ",)");
    }
    const std::vector<int> a(actions.data(), actions.data() + actions.shape(0));
    StepResult r;
    {
      py::gil_scoped_release release;
      r = env.step(a);
    }
    py::array_t<double> reward(static_cast<py::ssize_t>(r.reward.size()));
    auto out = reward.mutable_unchecked<1>();
    for (std::size_t k = 0; k < r.reward.size(); ++k) out(k) = r.reward[k].to_double();
    return py::make_tuple(observation(r), reward, r.done, info(r));
  }

  void close() { episode_.reset(); }
  bool closed() const { return !episode_; }
  int agents() { return open().agents(); }
  bool done() { return open().done(); }
  std::int64_t t() { return open().state().t; }
  std::vector<std::string> features() {
    std::vector<std::string> names;
    for (Feature f : open().observation_spec().features) names.emplace_back(feature_name(f));
    return names;
  }
  std::vector<double> multipliers() {
    std::vector<double> out;
    for (Money m : open().action_space().multipliers) out.push_back(m.to_double());
    return out;
  }
  std::string manifest() { return open().feature_manifest(); }

 private:
  Episode& open() {
    if (!episode_) throw EpisodeError("environment is closed");
    return *episode_;
  }

  py::array_t<double> observation(const StepResult& r) {
    const py::ssize_t agents = open().agents();
    const py::ssize_t width = agents ? static_cast<py::ssize_t>(r.observation.size()) / agents : 0;
    py::array_t<double> obs({agents, width});
    std::copy(r.observation.begin(), r.observation.end(), obs.mutable_data());
    return obs;
  }

  // Exact rewards as micro-unit integers and decimal strings.
  py::dict info(const StepResult& r) {
    py::array_t<std::int64_t> raw(static_cast<py::ssize_t>(r.reward.size()));
    auto out = raw.mutable_unchecked<1>();
    py::list text;
    for (std::size_t k = 0; k < r.reward.size(); ++k) {
      out(k) = r.reward[k].raw();
      text.append(r.reward[k].to_string());
    }
    py::dict d;
    d["t"] = open().state().t;
    d["reward_micro"] = raw;
    d["reward_text"] = text;
    return d;
  }

  std::unique_ptr<Episode> episode_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the invsim inventory simulator";
  py::register_exception<Error>(m, "InvsimError", PyExc_ValueError);

  py::class_<BoundEnv>(m, "Env")
      .def(py::init<const std::string&, const std::string&, std::uint64_t>(), py::arg("task"),
           py::arg("split") = "test", py::arg("seed") = 0)
      .def("reset", &BoundEnv::reset)
      .def("step", &BoundEnv::step, py::arg("actions"))
      .def("close", &BoundEnv::close)
      .def("manifest", &BoundEnv::manifest)
      .def_property_readonly("closed", &BoundEnv::closed)
      .def_property_readonly("agents", &BoundEnv::agents)
      .def_property_readonly("done", &BoundEnv::done)
      .def_property_readonly("t", &BoundEnv::t)
      .def_property_readonly("features", &BoundEnv::features)
      .def_property_readonly("multipliers", &BoundEnv::multipliers);

  m.def("engine_version", [] { return std::string(engine_version()); });
  m.def("registry_hash", [] { return registry_hash(); });
  m.def("task_names", [] {
    std::vector<std::string> names;
    for (const TaskSpec& s : builtin_tasks()) names.push_back(s.name);
    return names;
  });
}
