/* Copyright 2026 The c7ga Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <iostream>
#include <optional>
#include <sstream>

#include "c7ga/studies.hpp"

namespace py = pybind11;
using namespace c7ga;

namespace {

py::dict grid_dict(const ScanGrid &g) {
  py::dict d;
  d["x_param"] = g.x.param;
  d["x"] = g.x.values();
  if (g.y) {
    d["y_param"] = g.y->param;
    d["y"] = g.y->values();
  }
  d["values"] = g.values;
  d["csv"] = g.to_csv();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C7 DQF recoupling simulation and sequence optimization";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError &e) {
      config_error(e.what());
    } catch (const NumericalError &e) {
      numerical_error(e.what());
    }
  });

  py::class_<SequenceParams>(m, "SequenceParams")
      .def(py::init<>())
      .def_readwrite("tau1", &SequenceParams::tau1)
      .def_readwrite("tau2", &SequenceParams::tau2)
      .def_readwrite("kappa1", &SequenceParams::kappa1)
      .def_readwrite("kappa2", &SequenceParams::kappa2)
      .def_readwrite("phi1", &SequenceParams::phi1)
      .def_readwrite("phi2", &SequenceParams::phi2)
      .def_readwrite("n_blocks", &SequenceParams::n_blocks)
      .def("get", [](const SequenceParams &p, const std::string &n) { return get_param(p, n); },
           "value in external units (us, Hz, degrees)")
      .def("set", [](SequenceParams &p, const std::string &n, double v) { set_param(p, n, v); })
      .def(py::self == py::self)
      .def("__repr__", [](const SequenceParams &p) {
        std::string s = "SequenceParams(";
        for (const auto &n : sequence_param_names())
          s += n + "=" + py::str(py::float_(get_param(p, n))).cast<std::string>() + ", ";
        return s.substr(0, s.size() - 2) + ")";
      });
  m.def("default_params", &default_params, py::arg("rotor_freq_hz") = 10204.0,
        py::arg("n_blocks") = 31);
  m.def("excitation_time", &excitation_time);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init([] { return parse_config("", "<defaults>"); }))
      .def_property(
          "rotor_freq_hz", [](const RunConfig &c) { return c.sim.rotor_freq_hz; },
          [](RunConfig &c, double v) { c.sim.rotor_freq_hz = v; })
      .def_property(
          "include_csa", [](const RunConfig &c) { return c.sim.include_csa; },
          [](RunConfig &c, bool v) { c.sim.include_csa = v; })
      .def_property(
          "powder",
          [](const RunConfig &c) {
            const PowderSpec &p = c.sim.powder;
            return std::make_tuple(p.scheme, p.orientations, p.gamma_angles);
          },
          [](RunConfig &c, const std::tuple<std::string, int, int> &p) {
            c.sim.powder = {std::get<0>(p), std::get<1>(p), std::get<2>(p)};
          })
      .def_property(
          "max_step_us", [](const RunConfig &c) { return c.sim.max_step_us; },
          [](RunConfig &c, double v) { c.sim.max_step_us = v; })
      .def_property(
          "params", [](const RunConfig &c) { return c.params(); },
          [](RunConfig &c, const SequenceParams &p) {
            SequenceBlock b;
            b.tau1_us = get_param(p, "tau1");
            b.tau2_us = get_param(p, "tau2");
            b.kappa1_hz = p.kappa1;
            b.kappa2_hz = p.kappa2;
            b.phi1_deg = get_param(p, "phi1");
            b.phi2_deg = get_param(p, "phi2");
            b.n_blocks = p.n_blocks;
            c.sequence = b;
          })
      .def_readwrite("tasks", &RunConfig::tasks)
      .def("to_yaml", &emit_config)
      .def(py::self == py::self);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "config",
        py::arg("base_dir") = ".");
  m.def("load_config", &load_config);

  m.def(
      "dqf_efficiency",
      [](const RunConfig &c, std::optional<SequenceParams> p) {
        return dqf_efficiency(p.value_or(c.params()), c.system(), c.sim_config()).efficiency;
      },
      py::arg("config"), py::arg("params") = py::none(),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "buildup",
      [](const RunConfig &c) {
        const BuildupTable t = buildup_study(c);
        py::dict d;
        d["n_blocks"] = t.n_blocks;
        d["tau_exc_ms"] = t.tau_exc_ms;
        d["no_csa"] = t.no_csa;
        d["with_csa"] = t.with_csa;
        return d;
      },
      py::arg("config"));
  m.def("scan1d", [](const RunConfig &c) {
    return grid_dict(scan_1d(c.scan1d.axis, c.params(), c.system(), c.sim_config()));
  });
  m.def("scan2d", [](const RunConfig &c) {
    return grid_dict(scan_2d(c.scan2d.x, c.scan2d.y, c.params(), c.system(), c.sim_config()));
  });
  m.def("offset_profile", [](const RunConfig &c) {
    const OffsetStudy s = offset_study(c);
    py::dict d = grid_dict(s.grid);
    d["fwhm_hz"] = s.shape.fwhm_hz;
    d["peak_offset_hz"] = s.shape.peak_offset_hz;
    d["asymmetry"] = s.asymmetry;
    d["bracketed"] = s.shape.bracketed;
    return d;
  });
  m.def(
      "run_study",
      [](const RunConfig &c, const std::filesystem::path &out, bool verbose) {
        std::ostringstream sink;
        run_study(c, out, verbose ? std::cerr : sink);
      },
      py::arg("config"), py::arg("out"), py::arg("verbose") = false);

  py::class_<GeneSpec>(m, "GeneSpec")
      .def(py::init([](std::string name, double lower, double upper, int bits, bool integer) {
             return integer ? integer_gene(std::move(name), static_cast<int>(lower),
                                           static_cast<int>(upper))
                            : float_gene(std::move(name), lower, upper, bits);
           }),
           py::arg("name"), py::arg("lower"), py::arg("upper"), py::arg("bits") = 16,
           py::arg("integer") = false)
      .def_readonly("name", &GeneSpec::name)
      .def_readonly("lower", &GeneSpec::lower)
      .def_readonly("upper", &GeneSpec::upper)
      .def_readonly("bit_depth", &GeneSpec::bit_depth)
      .def_readonly("integer", &GeneSpec::integer);

  py::class_<GAConfig>(m, "GAConfig")
      .def(py::init<>())
      .def_readwrite("population_size", &GAConfig::population_size)
      .def_readwrite("generations", &GAConfig::generations)
      .def_readwrite("eval_budget", &GAConfig::eval_budget)
      .def_readwrite("crossover_prob", &GAConfig::crossover_prob)
      .def_readwrite("mutation_prob", &GAConfig::mutation_prob)
      .def_readwrite("elitism", &GAConfig::elitism)
      .def_readwrite("seed", &GAConfig::seed);

  py::class_<GenerationStats>(m, "GenerationStats")
      .def_readonly("generation", &GenerationStats::generation)
      .def_readonly("best_fitness", &GenerationStats::best_fitness)
      .def_readonly("mean_fitness", &GenerationStats::mean_fitness)
      .def_readonly("evaluations", &GenerationStats::evaluations);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("method", &RunRecord::method)
      .def_readonly("seed", &RunRecord::seed)
      .def_readonly("history", &RunRecord::history)
      .def_readonly("best_x", &RunRecord::best_x)
      .def_readonly("best_fitness", &RunRecord::best_fitness)
      .def_readonly("evaluations", &RunRecord::evaluations)
      .def_readonly("error", &RunRecord::error)
      .def(py::self == py::self);

  m.def(
      "ga_run",
      [](const GAConfig &cfg, const std::vector<GeneSpec> &genes, const Objective &f) {
        return ga_run(cfg, genes, f);
      },
      py::arg("config"), py::arg("genes"), py::arg("objective"));
  m.def(
      "random_search",
      [](int budget, const std::vector<GeneSpec> &genes, const Objective &f, std::uint64_t seed) {
        return random_search(budget, genes, f, seed);
      },
      py::arg("budget"), py::arg("genes"), py::arg("objective"), py::arg("seed"));
  m.def(
      "nelder_mead",
      [](const Objective &f, std::vector<double> x0, const std::vector<double> &steps,
         int budget) { return nelder_mead(f, std::move(x0), steps, {budget}); },
      py::arg("objective"), py::arg("x0"), py::arg("steps"), py::arg("budget") = 1500);
  m.def(
      "optimize",
      [](const RunConfig &c) {
        OptimizeStudy s = optimize_study(c);
        py::dict d;
        d["runs"] = s.runs;
        d["best_run"] = s.best_run;
        d["success_rate"] = s.success_rate;
        d["refined"] = s.refined ? py::cast(*s.refined) : py::none();
        const ParameterSpace space = c.space();
        d["best_params"] = space.apply(s.runs[s.best_run].best_x);
        return d;
      },
      py::arg("config"));
}
