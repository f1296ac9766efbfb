// Python bindings. Every entry point takes a dict of config overrides (the
// same keys as the config file) and returns the report serialized as JSON;
// the Python package decodes it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "hyperwalk/backend.hpp"
#include "hyperwalk/config.hpp"
#include "hyperwalk/estimators.hpp"
#include "hyperwalk/oracles.hpp"
#include "hyperwalk/selftest.hpp"

namespace py = pybind11;
namespace hw = hyperwalk;

namespace {

using Overrides = std::map<std::string, std::string>;

template <typename F>
std::string on_backend(const Overrides& overrides, F&& f) {
  const auto config = hw::resolve_config(overrides);
  const auto backend = hw::make_backend(config.backend);
  py::gil_scoped_release release;
  return std::visit([&](const auto& g) { return f(g, config); }, backend);
}

}  // namespace

PYBIND11_MODULE(_hyperwalk, m) {
  m.doc() = "Random walks on percolation clusters of hyperbolic Cayley graphs";
  m.attr("__version__") = HYPERWALK_VERSION;

  py::register_exception<hw::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("defaults", [] {
    Overrides out;
    for (const auto& [k, v] : hw::config_defaults()) out[k] = v;
    return out;
  });
  m.def("resolve_config", [](const Overrides& o) { return hw::resolve_config(o).resolved; },
        py::arg("overrides") = Overrides{});

  m.def("estimate_speed", [](const Overrides& o) {
    return on_backend(o, [](const auto& g, const hw::ExperimentConfig& c) {
      return hw::estimate_speed(g, c.params).to_json(true).dump();
    });
  }, py::arg("overrides") = Overrides{});

  m.def("estimate_entropy", [](const Overrides& o) {
    return on_backend(o, [](const auto& g, const hw::ExperimentConfig& c) {
      return hw::estimate_entropy(g, c.params).to_json(true).dump();
    });
  }, py::arg("overrides") = Overrides{});

  m.def("estimate_dimension", [](const Overrides& o) {
    return on_backend(o, [](const auto& g, const hw::ExperimentConfig& c) {
      return hw::estimate_local_dimension(g, c.params).to_json(true).dump();
    });
  }, py::arg("overrides") = Overrides{});

  m.def("verify_shadows", [](const Overrides& o) {
    return on_backend(o, [](const auto& g, const hw::ExperimentConfig& c) {
      return hw::verify_shadow_sandwich(g, c.params).to_json().dump();
    });
  }, py::arg("overrides") = Overrides{});

  m.def("stationarity_test", [](const Overrides& o) {
    return on_backend(o, [](const auto& g, const hw::ExperimentConfig& c) {
      return hw::stationarity_test(g, c.params, c.params.stationarity_weighted).to_json().dump();
    });
  }, py::arg("overrides") = Overrides{});

  m.def("pq_sweep", [](const Overrides& o) {
    const auto c = hw::resolve_config(o);
    py::gil_scoped_release release;
    return hw::pq_sweep(c.params, c.sweep_sides, c.sweep_tiles).to_json().dump();
  }, py::arg("overrides") = Overrides{});

  m.def("p_sweep", [](const Overrides& o) {
    const auto c = hw::resolve_config(o);
    const auto backend = hw::make_backend(c.backend);
    py::gil_scoped_release release;
    return hw::p_sweep(backend, c.params, c.sweep_p, c.jump_sigmas).to_json().dump();
  }, py::arg("overrides") = Overrides{});

  m.def("selftest", [](int rank, std::uint64_t seed, int threads) {
    py::gil_scoped_release release;
    return hw::selftest_json(hw::run_selftest(rank, seed, threads)).dump();
  }, py::arg("rank") = 2, py::arg("seed") = 1, py::arg("threads") = 1);

  auto oracles = m.def_submodule("oracles", "Closed forms used as references");
  oracles.def("tree_srw_speed", &hw::oracles::tree_srw_speed, py::arg("q"));
  oracles.def("tree_srw_entropy", &hw::oracles::tree_srw_entropy, py::arg("q"));
  oracles.def("gw_survival", &hw::oracles::gw_survival, py::arg("p"), py::arg("offspring_max"),
              py::arg("tolerance") = 1e-12);
  oracles.def("fuchsian_edge_length", &hw::oracles::fuchsian_edge_length, py::arg("P"),
              py::arg("Q"));
}
