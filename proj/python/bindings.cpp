#include "scatlab/acceptance.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace scatlab;

namespace {

using Params = std::map<std::string, double>;

Vec to_vec(const std::vector<double>& v) {
  if (v.empty() || v.size() > static_cast<std::size_t>(kMaxDim)) {
    throw py::value_error("vectors must have 1 to 4 components");
  }
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i];
  return out;
}

std::vector<double> from_vec(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Scenario scenario_from(const std::string& kind, const Params& params) {
  const auto k = parse_kind(kind);
  if (!k) throw ScenarioError("unknown scenario kind '" + kind + "'");
  ScenarioDescriptor d = default_descriptor(*k);
  for (const auto& [key, value] : params) d.parameters[key] = value;
  validate_descriptor(d);
  return build_scenario(d);
}

ConnectOptions options(double step) {
  ConnectOptions o;
  o.integration.step = step;
  return o;
}

py::dict scatter_py(const std::string& kind, const std::vector<double>& x,
                    const std::vector<double>& v_proj, const Params& params, double step) {
  const Scenario s = scenario_from(kind, params);
  const ScatteringRecord r = scatter(s.g(), s.entry, s.exit, to_vec(x), to_vec(v_proj),
                                     options(step).integration);
  py::dict out;
  out["y"] = from_vec(r.y);
  out["w_proj"] = from_vec(r.w_proj);
  out["travel"] = r.travel;
  return out;
}

py::dict connect_py(const std::string& kind, const std::vector<double>& x,
                    const std::vector<double>& y, const Params& params, double step) {
  const Scenario s = scenario_from(kind, params);
  const ConnectingGeodesic c =
      connecting_geodesic(s.g(), to_vec(x), to_vec(y), std::nullopt, options(step));
  py::dict out;
  out["energy"] = c.energy;
  out["causal"] = std::string(to_string(c.causal.tag));
  out["velocity"] = from_vec(c.path.front().v);
  out["endpoint"] = from_vec(c.path.back().x);
  out["iterations"] = c.iterations;
  return out;
}

std::vector<std::pair<std::vector<double>, std::vector<double>>> sigma_pairs_py(
    const std::string& kind, int count, const Params& params) {
  const Scenario s = scenario_from(kind, params);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
  for (const auto& sp : sigma_pairs(s, count)) out.emplace_back(from_vec(sp.x), from_vec(sp.y));
  return out;
}

double action_py(const std::string& kind, const std::vector<double>& x, const std::vector<double>& y,
                 const Params& params) {
  const Scenario s = scenario_from(kind, params);
  return action_A(magnetic_system(s.metric), to_vec(x), to_vec(y));
}

py::dict thmmag_py(const std::string& kind, const std::vector<double>& x,
                   const std::vector<double>& v_proj, const Params& params) {
  const Scenario s = scenario_from(kind, params);
  if (!s.base_boundary) throw ScenarioError("needs a disk scenario");
  const ThmMagResiduals t = thmmag_verify(s.metric, *s.base_boundary, to_vec(x), to_vec(v_proj));
  py::dict out;
  out["exit"] = t.exit;
  out["length"] = t.length;
  out["action"] = t.action;
  out["exit_time_component"] = t.exit_time_component;
  out["round_trip"] = t.round_trip;
  out["connector_action"] = t.connector_action;
  return out;
}

std::vector<std::pair<std::vector<double>, std::vector<double>>> ray_grid_py(
    const std::string& kind, int count, const Params& params) {
  const Scenario s = scenario_from(kind, params);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
  for (const auto& r : ray_grid(s, count)) out.emplace_back(from_vec(r.x), from_vec(r.v_proj));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lorentzian scattering and magnetic rigidity numerics";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<RecordFailure>(m, "RecordFailure", PyExc_RuntimeError);
  py::register_exception<Error>(m, "NumericalError", PyExc_RuntimeError);

  m.attr("SCHEMA_VERSION") = kSchemaVersion;
  m.def("experiment_names", &experiment_names);
  m.def("scenario_kinds", [] {
    return std::vector<std::string>{"minkowski_slab", "product_disk", "perturbed_product",
                                    "stationary_rot", "custom"};
  });

  m.def("ray_grid", &ray_grid_py, py::arg("kind"), py::arg("count"), py::arg("params") = Params{},
        "Entry points and projected directions of the scenario's ray grid.");
  m.def("scatter", &scatter_py, py::arg("kind"), py::arg("x"), py::arg("v_proj"),
        py::arg("params") = Params{}, py::arg("step") = 1e-3,
        "Exit point, projected exit direction and affine travel of one lightlike ray.");
  m.def("connect", &connect_py, py::arg("kind"), py::arg("x"), py::arg("y"),
        py::arg("params") = Params{}, py::arg("step") = 1e-3,
        "Connecting geodesic on [0, 1]: energy (the defining function), causal class.");
  m.def("sigma_pairs", &sigma_pairs_py, py::arg("kind"), py::arg("count"),
        py::arg("params") = Params{}, "Boundary pairs joined by lightlike geodesics.");
  m.def("boundary_action", &action_py, py::arg("kind"), py::arg("x"), py::arg("y"),
        py::arg("params") = Params{}, "Magnetic length minus flux between base boundary points.");
  m.def("verify_thmmag", &thmmag_py, py::arg("kind"), py::arg("x"), py::arg("v_proj"),
        py::arg("params") = Params{});
  m.def("rk4_endpoint_order", [] { return rk4_endpoint_order().observed; });

  m.def(
      "_run_experiment_json",
      [](const std::string& command, const std::string& config_json) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(e.what());
        }
        const ExperimentReport rep = [&] {
          py::gil_scoped_release release;
          return run_experiment(command, parse_config(j));
        }();
        return to_json(rep).dump();
      },
      py::arg("command"), py::arg("config_json"));
}
