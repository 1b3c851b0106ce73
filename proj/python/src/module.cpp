#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "spt/errors.hpp"
#include "spt/fock_ed.hpp"
#include "spt/gmlp_optimizer.hpp"
#include "spt/hopping_selfconsistent.hpp"
#include "spt/landau.hpp"
#include "spt/model_catalog.hpp"
#include "spt/phase_mapper.hpp"

namespace py = pybind11;
using namespace spt;

namespace {

ThermalParams thermal(std::optional<double> beta_omega) {
  if (beta_omega) return FiniteTemperature{*beta_omega};
  return ZeroTemperature{};
}

ModelSpec checked(ModelSpec m) {
  validate(m);
  return m;
}

py::dict point_dict(const CoherentPoint& z) {
  py::dict d;
  d["u"] = z.u;
  d["v"] = z.v;
  return d;
}

py::dict minimize_dict(const MinimizeResult& r) {
  py::dict d;
  d["z_min"] = point_dict(r.z_min);
  d["phi_min"] = r.phi_min;
  d["order_parameter"] = r.order_parameter;
  d["hessian_positive_definite"] = r.hessian_positive_definite;
  py::list copies;
  for (const auto& z : r.degenerate_minima) copies.append(point_dict(z));
  d["degenerate_minima"] = copies;
  return d;
}

py::dict phase_dict(const PhasePoint& p) {
  py::dict d;
  d["phase"] = std::string(phase_label(p.phase));
  d["order_parameter"] = p.order_parameter;
  d["free_energy"] = p.free_energy;
  d["z_min"] = point_dict(p.z_min);
  d["coupling"] = p.coupling.components;
  d["degenerate"] = p.degenerate;
  d["note"] = p.note;
  return d;
}

py::dict boundary_dict(const BoundaryCrossing& b) {
  py::dict d;
  d["critical_t"] = b.critical_t;
  d["critical_magnitude"] = b.critical_magnitude;
  d["order"] = std::string(order_label(b.transition_order));
  d["zc_norm2"] = b.zc_norm2;
  d["z_c"] = point_dict(b.z_c);
  return d;
}

MinimizeOptions minimize_options(double grid_half_width, int grid_points_per_axis, double tie_tolerance) {
  MinimizeOptions o;
  o.grid_half_width = grid_half_width;
  o.grid_points_per_axis = grid_points_per_axis;
  o.tie_tolerance = tie_tolerance;
  return o;
}

EDConfig ed_config(const std::vector<double>& eta, const std::vector<int>& n_cut, int n_levels) {
  EDConfig c;
  c.eta = eta;
  c.n_cut = n_cut;
  c.n_levels = n_levels;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phase diagrams of superradiant transitions: Landau potentials, minimization, boundaries, exact diagonalization";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<UnstableModel>(m, "UnstableModel", base);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);

  py::class_<ModelSpec>(m, "Model")
      .def_property_readonly("family", [](const ModelSpec& s) { return std::string(family_name(s.family())); })
      .def_property_readonly("mode_count", &ModelSpec::mode_count)
      .def_property_readonly("coupling_vector", [](const ModelSpec& s) { return coupling_vector(s).components; })
      .def_property_readonly("stable", [](const ModelSpec& s) { return stability_check(s).stable; })
      .def("with_parameter", [](const ModelSpec& s, const std::string& name, double value) {
        return apply_parameter(s, name, value);
      });

  m.def(
      "dicke",
      [](std::vector<double> gamma, std::optional<std::vector<double>> gamma_prime, int qubit_count,
         std::optional<double> beta_omega) {
        std::vector<double> gp = gamma_prime.value_or(std::vector<double>(gamma.size(), 0.0));
        return checked(ModelSpec{MultimodeDicke12{std::move(gamma), std::move(gp), qubit_count}, thermal(beta_omega)});
      },
      py::arg("gamma"), py::arg("gamma_prime") = py::none(), py::arg("qubit_count") = 1,
      py::arg("beta_omega") = py::none(), "Multimode Dicke model with one- and two-photon couplings.");
  m.def(
      "rabi_stark_hubbard",
      [](double gamma, double j_tilde, double u_tilde, std::optional<double> beta_omega) {
        return checked(ModelSpec{RabiStarkHubbard{gamma, j_tilde, u_tilde}, thermal(beta_omega)});
      },
      py::arg("gamma"), py::arg("j_tilde") = 0.0, py::arg("u_tilde") = 0.0, py::arg("beta_omega") = py::none());
  m.def(
      "anisotropic_rabi_stark",
      [](double gamma1, double gamma2, double u_tilde, std::optional<double> beta_omega) {
        return checked(ModelSpec{AnisotropicRabiStark{gamma1, gamma2, u_tilde}, thermal(beta_omega)});
      },
      py::arg("gamma1"), py::arg("gamma2"), py::arg("u_tilde") = 0.0, py::arg("beta_omega") = py::none());

  m.def(
      "potential",
      [](const ModelSpec& s, std::vector<double> u, std::vector<double> v) {
        return potential(s, CoherentPoint{std::move(u), std::move(v)}).phi;
      },
      py::arg("model"), py::arg("u"), py::arg("v"));
  m.def(
      "gradient",
      [](const ModelSpec& s, std::vector<double> u, std::vector<double> v) {
        return gradient(s, CoherentPoint{std::move(u), std::move(v)});
      },
      py::arg("model"), py::arg("u"), py::arg("v"));

  m.def(
      "minimize",
      [](const ModelSpec& s, double grid_half_width, int grid_points_per_axis, double tie_tolerance) {
        MinimizeResult r;
        {
          py::gil_scoped_release release;
          r = minimize(s, minimize_options(grid_half_width, grid_points_per_axis, tie_tolerance));
        }
        return minimize_dict(r);
      },
      py::arg("model"), py::arg("grid_half_width") = 3.0, py::arg("grid_points_per_axis") = 9,
      py::arg("tie_tolerance") = 1e-10);
  m.def(
      "classify", [](const ModelSpec& s) { return phase_dict(classify(s)); }, py::arg("model"));

  m.def(
      "radial_boundary",
      [](const ModelSpec& s, const std::vector<double>& direction, double max_magnitude) {
        return boundary_dict(radial_boundary(s, direction, max_magnitude));
      },
      py::arg("model"), py::arg("direction"), py::arg("max_magnitude") = 4.0);
  m.def(
      "parameter_boundary",
      [](const ModelSpec& s, const std::string& parameter, double lo, double hi) {
        return boundary_dict(parameter_boundary(s, parameter, lo, hi));
      },
      py::arg("model"), py::arg("parameter"), py::arg("min"), py::arg("max"));

  m.def(
      "sweep",
      [](const ModelSpec& s, const std::vector<std::tuple<std::string, double, double, int>>& axes, int workers) {
        std::vector<SweepAxis> spec;
        for (const auto& [name, lo, hi, count] : axes) spec.push_back({name, lo, hi, count});
        std::vector<SweepResult> rows;
        {
          py::gil_scoped_release release;
          rows = sweep(s, spec, workers);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d = phase_dict(r.point);
          d["axis_values"] = r.axis_values;
          d["error"] = r.error;
          out.append(d);
        }
        return out;
      },
      py::arg("model"), py::arg("axes"), py::arg("workers") = 0,
      "Classify a grid; axes are (parameter, min, max, count) with the last axis fastest.");

  m.def(
      "ed_solve",
      [](const ModelSpec& s, const std::vector<double>& eta, const std::vector<int>& n_cut, int n_levels) {
        const EDConfig cfg = ed_config(eta, n_cut, n_levels);
        EDSolution sol;
        {
          py::gil_scoped_release release;
          sol = solve(from_dimensionless(s, eta), cfg);
        }
        py::dict d;
        d["energies"] = sol.spectrum.energies;
        d["photon_numbers"] = sol.photon_numbers;
        py::list u2, v2;
        for (const auto& q : sol.quadratures) {
          u2.append(q.u2);
          v2.append(q.v2);
        }
        d["u2"] = u2;
        d["v2"] = v2;
        d["parity"] = sol.parity;
        d["method"] = sol.spectrum.method;
        return d;
      },
      py::arg("model"), py::arg("eta"), py::arg("n_cut") = std::vector<int>{40}, py::arg("n_levels") = 2,
      "Exact diagonalization at frequency ratios eta, energies in units of Omega.");

  m.def(
      "critical_hopping",
      [](double gamma, double u_tilde, double eta, int n_cut) {
        SelfConsistentResult r;
        {
          py::gil_scoped_release release;
          r = critical_hopping(gamma, u_tilde, eta, ed_config({eta}, {n_cut}, 2));
        }
        py::dict d;
        d["j_tilde_critical"] = r.j_tilde_critical;
        d["spectral_sum"] = r.spectral_sum;
        d["terms_used"] = r.terms_used;
        d["partial_sums"] = r.partial_sums;
        return d;
      },
      py::arg("gamma"), py::arg("u_tilde"), py::arg("eta"), py::arg("n_cut") = 80);
}
