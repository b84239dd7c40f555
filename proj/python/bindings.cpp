// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pam/errors.hpp"
#include "pam/evolution.hpp"
#include "pam/fkmc.hpp"
#include "pam/harness.hpp"
#include "pam/io.hpp"
#include "pam/spectral.hpp"

namespace py = pybind11;
using namespace pam;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  return py::array_t<double>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())}, v.data());
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

ExperimentConfig config_from(const py::object& config) {
  if (config.is_none()) return config_from_json(Json::object());
  const std::string text = py::module_::import("json").attr("dumps")(config).cast<std::string>();
  return config_from_json(Json::parse(text));
}

py::object json_to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

template <class Rows>
std::string csv_of(const Rows& rows, const ExperimentConfig& config,
                   void (*writer)(std::ostream&, const Rows&, const ExperimentConfig&)) {
  std::ostringstream out;
  writer(out, rows, config);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parabolic Anderson model on the hypercube";

  // Later registrations are tried first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<TieError>(m, "TieError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("phi_rem", &phi_rem, py::arg("r"), py::arg("n"));
  m.def("psi_rem", &psi_rem, py::arg("s"), py::arg("n"));
  m.def("transition_scale", &transition_scale, py::arg("n"));
  m.def("hamming", [](Index x, Index y) { return hamming(x, y); });
  m.def("laplacian_apply", [](const py::array_t<double>& f, int n) {
    return to_array(laplacian_apply(from_array(f), n));
  });

  py::class_<PotentialField>(m, "PotentialField")
      .def_static("from_values",
                  [](int n, const py::array_t<double>& values, bool allow_ties) {
                    return PotentialField::from_values(n, from_array(values), "custom", 0, allow_ties);
                  },
                  py::arg("n"), py::arg("values"), py::arg("allow_ties") = false)
      .def_property_readonly("n", &PotentialField::n)
      .def_property_readonly("seed", &PotentialField::seed)
      .def_property_readonly("kind", &PotentialField::kind)
      .def_property_readonly("values", [](const PotentialField& f) { return to_array(f.values()); })
      .def_property_readonly("order", [](const PotentialField& f) {
        return std::vector<Index>(f.order().begin(), f.order().end());
      })
      .def_property_readonly("sigma", [](const PotentialField& f) -> py::object {
        if (!f.sigma()) return py::none();
        return to_array(*f.sigma());
      })
      .def("vertex_at_rank", &PotentialField::vertex_at_rank)
      .def("value_at_rank", &PotentialField::value_at_rank)
      .def("rank_of", &PotentialField::rank_of)
      .def("to_json", [](const PotentialField& f) { return field_to_json(f).dump(); })
      .def_static("from_json", [](const std::string& s) { return field_from_json(Json::parse(s)); })
      .def("__len__", &PotentialField::size);

  m.def("sample_rem", &sample_rem, py::arg("n"), py::arg("seed"));
  m.def("sample_coupled",
        [](int n, std::uint64_t seed, const std::string& tail, double beta) {
          return sample_coupled(n, seed, tail_by_name(tail, beta));
        },
        py::arg("n"), py::arg("seed"), py::arg("tail") = "rem", py::arg("beta") = 2.0);

  py::class_<SpectralResult>(m, "SpectralResult")
      .def_readonly("n", &SpectralResult::n)
      .def_readonly("kappa", &SpectralResult::kappa)
      .def_readonly("i", &SpectralResult::i)
      .def_readonly("l", &SpectralResult::l)
      .def_readonly("eigenvalue", &SpectralResult::lambda)
      .def_readonly("residual", &SpectralResult::residual)
      .def_readonly("gap", &SpectralResult::gap)
      .def_readonly("peak", &SpectralResult::peak)
      .def_readonly("boundary", &SpectralResult::boundary)
      .def_readonly("matvecs", &SpectralResult::matvecs)
      .def_property_readonly("vector", [](const SpectralResult& r) { return to_array(r.nu); })
      .def("to_json", [](const SpectralResult& r, bool vec) { return spectral_to_json(r, vec).dump(); },
           py::arg("include_vector") = false);

  m.def("principal_eig",
        [](double kappa, const PotentialField& field, int i, int l, double tol, bool gap) {
          SpectralOptions o;
          o.tol = tol;
          o.compute_gap = gap;
          return principal_eig(kappa, field, i, l, o);
        },
        py::arg("kappa"), py::arg("field"), py::arg("i") = 1, py::arg("l") = 1,
        py::arg("tol") = 1e-12, py::arg("gap") = false);
  m.def("spectral_gap",
        [](double kappa, const PotentialField& field, int i, int l) {
          return spectral_gap(kappa, field, i, l);
        },
        py::arg("kappa"), py::arg("field"), py::arg("i") = 1, py::arg("l") = 1);
  m.def("dense_eigenvalues",
        [](double kappa, const PotentialField& field, const std::vector<Index>& boundary) {
          return dense_oracle(kappa, field.values(), field.n(), boundary).eigenvalues;
        },
        py::arg("kappa"), py::arg("field"), py::arg("boundary") = std::vector<Index>{});

  m.def("log_solution",
        [](double kappa, const PotentialField& field, double t, py::object y, const std::string& method,
           double tol) {
          PropagateOptions o;
          o.tol = tol;
          o.method = method == "dense"    ? PropagatorMethod::dense
                     : method == "krylov" ? PropagatorMethod::krylov
                                          : PropagatorMethod::automatic;
          auto start = y.is_none() ? flat_state(field.n()) : delta_state(field.n(), y.cast<Index>());
          const auto s = propagate(std::move(start), kappa, field, t, o);
          std::vector<double> out(s.w.size());
          for (Index x = 0; x < s.w.size(); ++x) out[x] = s.log_v(x);
          return to_array(out);
        },
        "log v(t, .) from delta_y, or from flat data when y is None", py::arg("kappa"),
        py::arg("field"), py::arg("t"), py::arg("y") = py::none(), py::arg("method") = "automatic",
        py::arg("tol") = 1e-12);

  py::class_<MCEstimate>(m, "MCEstimate")
      .def_readonly("target", &MCEstimate::target)
      .def_readonly("mean", &MCEstimate::mean)
      .def_readonly("log_mean", &MCEstimate::log_mean)
      .def_readonly("std_error", &MCEstimate::std_error)
      .def_readonly("n_samples", &MCEstimate::n_samples)
      .def_readonly("censored_fraction", &MCEstimate::censored_fraction)
      .def_readonly("no_hits", &MCEstimate::no_hits)
      .def_readonly("unreliable", &MCEstimate::unreliable)
      .def("to_json", [](const MCEstimate& e) { return estimate_to_json(e).dump(); });

  m.def("estimate_total_mass",
        [](Index y, double t, double kappa, const PotentialField& field, std::int64_t samples,
           std::uint64_t seed, int threads) {
          py::gil_scoped_release release;
          return estimate_total_mass(y, t, kappa, field, samples, seed, MCOptions{threads});
        },
        py::arg("y"), py::arg("t"), py::arg("kappa"), py::arg("field"), py::arg("samples"),
        py::arg("seed"), py::arg("threads") = 1);
  m.def("estimate_endpoint",
        [](Index x, Index y, double t, double kappa, const PotentialField& field,
           std::int64_t samples, std::uint64_t seed, int threads) {
          py::gil_scoped_release release;
          return estimate_endpoint(x, y, t, kappa, field, samples, seed, MCOptions{threads});
        },
        py::arg("x"), py::arg("y"), py::arg("t"), py::arg("kappa"), py::arg("field"),
        py::arg("samples"), py::arg("seed"), py::arg("threads") = 1);

  m.def("phase_sweep_csv",
        [](const py::object& config) {
          const auto c = config_from(config);
          std::vector<SweepRow> rows;
          {
            py::gil_scoped_release release;
            rows = run_phase_sweep(c);
          }
          return csv_of(rows, c, &write_sweep_csv);
        },
        py::arg("config") = py::none());
  m.def("localization_sweep_csv",
        [](const py::object& config) {
          const auto c = config_from(config);
          std::vector<LocalizationRow> rows;
          {
            py::gil_scoped_release release;
            rows = run_localization_sweep(c);
          }
          return csv_of(rows, c, &write_localization_csv);
        },
        py::arg("config") = py::none());
  m.def("lemma_report",
        [](const py::object& config) {
          const auto c = config_from(config);
          Json report;
          {
            py::gil_scoped_release release;
            report = run_lemma_checks(c);
          }
          return json_to_py(report);
        },
        py::arg("config") = py::none());
}
