#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "monosindex/monosindex.hpp"

namespace py = pybind11;
using namespace monosindex;

namespace {

Sample make_sample(const Matrix& xs, const Vector& ys) { return Sample(xs, ys); }

py::dict estimate(const Matrix& xs, const Vector& ys, const std::string& estimator,
                  std::size_t n_starts, std::uint64_t seed, double mu, double bw_const) {
  const Sample sample = make_sample(xs, ys);
  const Estimator e = estimator_from_string(estimator);
  PipelineConfig config;
  config.estimators = {e};
  config.n_starts = n_starts;
  config.seed = seed;
  config.mu = mu;
  config.bandwidth.constant = bw_const;
  std::map<Estimator, EstimateResult> results;
  {
    py::gil_scoped_release release;
    results = warm_start_pipeline(sample, config);
  }
  const EstimateResult& r = results.at(e);
  py::dict out;
  out["estimator"] = estimator;
  out["alpha"] = r.alpha_hat;
  out["criterion"] = r.criterion;
  out["evals"] = r.evals;
  out["converged"] = r.converged;
  return out;
}

py::dict asymptotic_covariance(const std::string& estimator, std::size_t mc,
                               std::uint64_t seed, std::size_t d,
                               const std::string& variant) {
  const ModelSpec spec = ModelSpec::cubic_normal(d);
  AsymptoticCovariance a;
  if (estimator == "sse") {
    a = asymptotic_cov_sse(spec, mc, seed);
  } else if (estimator == "ese") {
    a = asymptotic_cov_ese(spec, mc, seed);
  } else if (estimator == "linear") {
    a = asymptotic_cov_linear(spec, mc, seed, linear_variant_from_string(variant));
  } else {
    throw InvalidArgument("no asymptotic covariance for estimator '" + estimator + "'");
  }
  py::dict out;
  out["covariance"] = a.covariance;
  out["c"] = a.c ? py::cast(*a.c) : py::none();
  return out;
}

}  // namespace

PYBIND11_MODULE(_monosindex, m) {
  m.doc() = "Index estimation in the monotone single index model";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

  m.def("estimators", [] {
    std::vector<std::string> names;
    for (Estimator e : all_estimators()) names.push_back(to_string(e));
    return names;
  });

  m.def("pava", [](const std::vector<double>& values, std::optional<std::vector<double>> weights) {
    return weights ? pava(values, *weights) : pava(values);
  }, py::arg("values"), py::arg("weights") = py::none());

  py::class_<SplineFit>(m, "SplineFit")
      .def_property_readonly("knots", &SplineFit::knots)
      .def_property_readonly("values", &SplineFit::values)
      .def_property_readonly("gamma", &SplineFit::gamma)
      .def_property_readonly("mu", &SplineFit::mu)
      .def("__call__", &SplineFit::operator(), py::arg("u"))
      .def("derivative", &SplineFit::derivative, py::arg("u"))
      .def("roughness", &SplineFit::roughness);

  m.def("fit_smoothing_spline",
        [](const std::vector<double>& ts, const std::vector<double>& ys,
           std::optional<std::vector<double>> weights, double mu) {
          const std::vector<double> w = weights ? *weights : std::vector<double>(ts.size(), 1.0);
          return fit_smoothing_spline(ts, ys, w, mu);
        },
        py::arg("ts"), py::arg("ys"), py::arg("weights") = py::none(), py::arg("mu") = 0.1);

  m.def("generate_sample",
        [](std::size_t n, std::size_t d, std::uint64_t seed, double noise_sd) {
          ModelSpec spec = ModelSpec::cubic_normal(d);
          spec.noise_sd = noise_sd;
          const Sample s = generate_sample(spec, n, seed);
          return py::make_tuple(s.xs(), s.ys());
        },
        "Sample of the cubic model with standard normal covariates.", py::arg("n"),
        py::arg("d") = 3, py::arg("seed") = 0, py::arg("noise_sd") = 1.0);

  m.def("psi_alpha_oracle", &psi_alpha_oracle, py::arg("alpha"), py::arg("u"));

  m.def("lse_criterion",
        [](const Matrix& xs, const Vector& ys, const Vector& alpha) {
          return lse_criterion(make_sample(xs, ys), alpha);
        },
        py::arg("xs"), py::arg("ys"), py::arg("alpha"));
  m.def("mre_objective",
        [](const Matrix& xs, const Vector& ys, const Vector& alpha) {
          return mre_objective(make_sample(xs, ys), alpha);
        },
        py::arg("xs"), py::arg("ys"), py::arg("alpha"));
  m.def("sse_score",
        [](const Matrix& xs, const Vector& ys, const Vector& alpha) {
          return sse_score(make_sample(xs, ys), alpha).vector;
        },
        py::arg("xs"), py::arg("ys"), py::arg("alpha"));
  m.def("ese_score",
        [](const Matrix& xs, const Vector& ys, const Vector& alpha, double h) {
          return ese_score(make_sample(xs, ys), alpha, h).vector;
        },
        py::arg("xs"), py::arg("ys"), py::arg("alpha"), py::arg("h"));
  m.def("plse_score",
        [](const Matrix& xs, const Vector& ys, const Vector& alpha, double mu) {
          return plse_score(make_sample(xs, ys), alpha, mu).vector;
        },
        py::arg("xs"), py::arg("ys"), py::arg("alpha"), py::arg("mu") = 0.1);

  m.def("estimate", &estimate, py::arg("xs"), py::arg("ys"), py::arg("estimator"),
        py::arg("n_starts") = 20, py::arg("seed") = 0, py::arg("mu") = 0.1,
        py::arg("bw_const") = 0.5);

  m.def("asymptotic_covariance", &asymptotic_covariance, py::arg("estimator"),
        py::arg("mc") = kDefaultMcSamples, py::arg("seed") = 0, py::arg("d") = 3,
        py::arg("variant") = "sandwich");
}
