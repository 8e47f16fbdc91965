#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>

#include "qca/dkca.hpp"
#include "qca/evolution.hpp"
#include "qca/gates.hpp"
#include "qca/observables.hpp"
#include "qca/oracle.hpp"
#include "qca/version.hpp"

namespace py = pybind11;
using namespace qca;

namespace {

GeneratorOrder parse_order(const std::string& text) {
  if (text == "up") return GeneratorOrder::up;
  if (text == "pu") return GeneratorOrder::pu;
  throw std::invalid_argument("generator_order must be 'up' or 'pu'");
}

StepScheme parse_scheme(const std::string& text, int parity_offset) {
  StepScheme scheme = StepScheme::parse(text);
  scheme.parity_offset = parity_offset;
  return scheme;
}

py::array_t<std::complex<double>> tensor_to_numpy(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape.begin(), t.shape.end());
  py::array_t<std::complex<double>> out(shape);
  std::copy(t.data.begin(), t.data.end(), out.mutable_data());
  return out;
}

py::dict series_to_dict(const TimeSeries& series) {
  const py::ssize_t n = static_cast<py::ssize_t>(series.rows.size());
  py::array_t<int> t(n), length(n), max_bond(n), sweeps(n);
  py::array_t<double> occupation(n), drift(n), residual(n), wall(n);
  py::array_t<bool> converged(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& row = series.rows[i];
    t.mutable_at(i) = row.t;
    length.mutable_at(i) = row.length;
    occupation.mutable_at(i) = row.n;
    drift.mutable_at(i) = row.trace_drift;
    max_bond.mutable_at(i) = row.max_bond;
    residual.mutable_at(i) = row.fit_residual;
    sweeps.mutable_at(i) = row.sweeps;
    converged.mutable_at(i) = row.converged;
    wall.mutable_at(i) = row.wall_ms;
  }
  py::dict out;
  out["omega"] = series.omega;
  out["gamma"] = series.gamma;
  out["chi"] = series.chi;
  out["scheme"] = series.scheme;
  out["t"] = t;
  out["L"] = length;
  out["N"] = occupation;
  out["trace_drift"] = drift;
  out["max_bond"] = max_bond;
  out["fit_residual"] = residual;
  out["sweeps"] = sweeps;
  out["converged"] = converged;
  out["wall_ms"] = wall;
  out["drift_failed"] = series.drift_failed;
  return out;
}

TimeSeries series_from_arrays(double gamma, py::array_t<int> t, py::array_t<double> n) {
  if (t.size() != n.size()) throw std::invalid_argument("t and N must have equal lengths");
  TimeSeries series;
  series.gamma = gamma;
  for (py::ssize_t i = 0; i < t.size(); ++i) {
    TimeSeriesRow row;
    row.t = t.at(i);
    row.n = n.at(i);
    series.rows.push_back(row);
  }
  return series;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tensor-network seed evolutions of (1+1)D quantum cellular automata "
            "with an absorbing state";
  m.attr("__version__") = kVersion;

  m.def(
      "build_gate",
      [](double gamma, double omega, const std::string& order) {
        GateSpec g = build_gate(gamma, omega, parse_order(order));
        py::dict out;
        out["gamma"] = g.gamma;
        out["omega"] = g.omega;
        out["unitary"] = tensor_to_numpy(g.unitary);
        py::list bonds;
        bonds.append(g.mpo_form[0].shape[3]);
        bonds.append(g.mpo_form[1].shape[3]);
        out["mpo_bonds"] = bonds;
        return out;
      },
      py::arg("gamma"), py::arg("omega"), py::arg("generator_order") = "up",
      "Three-site gate: the 8x8 unitary over (control-left, control-right, target) "
      "and its MPO bond dimensions.");

  m.def(
      "run_trajectory",
      [](double gamma, double omega, int chi, int t_max, const std::string& scheme,
         double svd_cutoff, double fit_tolerance, int max_sweeps, bool vacuum_initial,
         const std::string& generator_order, int parity_offset, bool renormalize,
         double trace_drift_max) {
        TrajectoryConfig cfg;
        cfg.gamma = gamma;
        cfg.omega = omega;
        cfg.scheme = parse_scheme(scheme, parity_offset);
        cfg.policy.chi = chi;
        cfg.policy.svd_cutoff = svd_cutoff;
        cfg.policy.fit_tolerance = fit_tolerance;
        cfg.policy.max_sweeps = max_sweeps;
        cfg.t_max = t_max;
        cfg.vacuum_initial = vacuum_initial;
        cfg.generator_order = parse_order(generator_order);
        cfg.step.renormalize_trace = renormalize;
        cfg.step.trace_drift_max = trace_drift_max;
        TimeSeries series;
        {
          py::gil_scoped_release release;
          series = run_trajectory(cfg);
        }
        return series_to_dict(series);
      },
      py::arg("gamma"), py::arg("omega") = 0.0, py::arg("chi") = 64, py::arg("t_max") = 50,
      py::arg("scheme") = "alternating", py::arg("svd_cutoff") = 1e-14,
      py::arg("fit_tolerance") = 1e-8, py::arg("max_sweeps") = 12,
      py::arg("vacuum_initial") = false, py::arg("generator_order") = "up",
      py::arg("parity_offset") = 0, py::arg("renormalize") = true,
      py::arg("trace_drift_max") = 1e-4,
      "Evolve the seed (or vacuum) row state and return the N(t) series with "
      "per-step diagnostics as numpy columns.");

  m.def(
      "dense_occupation_series",
      [](double gamma, double omega, const std::string& scheme, int t_max,
         const std::string& generator_order, int site_limit) {
        std::vector<double> series;
        {
          py::gil_scoped_release release;
          series = dense_occupation_series(gamma, omega, parse_scheme(scheme, 0), t_max,
                                           parse_order(generator_order), site_limit);
        }
        py::array_t<double> out(static_cast<py::ssize_t>(series.size()));
        std::copy(series.begin(), series.end(), out.mutable_data());
        return out;
      },
      py::arg("gamma"), py::arg("omega") = 0.0, py::arg("scheme") = "alternating",
      py::arg("t_max") = 4, py::arg("generator_order") = "up", py::arg("site_limit") = 12,
      "Numerically exact N(t) for small t, via the dense reduced-state reference.");

  m.def(
      "dk_run",
      [](double p1, double p2, int t_max, int runs, std::uint64_t rng_seed, int workers) {
        DkConfig cfg;
        cfg.p1 = p1;
        cfg.p2 = p2;
        cfg.t_max = t_max;
        cfg.runs = runs;
        cfg.rng_seed = rng_seed;
        ClassicalSeries series;
        {
          py::gil_scoped_release release;
          series = dk_run(cfg, workers);
        }
        const py::ssize_t n = static_cast<py::ssize_t>(series.rows.size());
        py::array_t<int> t(n);
        py::array_t<double> mean(n), se(n);
        for (py::ssize_t i = 0; i < n; ++i) {
          t.mutable_at(i) = series.rows[i].t;
          mean.mutable_at(i) = series.rows[i].n;
          se.mutable_at(i) = series.rows[i].stderr_n;
        }
        py::dict out;
        out["t"] = t;
        out["N"] = mean;
        out["stderr_N"] = se;
        return out;
      },
      py::arg("p1"), py::arg("p2"), py::arg("t_max") = 200, py::arg("runs") = 1000,
      py::arg("rng_seed") = 1, py::arg("workers") = 1,
      "Classical cellular-automaton ensemble: mean N(t) and its standard error.");

  m.def(
      "effective_exponent",
      [](py::array_t<int> t, py::array_t<double> n) {
        auto theta = effective_exponent(series_from_arrays(0, t, n));
        const py::ssize_t m_out = static_cast<py::ssize_t>(theta.size());
        py::array_t<int> te(m_out);
        py::array_t<double> th(m_out);
        for (py::ssize_t i = 0; i < m_out; ++i) {
          te.mutable_at(i) = theta[i].first;
          th.mutable_at(i) = theta[i].second;
        }
        return py::make_tuple(te, th);
      },
      py::arg("t"), py::arg("N"),
      "theta(t) = log2[N(t)/N(t/2)] at even t; undefined points are dropped.");

  m.def(
      "estimate_critical",
      [](const std::map<double, std::pair<py::array_t<int>, py::array_t<double>>>& data,
         std::pair<int, int> window) {
        std::map<double, GammaSeries> input;
        for (const auto& [gamma, arrays] : data) {
          GammaSeries gs;
          gs.main = series_from_arrays(gamma, arrays.first, arrays.second);
          input[gamma] = std::move(gs);
        }
        CriticalEstimate est = estimate_critical(input, window);
        py::dict out;
        out["gamma_c"] = est.gamma_c;
        out["gamma_error"] = est.gamma_error;
        out["theta"] = est.theta;
        out["theta_error"] = est.theta_error;
        out["boundary"] = est.boundary;
        out["one_sided"] = est.one_sided;
        return out;
      },
      py::arg("data"), py::arg("window"),
      "Critical-point selection over {gamma: (t, N)} series by theta-flatness.");
}
