#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ensflow/almostperiodic.hpp"
#include "ensflow/config.hpp"
#include "ensflow/runner.hpp"
#include "ensflow/theorems.hpp"

namespace py = pybind11;
using namespace ensflow;

namespace {

using PyMonomial = std::pair<double, std::vector<int>>;
using PyTrigTerm = std::tuple<std::vector<int>, std::vector<PyMonomial>, std::vector<PyMonomial>>;

ModeVec to_modevec(const std::vector<int>& v) {
  ModeVec m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m[static_cast<Eigen::Index>(i)] = v[i];
  return m;
}

Polynomial to_polynomial(const std::vector<PyMonomial>& monomials) {
  Polynomial p;
  for (const auto& [c, e] : monomials) p.terms.push_back({c, to_modevec(e)});
  return p;
}

Observable make_trig_polynomial(const std::vector<PyTrigTerm>& terms, const ActionDomain& domain) {
  std::vector<TrigTerm> built;
  for (const auto& [mode, re, im] : terms)
    built.push_back({to_modevec(mode), to_polynomial(re), to_polynomial(im)});
  return Observable::trig_polynomial(std::move(built), domain);
}

py::dict curve_to_dict(const ConvergenceCurve& curve) {
  py::list points;
  for (const ConvergencePoint& p : curve.points) {
    py::dict row;
    row["horizon"] = p.horizon;
    row["time_average"] = p.average;
    row["abs_error"] = p.abs_error;
    row["standard_error"] = p.standard_error;
    points.append(row);
  }
  py::dict out;
  out["points"] = points;
  out["decay_exponent"] = curve.decay_exponent;
  return out;
}

py::dict run_to_dict(const BackendRun& run) {
  py::dict out;
  out["backend"] = run.backend == Backend::kMonteCarlo ? "mc" : "fourier";
  out["final_error"] = run.final_error;
  out["final_standard_error"] = run.final_standard_error;
  out["converged"] = run.converged;
  out["trend_ok"] = run.trend_ok;
  out["passed"] = run.passed;
  out["curve"] = curve_to_dict(run.curve);
  return out;
}

py::dict report_to_dict(const LimitReport& report) {
  py::dict out;
  out["theoretical_limit"] = report.theoretical_limit;
  out["final_error"] = report.final_error;
  out["hypotheses_ok"] = report.hypotheses_ok;
  out["min_singular_value"] = report.hypothesis_report.min_singular_value;
  py::list runs;
  for (const BackendRun& run : report.runs) runs.append(run_to_dict(run));
  out["runs"] = runs;
  out["passed"] = report.passed;
  return out;
}

py::dict ap_report_to_dict(const ApLimitReport& report) {
  py::dict out;
  out["theoretical_limit"] = report.theoretical_limit;
  out["cesaro_diagnostic"] = report.cesaro_diagnostic;
  out["final_error"] = report.final_error;
  out["hypotheses_ok"] = report.hypotheses_ok;
  py::list runs;
  for (const BackendRun& run : report.runs) runs.append(run_to_dict(run));
  out["runs"] = runs;
  out["passed"] = report.passed;
  return out;
}

Backend backend_from_name(const std::string& name) { return parse_backend(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact flows of integrable systems with action jumps, ensemble averages, "
            "and time-average convergence checks";

  py::class_<ActionDomain>(m, "ActionDomain")
      .def(py::init<Vec, Vec>(), py::arg("lower"), py::arg("upper"))
      .def_readonly("lower", &ActionDomain::lower)
      .def_readonly("upper", &ActionDomain::upper)
      .def_property_readonly("dim", &ActionDomain::dim)
      .def("volume", &ActionDomain::volume)
      .def("contains", &ActionDomain::contains, py::arg("I"), py::arg("margin") = 0.0);

  py::class_<TransitionSchedule>(m, "TransitionSchedule")
      .def(py::init([](double period, std::vector<double> times, std::vector<Vec> jumps) {
             return TransitionSchedule{period, std::move(times), std::move(jumps)};
           }),
           py::arg("period"), py::arg("times"), py::arg("jumps"))
      .def_readonly("period", &TransitionSchedule::period)
      .def_readonly("times", &TransitionSchedule::times)
      .def_readonly("jumps", &TransitionSchedule::jumps);

  m.def("validate_schedule", [](const TransitionSchedule& s) {
    py::dict out;
    const ValidationReport report = validate_schedule(s);
    py::list checks;
    for (const ValidationCheck& c : report.checks) {
      py::dict item;
      item["name"] = c.name;
      item["passed"] = c.passed;
      item["detail"] = c.detail;
      checks.append(item);
    }
    out["checks"] = checks;
    out["passed"] = report.all_passed();
    return out;
  });

  py::class_<FrequencyField>(m, "FrequencyField")
      .def_static("linear", [](Mat A, Vec b) { return FrequencyField::linear(A, b); },
                  py::arg("matrix"), py::arg("offset"))
      .def_static("constant", &FrequencyField::constant, py::arg("value"))
      .def("__call__", [](const FrequencyField& f, const Vec& I) { return f(I); })
      .def("gradient", &FrequencyField::gradient);

  py::class_<InitialDensity>(m, "InitialDensity")
      .def_static(
          "uniform_box",
          [](const ActionDomain& support, std::optional<Vec> alpha, std::optional<Vec> beta) {
            const int n = support.dim();
            AngleProfile profile(alpha.value_or(Vec::Zero(n)), beta.value_or(Vec::Zero(n)));
            return InitialDensity::uniform_box(support, std::move(profile));
          },
          py::arg("support"), py::arg("angle_alpha") = std::nullopt,
          py::arg("angle_beta") = std::nullopt)
      .def_static(
          "truncated_gaussian",
          [](const ActionDomain& support, Vec mean, Vec sigma, std::optional<Vec> alpha,
             std::optional<Vec> beta) {
            const int n = support.dim();
            AngleProfile profile(alpha.value_or(Vec::Zero(n)), beta.value_or(Vec::Zero(n)));
            return InitialDensity::truncated_gaussian(support, std::move(mean), std::move(sigma),
                                                      std::move(profile));
          },
          py::arg("support"), py::arg("mean"), py::arg("sigma"),
          py::arg("angle_alpha") = std::nullopt, py::arg("angle_beta") = std::nullopt)
      .def("__call__",
           [](const InitialDensity& f, const Vec& I, const Vec& theta) { return f(I, theta); })
      .def("action_marginal", &InitialDensity::action_marginal)
      .def_property_readonly("support", &InitialDensity::support);

  py::class_<Observable>(m, "Observable")
      .def_static("trig_polynomial", &make_trig_polynomial, py::arg("terms"), py::arg("domain"),
                  "terms: list of (mode, re_monomials, im_monomials); each monomial is "
                  "(coefficient, exponents)")
      .def("__call__",
           [](const Observable& g, const Vec& I, const Vec& theta) { return g(I, theta); })
      .def_property_readonly("bound", &Observable::bound)
      .def("fourier", [](const Observable& g, const Vec& I, const std::vector<int>& n) {
        return g.fourier(I, to_modevec(n));
      });

  py::class_<PhasePoint>(m, "PhasePoint")
      .def(py::init<Vec, Vec>(), py::arg("action"), py::arg("angle"))
      .def_readonly("action", &PhasePoint::action)
      .def_readonly("angle", &PhasePoint::angle)
      .def("__repr__", [](const PhasePoint& x) {
        std::ostringstream os;
        os << "PhasePoint(action=" << x.action.transpose() << ", angle=" << x.angle.transpose()
           << ")";
        return os.str();
      });

  py::class_<FlowContext>(m, "FlowContext")
      .def(py::init<TransitionSchedule, FrequencyField>(), py::arg("schedule"), py::arg("field"))
      .def_property_readonly("period", &FlowContext::period)
      .def("offset", &FlowContext::offset, py::return_value_policy::copy);

  m.def("advance", &advance, py::arg("point"), py::arg("t"), py::arg("ctx"));
  m.def("invert", &invert, py::arg("point"), py::arg("t"), py::arg("ctx"));
  m.def("action_at", &action_at, py::arg("initial_action"), py::arg("t"), py::arg("ctx"));
  m.def("period_angle_shift", &period_angle_shift, py::arg("I"), py::arg("ctx"));
  m.def("average_frequency", &average_frequency, py::arg("I"), py::arg("ctx"));
  m.def("jacobian_determinant_probe", &jacobian_determinant_probe, py::arg("point"), py::arg("t"),
        py::arg("ctx"), py::arg("step_scale") = 1e-6);

  m.def(
      "expectation_fourier",
      [](const Observable& g, const InitialDensity& f0, double t, const FlowContext& ctx,
         int mode_cutoff, int action_points) {
        const SpectralSetup setup = SpectralSetup::make(g, f0, mode_cutoff, action_points);
        return expectation_fourier(g, f0, t, ctx, setup.modes, setup.quad);
      },
      py::arg("observable"), py::arg("density"), py::arg("t"), py::arg("ctx"),
      py::arg("mode_cutoff") = 16, py::arg("action_points") = 32);

  m.def(
      "expectation_mc",
      [](const Observable& g, const InitialDensity& f0, double t, const FlowContext& ctx,
         std::size_t samples, std::uint64_t seed) {
        const SampleCloud cloud = draw_cloud(f0, samples, seed);
        const McEstimate est = expectation_mc(g, cloud, t, ctx);
        return py::make_tuple(est.value, est.standard_error);
      },
      py::arg("observable"), py::arg("density"), py::arg("t"), py::arg("ctx"),
      py::arg("samples") = 100000, py::arg("seed") = 42);

  m.def(
      "time_average",
      [](const Observable& g, const InitialDensity& f0, int periods, const FlowContext& ctx,
         const std::string& backend, int gl_order, std::size_t samples, std::uint64_t seed,
         int mode_cutoff, int action_points) -> py::object {
        const SpectralSetup setup = SpectralSetup::make(g, f0, mode_cutoff, action_points);
        if (backend_from_name(backend) == Backend::kMonteCarlo) {
          const SampleCloud cloud = draw_cloud(f0, samples, seed);
          const McEstimate est = time_average_mc(g, cloud, periods, ctx, gl_order);
          return py::make_tuple(est.value, est.standard_error);
        }
        return py::float_(
            time_average_fourier(g, f0, periods, ctx, setup.modes, setup.quad, gl_order));
      },
      py::arg("observable"), py::arg("density"), py::arg("periods"), py::arg("ctx"),
      py::arg("backend") = "fourier", py::arg("gl_order") = 8, py::arg("samples") = 20000,
      py::arg("seed") = 42, py::arg("mode_cutoff") = 16, py::arg("action_points") = 32);

  m.def(
      "theoretical_limit",
      [](const Observable& g, const InitialDensity& f0, const FlowContext& ctx,
         int action_points) {
        return theoretical_limit(g, f0, ctx, tensor_gauss_legendre(f0.support(), action_points));
      },
      py::arg("observable"), py::arg("density"), py::arg("ctx"), py::arg("action_points") = 32);

  m.def(
      "verify_theorem_4_1",
      [](const Observable& g, const InitialDensity& f0, const FlowContext& ctx,
         const std::vector<int>& horizons, const std::string& backend, double tolerance,
         std::size_t samples, std::uint64_t seed) {
        VerifyOptions opts;
        if (!horizons.empty()) opts.horizons = horizons;
        opts.backend = backend_from_name(backend);
        opts.tolerance = tolerance;
        opts.sample_count = samples;
        opts.seed = seed;
        return report_to_dict(verify_theorem_4_1(g, f0, ctx, opts));
      },
      py::arg("observable"), py::arg("density"), py::arg("ctx"),
      py::arg("horizons") = std::vector<int>{}, py::arg("backend") = "fourier",
      py::arg("tolerance") = 5e-3, py::arg("samples") = 20000, py::arg("seed") = 42);

  py::class_<JumpSequence>(m, "JumpSequence")
      .def_static("quasiperiodic", &JumpSequence::quasiperiodic, py::arg("amplitude"),
                  py::arg("rotation"))
      .def_static("periodic", &JumpSequence::periodic, py::arg("jumps"))
      .def("offset", &JumpSequence::offset, py::arg("n"))
      .def("jump", &JumpSequence::jump, py::arg("n"))
      .def_property_readonly("bound", &JumpSequence::bound);

  m.def("advance_ap", &advance_ap, py::arg("point"), py::arg("t"), py::arg("sequence"),
        py::arg("field"));
  m.def(
      "find_almost_period",
      [](const JumpSequence& seq, double epsilon, int window, std::int64_t samples) -> py::object {
        const auto p = find_almost_period(seq, epsilon, window, samples);
        if (!p) return py::none();
        return py::int_(*p);
      },
      py::arg("sequence"), py::arg("epsilon"), py::arg("window"), py::arg("samples") = 2000);
  m.def("averaged_frequency_N", &averaged_frequency_N, py::arg("I"), py::arg("sequence"),
        py::arg("field"), py::arg("N"));
  m.def(
      "theoretical_limit_ap",
      [](const Observable& g, const InitialDensity& f0, const JumpSequence& seq, std::int64_t N,
         int action_points) {
        return theoretical_limit_ap(g, f0, seq, N,
                                    tensor_gauss_legendre(f0.support(), action_points));
      },
      py::arg("observable"), py::arg("density"), py::arg("sequence"), py::arg("N"),
      py::arg("action_points") = 32);
  m.def(
      "verify_theorem_5_1",
      [](const Observable& g, const InitialDensity& f0, const JumpSequence& seq,
         const FrequencyField& field, const std::vector<int>& horizons, const std::string& backend,
         double tolerance, std::size_t samples, std::uint64_t seed) {
        ApVerifyOptions opts;
        if (!horizons.empty()) opts.horizons = horizons;
        opts.backend = backend_from_name(backend);
        opts.tolerance = tolerance;
        opts.sample_count = samples;
        opts.seed = seed;
        return ap_report_to_dict(verify_theorem_5_1(g, f0, seq, field, opts));
      },
      py::arg("observable"), py::arg("density"), py::arg("sequence"), py::arg("field"),
      py::arg("horizons") = std::vector<int>{}, py::arg("backend") = "fourier",
      py::arg("tolerance") = 5e-3, py::arg("samples") = 10000, py::arg("seed") = 42);

  m.def(
      "run_command",
      [](const std::string& config_json, const std::string& command, const std::string& which,
         const std::string& out_dir, bool negative_control) {
        const RunConfig cfg = parse_config(config_json);
        const RunOptions opts{out_dir, negative_control};
        std::ostringstream log;
        int code = kExitConfig;
        if (command == "validate")
          code = run_validate(cfg, opts, log);
        else if (command == "simulate")
          code = run_simulate(cfg, opts, log);
        else if (command == "verify")
          code = run_verify(cfg, which, opts, log);
        else
          throw ConfigError("run_command: expected validate | simulate | verify");
        return py::make_tuple(code, log.str());
      },
      py::arg("config_json"), py::arg("command"), py::arg("which") = "", py::arg("out_dir") = "",
      py::arg("negative_control") = false,
      "Run a CLI command in-process; returns (exit_code, log_text)");

  py::register_exception<ConfigError>(m, "ConfigError");
}
