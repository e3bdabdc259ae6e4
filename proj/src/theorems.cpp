#include "ensflow/theorems.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace ensflow {

namespace {

constexpr double kExactErrorFloor = 1e-8;

bool curve_trend_ok(const ConvergenceCurve& curve) {
  double max_err = 0.0;
  for (const ConvergencePoint& p : curve.points) max_err = std::max(max_err, p.abs_error);
  if (max_err <= kExactErrorFloor) return true;  // telescoped exactly from the start
  return curve.back().abs_error < curve.front().abs_error;
}

BackendRun run_backend(Backend backend, const Observable& g, const InitialDensity& f0,
                       const FlowContext& ctx, const SpectralSetup& setup, double limit,
                       const VerifyOptions& opts) {
  ConvergenceOptions copts;
  copts.backend = backend;
  copts.gl_order = opts.gl_order;
  copts.sample_count = opts.sample_count;
  copts.seed = opts.seed;

  BackendRun run;
  run.backend = backend;
  run.curve = convergence_curve(g, f0, opts.horizons, ctx, setup.modes, setup.quad, limit, copts);
  run.final_error = run.curve.back().abs_error;
  run.final_standard_error = run.curve.back().standard_error;
  run.converged = run.final_error <= std::max(opts.tolerance, 3.0 * run.final_standard_error);
  run.trend_ok = curve_trend_ok(run.curve);
  run.passed = run.converged && run.trend_ok;
  return run;
}

}  // namespace

SpectralSetup SpectralSetup::make(const Observable& g, const InitialDensity& f0, int mode_cutoff,
                                  int action_points_per_dim) {
  return SpectralSetup{ModeSet::for_observable(g, mode_cutoff),
                       tensor_gauss_legendre(f0.support(), action_points_per_dim)};
}

double theoretical_limit(const Observable& g, const InitialDensity& f0, const FlowContext& ctx,
                         const ActionQuadrature& quad) {
  double acc = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec& I = quad.nodes[q];
    const double rho = f0.action_marginal(I);
    if (rho == 0.0) continue;
    double per_period = 0.0;
    for (int k = 0; k < ctx.schedule().count(); ++k)
      per_period += ctx.segment_length(k) * angle_average(g, I + ctx.offset(k));
    acc += quad.weights[q] * rho * per_period;
  }
  return acc / ctx.period();
}

LimitReport verify_theorem_4_1(const Observable& g, const InitialDensity& f0,
                               const FlowContext& ctx, const VerifyOptions& opts) {
  LimitReport report;
  report.hypothesis_report = validate_hypotheses(ctx, f0.support(), opts.grid_resolution);
  report.hypotheses_ok = report.hypothesis_report.passed;

  const SpectralSetup setup =
      SpectralSetup::make(g, f0, opts.mode_cutoff, opts.action_points_per_dim);
  report.theoretical_limit = theoretical_limit(g, f0, ctx, setup.quad);

  if (opts.backend == Backend::kFourier || opts.backend == Backend::kBoth)
    report.runs.push_back(
        run_backend(Backend::kFourier, g, f0, ctx, setup, report.theoretical_limit, opts));
  if (opts.backend == Backend::kMonteCarlo || opts.backend == Backend::kBoth)
    report.runs.push_back(
        run_backend(Backend::kMonteCarlo, g, f0, ctx, setup, report.theoretical_limit, opts));

  bool all_runs = !report.runs.empty();
  for (const BackendRun& run : report.runs) all_runs = all_runs && run.passed;
  report.final_error = report.runs.empty() ? 0.0 : report.runs.back().final_error;
  report.passed = report.hypotheses_ok && all_runs;
  return report;
}

FamilyReport verify_theorem_4_2(const InitialDensity& f0, const FlowContext& ctx,
                                const std::vector<std::pair<std::string, Observable>>& family,
                                const VerifyOptions& opts) {
  FamilyReport report;
  report.all_passed = !family.empty();
  for (const auto& [name, g] : family) {
    LimitReport r = verify_theorem_4_1(g, f0, ctx, opts);
    report.all_passed = report.all_passed && r.passed;
    report.reports.emplace_back(name, std::move(r));
  }
  return report;
}

DecayTable rl_time_average_demo(const std::vector<std::function<Complex(const Vec&)>>& amplitudes,
                                const ModeVec& mode, const FlowContext& ctx,
                                const ActionQuadrature& quad, const std::vector<int>& horizons,
                                int gl_order) {
  if (static_cast<int>(amplitudes.size()) != ctx.schedule().count())
    throw std::invalid_argument("rl demo: one amplitude per schedule segment required");
  const GaussRule base = gauss_legendre(gl_order);
  const double T = ctx.period();

  auto oscillatory_integral = [&](double t, int segment) {
    Complex acc(0.0, 0.0);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec& I = quad.nodes[q];
      const Vec phi = angle_drift(I, t, ctx);
      acc += quad.weights[q] * amplitudes[static_cast<std::size_t>(segment)](I) *
             std::exp(Complex(0.0, mode.cast<double>().dot(phi)));
    }
    return acc;
  };

  DecayTable table;
  std::vector<int> ladder = horizons;
  std::size_t next = 0;
  Complex integral(0.0, 0.0);
  const int max_l = ladder.empty() ? 0 : ladder.back();
  for (int m = 0; m < max_l; ++m) {
    for (int k = 0; k < ctx.schedule().count(); ++k) {
      const double a = m * T + ctx.schedule().times[static_cast<std::size_t>(k)];
      const double len = ctx.segment_length(k);
      const double mid = a + 0.5 * len, hal = 0.5 * len;
      for (int q = 0; q < gl_order; ++q)
        integral += hal * base.weights[static_cast<std::size_t>(q)] *
                    oscillatory_integral(mid + hal * base.nodes[static_cast<std::size_t>(q)], k);
    }
    while (next < ladder.size() && ladder[next] == m + 1) {
      const double horizon = (m + 1) * T;
      table.rows.push_back({horizon, std::abs(integral) / horizon});
      ++next;
    }
  }
  return table;
}

DecayTable bounded_decay_average_demo(const std::function<double(double)>& m,
                                      const std::vector<int>& horizons, int gl_order) {
  const GaussRule base = gauss_legendre(gl_order);
  DecayTable table;
  std::size_t next = 0;
  double integral = 0.0;
  const int max_l = horizons.empty() ? 0 : horizons.back();
  for (int j = 0; j < max_l; ++j) {
    const double mid = j + 0.5, hal = 0.5;
    for (int q = 0; q < gl_order; ++q)
      integral += hal * base.weights[static_cast<std::size_t>(q)] *
                  m(mid + hal * base.nodes[static_cast<std::size_t>(q)]);
    while (next < horizons.size() && horizons[next] == j + 1) {
      table.rows.push_back({static_cast<double>(j + 1), std::abs(integral) / (j + 1)});
      ++next;
    }
  }
  return table;
}

}  // namespace ensflow
