#include "ensflow/almostperiodic.hpp"

#include <cmath>
#include <stdexcept>

namespace ensflow {

JumpSequence JumpSequence::quasiperiodic(Vec amplitude, double rotation) {
  if (!(rotation > 0.0 && rotation < 1.0))
    throw std::invalid_argument("quasiperiodic: rotation must lie in (0, 1)");
  const double bound = 2.0 * amplitude.norm();
  const int dim = static_cast<int>(amplitude.size());
  return JumpSequence(
      [amplitude, rotation](std::int64_t n) -> Vec {
        return amplitude * (std::cos(kTwoPi * rotation * static_cast<double>(n)) - 1.0);
      },
      bound, dim);
}

JumpSequence JumpSequence::periodic(std::vector<Vec> jumps) {
  if (jumps.empty()) throw std::invalid_argument("periodic: need at least one jump");
  if (jumps.front().norm() != 0.0) throw std::invalid_argument("periodic: jumps[0] must vanish");
  const int dim = static_cast<int>(jumps.front().size());
  std::vector<Vec> prefix;  // prefix[j] = sum_{i<=j} jumps[i]
  Vec acc = Vec::Zero(dim);
  double bound = 0.0;
  for (const Vec& j : jumps) {
    if (j.size() != dim) throw std::invalid_argument("periodic: jump dimension mismatch");
    acc += j;
    prefix.push_back(acc);
    bound = std::max(bound, acc.norm());
  }
  if (prefix.back().norm() > kNetJumpTolerance)
    throw std::invalid_argument("periodic: jumps must sum to zero over one period");
  const std::int64_t r = static_cast<std::int64_t>(jumps.size());
  return JumpSequence(
      [prefix, r](std::int64_t n) -> Vec { return prefix[static_cast<std::size_t>(n % r)]; },
      bound, dim);
}

ApFlow::ApFlow(const JumpSequence& seq, const FrequencyField& field, Vec initial_action)
    : seq_(&seq), field_(&field), initial_action_(std::move(initial_action)) {
  partial_.push_back(Vec::Zero(initial_action_.size()));
}

void ApFlow::extend(std::int64_t upto) {
  while (static_cast<std::int64_t>(partial_.size()) <= upto) {
    const std::int64_t j = static_cast<std::int64_t>(partial_.size()) - 1;
    partial_.push_back(partial_.back() + (*field_)(initial_action_ + seq_->offset(j)));
  }
}

Vec ApFlow::action_at(double t) const {
  return initial_action_ + seq_->offset(static_cast<std::int64_t>(std::floor(t)));
}

Vec ApFlow::drift(double t) {
  if (t < 0.0) throw std::invalid_argument("ApFlow: t must be nonnegative");
  const std::int64_t j = static_cast<std::int64_t>(std::floor(t));
  extend(j);
  const double frac = t - static_cast<double>(j);
  Vec d = partial_[static_cast<std::size_t>(j)];
  if (frac > 0.0) d += frac * (*field_)(initial_action_ + seq_->offset(j));
  return wrap_angles(std::move(d));
}

PhasePoint ApFlow::advance(const Vec& theta0, double t) {
  PhasePoint out;
  out.action = action_at(t);
  out.angle = wrap_angles(theta0 + drift(t));
  return out;
}

PhasePoint advance_ap(const PhasePoint& x, double t, const JumpSequence& seq,
                      const FrequencyField& field) {
  ApFlow flow(seq, field, x.action);
  return flow.advance(x.angle, t);
}

std::optional<int> find_almost_period(const JumpSequence& seq, double epsilon, int window,
                                      std::int64_t samples) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("find_almost_period: epsilon must be positive");
  for (int p = 1; p <= window; ++p) {
    double sup = 0.0;
    for (std::int64_t n = 0; n <= samples; ++n) {
      sup = std::max(sup, (seq.offset(n + p) - seq.offset(n)).norm());
      if (sup >= epsilon) break;
    }
    if (sup < epsilon) return p;
  }
  return std::nullopt;
}

Vec averaged_frequency_N(const Vec& I, const JumpSequence& seq, const FrequencyField& field,
                         std::int64_t N) {
  Vec acc = Vec::Zero(I.size());
  for (std::int64_t i = 0; i < N; ++i) acc += field(I + seq.offset(i));
  return acc / static_cast<double>(N);
}

Mat averaged_frequency_N_gradient(const Vec& I, const JumpSequence& seq,
                                  const FrequencyField& field, std::int64_t N) {
  Mat acc = Mat::Zero(I.size(), I.size());
  for (std::int64_t i = 0; i < N; ++i) acc += field.gradient(I + seq.offset(i));
  return acc / static_cast<double>(N);
}

ApHypothesisReport validate_ap_hypotheses(const JumpSequence& seq, const FrequencyField& field,
                                          const ActionDomain& support_box, int grid_resolution,
                                          const std::vector<std::int64_t>& probe_N) {
  ApHypothesisReport report;
  report.passed = true;
  const std::vector<Vec> grid = uniform_grid(support_box, grid_resolution);
  for (std::int64_t N : probe_N) {
    HypothesisReport scan;
    scan.min_singular_value = std::numeric_limits<double>::infinity();
    scan.grid_points = static_cast<int>(grid.size());
    for (const Vec& I : grid) {
      const Mat grad = averaged_frequency_N_gradient(I, seq, field, N);
      const double sv = Eigen::JacobiSVD<Mat>(grad).singularValues().minCoeff();
      scan.min_singular_value = std::min(scan.min_singular_value, sv);
      if (sv <= kCriticalPointTolerance) scan.violations.push_back(I);
    }
    scan.passed = scan.violations.empty();
    report.passed = report.passed && scan.passed;
    report.scans.emplace_back(N, std::move(scan));
  }
  return report;
}

double theoretical_limit_ap(const Observable& g, const InitialDensity& f0, const JumpSequence& seq,
                            std::int64_t N, const ActionQuadrature& quad) {
  if (N < 1) throw std::invalid_argument("theoretical_limit_ap: N >= 1 required");
  std::vector<Vec> offsets;
  offsets.reserve(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) offsets.push_back(seq.offset(i));

  double acc = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec& I = quad.nodes[q];
    const double rho = f0.action_marginal(I);
    if (rho == 0.0) continue;
    double sum = 0.0;
    for (const Vec& c : offsets) sum += angle_average(g, I + c);
    acc += quad.weights[q] * rho * sum;
  }
  return acc / static_cast<double>(N);
}

double expectation_fourier_ap(const Observable& g, const InitialDensity& f0, double t,
                              const JumpSequence& seq, const FrequencyField& field,
                              const ModeSet& modes, const ActionQuadrature& quad,
                              double imag_tol) {
  const std::int64_t j = static_cast<std::int64_t>(std::floor(t));
  const Vec offset = seq.offset(j);
  std::vector<ApFlow> flows;
  flows.reserve(quad.size());
  for (const Vec& I : quad.nodes) flows.emplace_back(seq, field, I);
  return expectation_from_phase(
      g, f0, modes, quad, offset,
      [&](std::size_t q, const Vec&) { return flows[q].drift(t); }, imag_tol);
}

double time_average_fourier_ap(const Observable& g, const InitialDensity& f0, int N,
                               const JumpSequence& seq, const FrequencyField& field,
                               const ModeSet& modes, const ActionQuadrature& quad,
                               int gl_order) {
  if (N < 1) throw std::invalid_argument("time_average_ap: N >= 1 required");
  const GaussRule base = gauss_legendre(gl_order, 0.0, 1.0);

  // Per-node running drift partial sums, advanced one unit interval at a time.
  std::vector<Vec> partial(quad.size(), Vec::Zero(quad.nodes.front().size()));
  double acc = 0.0;
  for (int j = 0; j < N; ++j) {
    const Vec offset = seq.offset(j);
    std::vector<Vec> omega(quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q) omega[q] = field(quad.nodes[q] + offset);
    for (int node = 0; node < gl_order; ++node) {
      const double frac = base.nodes[static_cast<std::size_t>(node)];
      const double w = base.weights[static_cast<std::size_t>(node)];
      const double value = expectation_from_phase(
          g, f0, modes, quad, offset,
          [&](std::size_t q, const Vec&) -> Vec {
            return wrap_angles(partial[q] + frac * omega[q]);
          });
      acc += w * value;
    }
    for (std::size_t q = 0; q < quad.size(); ++q) partial[q] += omega[q];
  }
  return acc / static_cast<double>(N);
}

McEstimate time_average_mc_ap(const Observable& g, const SampleCloud& cloud, int N,
                              const JumpSequence& seq, const FrequencyField& field,
                              int gl_order) {
  if (N < 1) throw std::invalid_argument("time_average_ap: N >= 1 required");
  if (cloud.points.empty()) throw std::invalid_argument("time_average_ap: empty cloud");
  const GaussRule base = gauss_legendre(gl_order, 0.0, 1.0);

  std::vector<Vec> offsets;
  offsets.reserve(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) offsets.push_back(seq.offset(j));

  double sum = 0.0, sumsq = 0.0;
  for (const PhasePoint& x : cloud.points) {
    Vec partial = Vec::Zero(x.action.size());
    double along = 0.0;
    for (int j = 0; j < N; ++j) {
      const Vec action = x.action + offsets[static_cast<std::size_t>(j)];
      const Vec omega = field(action);
      for (int node = 0; node < gl_order; ++node) {
        const Vec theta =
            wrap_angles(x.angle + partial + base.nodes[static_cast<std::size_t>(node)] * omega);
        along += base.weights[static_cast<std::size_t>(node)] * g(action, theta);
      }
      partial += omega;
    }
    along /= static_cast<double>(N);
    sum += along;
    sumsq += along * along;
  }
  const double n = static_cast<double>(cloud.points.size());
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return McEstimate{mean, std::sqrt(var / n)};
}

ApLimitReport verify_theorem_5_1(const Observable& g, const InitialDensity& f0,
                                 const JumpSequence& seq, const FrequencyField& field,
                                 const ApVerifyOptions& opts) {
  ApLimitReport report;
  std::vector<std::int64_t> probes;
  for (int h : opts.horizons) probes.push_back(h);
  report.hypothesis_report =
      validate_ap_hypotheses(seq, field, f0.support(), opts.grid_resolution, probes);
  report.hypotheses_ok = report.hypothesis_report.passed;

  const SpectralSetup setup =
      SpectralSetup::make(g, f0, opts.mode_cutoff, opts.action_points_per_dim);
  const std::int64_t n_ref = 2 * static_cast<std::int64_t>(opts.horizons.back());
  report.theoretical_limit = theoretical_limit_ap(g, f0, seq, n_ref, setup.quad);
  report.cesaro_diagnostic =
      std::abs(report.theoretical_limit - theoretical_limit_ap(g, f0, seq, 2 * n_ref, setup.quad));

  auto run_curve = [&](Backend backend) {
    BackendRun run;
    run.backend = backend;
    SampleCloud cloud;
    if (backend == Backend::kMonteCarlo) cloud = draw_cloud(f0, opts.sample_count, opts.seed);
    for (int N : opts.horizons) {
      ConvergencePoint point;
      point.horizon = N;
      if (backend == Backend::kMonteCarlo) {
        const McEstimate est = time_average_mc_ap(g, cloud, N, seq, field, opts.gl_order);
        point.average = est.value;
        point.standard_error = est.standard_error;
      } else {
        point.average =
            time_average_fourier_ap(g, f0, N, seq, field, setup.modes, setup.quad, opts.gl_order);
      }
      point.abs_error = std::abs(point.average - report.theoretical_limit);
      run.curve.points.push_back(point);
    }
    run.curve.decay_exponent = fit_decay_exponent(run.curve.points);
    run.final_error = run.curve.back().abs_error;
    run.final_standard_error = run.curve.back().standard_error;
    run.converged = run.final_error <= std::max(opts.tolerance, 3.0 * run.final_standard_error);
    double max_err = 0.0;
    for (const ConvergencePoint& p : run.curve.points) max_err = std::max(max_err, p.abs_error);
    run.trend_ok = max_err <= 1e-8 || run.curve.back().abs_error < run.curve.front().abs_error;
    run.passed = run.converged && run.trend_ok;
    return run;
  };

  if (opts.backend == Backend::kFourier || opts.backend == Backend::kBoth)
    report.runs.push_back(run_curve(Backend::kFourier));
  if (opts.backend == Backend::kMonteCarlo || opts.backend == Backend::kBoth)
    report.runs.push_back(run_curve(Backend::kMonteCarlo));

  bool all_runs = !report.runs.empty();
  for (const BackendRun& run : report.runs) all_runs = all_runs && run.passed;
  report.final_error = report.runs.empty() ? 0.0 : report.runs.back().final_error;
  report.passed = report.hypotheses_ok && all_runs;
  return report;
}

}  // namespace ensflow
