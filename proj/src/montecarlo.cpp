#include "ensflow/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "ensflow/quadrature.hpp"

namespace ensflow {

SampleCloud draw_cloud(const InitialDensity& f0, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("draw_cloud: count must be positive");
  SampleCloud cloud;
  cloud.seed = seed;
  cloud.points.reserve(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) cloud.points.push_back(f0.sample(rng));
  return cloud;
}

McEstimate expectation_mc(const Observable& g, const SampleCloud& cloud, double t,
                          const FlowContext& ctx) {
  if (cloud.points.empty()) throw std::invalid_argument("expectation_mc: empty cloud");
  double sum = 0.0, sumsq = 0.0;
  for (const PhasePoint& x : cloud.points) {
    const PhasePoint y = advance(x, t, ctx);
    const double v = g(y.action, y.angle);
    sum += v;
    sumsq += v * v;
  }
  const double n = static_cast<double>(cloud.points.size());
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return McEstimate{mean, std::sqrt(var / n)};
}

namespace {

/// Gauss-Legendre nodes over every smooth segment [mT + tau_k, mT + tau_{k+1})
/// of [0, periods*T); visitor receives (t, weight).
template <typename F>
void for_each_time_node(const FlowContext& ctx, int periods, int gl_order, F&& visit) {
  const GaussRule base = gauss_legendre(gl_order);
  const double T = ctx.period();
  const int p = ctx.schedule().count();
  for (int m = 0; m < periods; ++m) {
    for (int k = 0; k < p; ++k) {
      const double a = m * T + ctx.schedule().times[static_cast<std::size_t>(k)];
      const double len = ctx.segment_length(k);
      const double mid = a + 0.5 * len, hal = 0.5 * len;
      for (int q = 0; q < gl_order; ++q)
        visit(mid + hal * base.nodes[static_cast<std::size_t>(q)],
              hal * base.weights[static_cast<std::size_t>(q)]);
    }
  }
}

}  // namespace

double time_average_fourier(const Observable& g, const InitialDensity& f0, int periods,
                            const FlowContext& ctx, const ModeSet& modes,
                            const ActionQuadrature& quad, int gl_order) {
  if (periods < 1) throw std::invalid_argument("time_average: need at least one period");
  double acc = 0.0;
  for_each_time_node(ctx, periods, gl_order, [&](double t, double w) {
    acc += w * expectation_fourier(g, f0, t, ctx, modes, quad);
  });
  return acc / (periods * ctx.period());
}

McEstimate time_average_mc(const Observable& g, const SampleCloud& cloud, int periods,
                           const FlowContext& ctx, int gl_order) {
  if (periods < 1) throw std::invalid_argument("time_average: need at least one period");
  if (cloud.points.empty()) throw std::invalid_argument("time_average: empty cloud");
  // Precompute quadrature times once; every trajectory reuses them.
  std::vector<std::pair<double, double>> nodes;
  for_each_time_node(ctx, periods, gl_order, [&](double t, double w) { nodes.emplace_back(t, w); });

  const double total = periods * ctx.period();
  double sum = 0.0, sumsq = 0.0;
  for (const PhasePoint& x : cloud.points) {
    double along = 0.0;
    for (const auto& [t, w] : nodes) {
      const PhasePoint y = advance(x, t, ctx);
      along += w * g(y.action, y.angle);
    }
    along /= total;
    sum += along;
    sumsq += along * along;
  }
  const double n = static_cast<double>(cloud.points.size());
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return McEstimate{mean, std::sqrt(var / n)};
}

double fit_decay_exponent(const std::vector<ConvergencePoint>& points) {
  // Least squares on log-log points; errors below 1e-14 are floored so an
  // exactly converged curve reports a flat slope instead of -inf.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const ConvergencePoint& p : points) {
    const double x = std::log(static_cast<double>(p.horizon));
    const double y = std::log(std::max(p.abs_error, 1e-14));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

ConvergenceCurve convergence_curve(const Observable& g, const InitialDensity& f0,
                                   const std::vector<int>& horizons, const FlowContext& ctx,
                                   const ModeSet& modes, const ActionQuadrature& quad,
                                   double limit, const ConvergenceOptions& opts) {
  ConvergenceCurve curve;
  SampleCloud cloud;
  if (opts.backend == Backend::kMonteCarlo)
    cloud = draw_cloud(f0, opts.sample_count, opts.seed);
  for (int l : horizons) {
    ConvergencePoint point;
    point.horizon = l;
    if (opts.backend == Backend::kMonteCarlo) {
      const McEstimate est = time_average_mc(g, cloud, l, ctx, opts.gl_order);
      point.average = est.value;
      point.standard_error = est.standard_error;
    } else {
      point.average = time_average_fourier(g, f0, l, ctx, modes, quad, opts.gl_order);
    }
    point.abs_error = std::abs(point.average - limit);
    curve.points.push_back(point);
  }
  curve.decay_exponent = fit_decay_exponent(curve.points);
  return curve;
}

}  // namespace ensflow
