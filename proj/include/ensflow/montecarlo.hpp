#pragma once

#include <cstdint>
#include <vector>

#include "ensflow/density.hpp"
#include "ensflow/flow.hpp"
#include "ensflow/observable.hpp"
#include "ensflow/spectral.hpp"

namespace ensflow {

/// Ensemble draw from the initial density. The same seed and count always
/// regenerate the identical cloud.
struct SampleCloud {
  std::vector<PhasePoint> points;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
};

SampleCloud draw_cloud(const InitialDensity& f0, std::size_t count, std::uint64_t seed);

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Sample mean and standard error of G(advance(x_i, t)); unbiased for <G>_t
/// because the flow preserves phase-space volume.
McEstimate expectation_mc(const Observable& g, const SampleCloud& cloud, double t,
                          const FlowContext& ctx);

enum class Backend { kMonteCarlo, kFourier, kBoth };

/// Time average of <G>_t over [0, l T), integrated segment-by-segment with
/// Gauss-Legendre of the given order (the integrand is smooth between jump
/// times and the left-closed convention makes the upper endpoint l T^-).
double time_average_fourier(const Observable& g, const InitialDensity& f0, int periods,
                            const FlowContext& ctx, const ModeSet& modes,
                            const ActionQuadrature& quad, int gl_order = 8);

/// Monte Carlo counterpart. Each sample is time-averaged along its own
/// trajectory; value and standard error are the mean and standard error of
/// those per-sample averages.
McEstimate time_average_mc(const Observable& g, const SampleCloud& cloud, int periods,
                           const FlowContext& ctx, int gl_order = 8);

struct ConvergencePoint {
  int horizon = 0;        // l (periods) or N (unit intervals)
  double average = 0.0;   // measured time average
  double abs_error = 0.0; // |average - limit|
  double standard_error = 0.0;  // zero for the Fourier backend
};

struct ConvergenceCurve {
  std::vector<ConvergencePoint> points;
  double decay_exponent = 0.0;  // least-squares slope of log|err| vs log horizon

  const ConvergencePoint& front() const { return points.front(); }
  const ConvergencePoint& back() const { return points.back(); }
};

double fit_decay_exponent(const std::vector<ConvergencePoint>& points);

struct ConvergenceOptions {
  Backend backend = Backend::kFourier;
  int gl_order = 8;
  std::size_t sample_count = 20000;
  std::uint64_t seed = 0x5eedULL;
};

/// Errors of the time average against a known limit over a ladder of
/// horizons, with the fitted decay exponent.
ConvergenceCurve convergence_curve(const Observable& g, const InitialDensity& f0,
                                   const std::vector<int>& horizons, const FlowContext& ctx,
                                   const ModeSet& modes, const ActionQuadrature& quad,
                                   double limit, const ConvergenceOptions& opts = {});

}  // namespace ensflow
