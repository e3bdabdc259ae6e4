#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "ensflow/rng.hpp"
#include "ensflow/types.hpp"

namespace ensflow {

using Complex = std::complex<double>;

/// Product angle density: per dimension (1 + a cos(theta) + b sin(theta)) / (2*pi).
/// Needs hypot(a, b) <= 1 for nonnegativity; (0, 0) is the uniform marginal.
/// Nonzero Fourier support per dimension is {-1, 0, 1}, which keeps every
/// registry density an exact-coefficient family.
class AngleProfile {
 public:
  AngleProfile() = default;
  AngleProfile(Vec alpha, Vec beta);

  static AngleProfile uniform(int dim) { return AngleProfile(Vec::Zero(dim), Vec::Zero(dim)); }

  int dim() const { return static_cast<int>(alpha_.size()); }
  double value(const Vec& theta) const;
  /// (1/2pi) * integral of g_d(theta) exp(-i n theta): 1/(2pi) at n = 0,
  /// (a -+ i b)/(4pi) at n = +-1, zero otherwise.
  Complex dim_coefficient(int d, int n) const;
  Complex coefficient(const ModeVec& modes) const;
  /// Max |n_d| carrying a nonzero coefficient (0 for uniform, else 1).
  int mode_radius() const;
  /// Inverse-CDF draw for dimension d from u in [0, 1).
  double sample_dim(int d, double u) const;

  const Vec& alpha() const { return alpha_; }
  const Vec& beta() const { return beta_; }

 private:
  Vec alpha_, beta_;
};

/// Initial ensemble density on Omega x T^n. Registry families (uniform box,
/// truncated-Gaussian box marginals, both times an AngleProfile) carry exact
/// Fourier coefficients and inverse-CDF samplers; arbitrary callables fall
/// back to quadrature coefficients and a caller-supplied sampler.
class InitialDensity {
 public:
  using DensityFn = std::function<double(const Vec&, const Vec&)>;
  using MarginalFn = std::function<double(const Vec&)>;
  using FourierFn = std::function<Complex(const Vec&, const ModeVec&)>;
  using SampleFn = std::function<PhasePoint(Rng&)>;

  double operator()(const Vec& I, const Vec& theta) const { return density_(I, theta); }
  /// Action marginal rho(I) with integral 1 over the support box.
  double action_marginal(const Vec& I) const { return marginal_(I); }
  /// fourier(I, n) = (1/(2pi)^n) integral f0(I, theta) exp(-i<n, theta>) dtheta.
  Complex fourier(const Vec& I, const ModeVec& n) const;
  PhasePoint sample(Rng& rng) const { return sampler_(rng); }

  const ActionDomain& support() const { return support_; }
  int dim() const { return support_.dim(); }
  /// Max componentwise angle mode with a nonzero coefficient, if known.
  std::optional<int> angle_mode_radius() const { return mode_radius_; }
  bool has_exact_fourier() const { return static_cast<bool>(fourier_); }

  static InitialDensity uniform_box(const ActionDomain& support, AngleProfile profile = {});
  static InitialDensity truncated_gaussian(const ActionDomain& support, Vec mean, Vec sigma,
                                           AngleProfile profile = {});
  /// Escape hatch: density plus sampler, optional exact coefficients. Missing
  /// coefficients are computed by angle quadrature on demand.
  static InitialDensity from_callables(const ActionDomain& support, DensityFn density,
                                       MarginalFn marginal, SampleFn sampler,
                                       FourierFn fourier = nullptr);

 private:
  ActionDomain support_;
  DensityFn density_;
  MarginalFn marginal_;
  FourierFn fourier_;
  SampleFn sampler_;
  std::optional<int> mode_radius_;
};

/// Quantile of the standard normal (Acklam's rational approximation with one
/// Halley correction); used by the truncated-Gaussian inverse-CDF sampler.
double standard_normal_quantile(double p);

}  // namespace ensflow
