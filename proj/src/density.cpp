#include "ensflow/density.hpp"

#include <cmath>
#include <stdexcept>

#include "ensflow/quadrature.hpp"

namespace ensflow {

AngleProfile::AngleProfile(Vec alpha, Vec beta) : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (alpha_.size() != beta_.size())
    throw std::invalid_argument("AngleProfile: alpha/beta length mismatch");
  for (Eigen::Index d = 0; d < alpha_.size(); ++d)
    if (std::hypot(alpha_[d], beta_[d]) > 1.0 + 1e-12)
      throw std::invalid_argument("AngleProfile: need hypot(alpha, beta) <= 1 per dimension");
}

double AngleProfile::value(const Vec& theta) const {
  double v = 1.0;
  for (Eigen::Index d = 0; d < alpha_.size(); ++d)
    v *= (1.0 + alpha_[d] * std::cos(theta[d]) + beta_[d] * std::sin(theta[d])) / kTwoPi;
  return v;
}

Complex AngleProfile::dim_coefficient(int d, int n) const {
  if (n == 0) return Complex(1.0 / kTwoPi, 0.0);
  if (n == 1) return Complex(alpha_[d] / 2.0, -beta_[d] / 2.0) / kTwoPi;
  if (n == -1) return Complex(alpha_[d] / 2.0, beta_[d] / 2.0) / kTwoPi;
  return Complex(0.0, 0.0);
}

Complex AngleProfile::coefficient(const ModeVec& modes) const {
  Complex c(1.0, 0.0);
  for (Eigen::Index d = 0; d < alpha_.size(); ++d) {
    c *= dim_coefficient(static_cast<int>(d), modes[d]);
    if (c == Complex(0.0, 0.0)) return c;
  }
  return c;
}

int AngleProfile::mode_radius() const {
  for (Eigen::Index d = 0; d < alpha_.size(); ++d)
    if (alpha_[d] != 0.0 || beta_[d] != 0.0) return 1;
  return 0;
}

double AngleProfile::sample_dim(int d, double u) const {
  const double a = alpha_[d], b = beta_[d];
  if (a == 0.0 && b == 0.0) return kTwoPi * u;
  // Safeguarded Newton on the strictly increasing CDF
  //   C(theta) = (theta + a sin(theta) + b (1 - cos(theta))) / (2*pi).
  double lo = 0.0, hi = kTwoPi, theta = kTwoPi * u;
  for (int it = 0; it < 100; ++it) {
    const double cdf = (theta + a * std::sin(theta) + b * (1.0 - std::cos(theta))) / kTwoPi;
    const double resid = cdf - u;
    if (resid > 0.0)
      hi = theta;
    else
      lo = theta;
    const double slope = (1.0 + a * std::cos(theta) + b * std::sin(theta)) / kTwoPi;
    double next = theta - resid / std::max(slope, 1e-12);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - theta) < 1e-15) return next;
    theta = next;
  }
  return theta;
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("standard_normal_quantile: p in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(kTwoPi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

Complex InitialDensity::fourier(const Vec& I, const ModeVec& n) const {
  if (fourier_) return fourier_(I, n);
  // Quadrature fallback on the torus; the grid resolves the requested mode.
  const int nmax = n.size() ? n.cwiseAbs().maxCoeff() : 0;
  AngleGrid grid{dim(), std::max(64, 8 * nmax)};
  Complex acc(0.0, 0.0);
  grid.for_each([&](const Vec& theta) {
    acc += density_(I, theta) * std::exp(Complex(0.0, -n.cast<double>().dot(theta)));
  });
  return acc * grid.weight() / std::pow(kTwoPi, dim());
}

InitialDensity InitialDensity::uniform_box(const ActionDomain& support, AngleProfile profile) {
  InitialDensity f;
  f.support_ = support;
  const int n = support.dim();
  if (profile.dim() == 0) profile = AngleProfile::uniform(n);
  if (profile.dim() != n) throw std::invalid_argument("uniform_box: profile dimension mismatch");
  const double inv_vol = 1.0 / support.volume();
  f.marginal_ = [support, inv_vol](const Vec& I) {
    return support.contains(I) ? inv_vol : 0.0;
  };
  f.density_ = [marginal = f.marginal_, profile](const Vec& I, const Vec& theta) {
    return marginal(I) * profile.value(theta);
  };
  f.fourier_ = [marginal = f.marginal_, profile](const Vec& I, const ModeVec& modes) {
    return marginal(I) * profile.coefficient(modes);
  };
  f.sampler_ = [support, profile, n](Rng& rng) {
    Vec I(n), theta(n);
    for (int d = 0; d < n; ++d) I[d] = rng.uniform(support.lower[d], support.upper[d]);
    for (int d = 0; d < n; ++d) theta[d] = profile.sample_dim(d, rng.uniform());
    return PhasePoint(std::move(I), std::move(theta));
  };
  f.mode_radius_ = profile.mode_radius();
  return f;
}

InitialDensity InitialDensity::truncated_gaussian(const ActionDomain& support, Vec mean, Vec sigma,
                                                  AngleProfile profile) {
  InitialDensity f;
  f.support_ = support;
  const int n = support.dim();
  if (mean.size() != n || sigma.size() != n)
    throw std::invalid_argument("truncated_gaussian: parameter dimension mismatch");
  for (int d = 0; d < n; ++d)
    if (!(sigma[d] > 0.0)) throw std::invalid_argument("truncated_gaussian: sigma > 0 required");
  if (profile.dim() == 0) profile = AngleProfile::uniform(n);
  if (profile.dim() != n)
    throw std::invalid_argument("truncated_gaussian: profile dimension mismatch");

  Vec cdf_lo(n), cdf_hi(n), norm(n);
  for (int d = 0; d < n; ++d) {
    cdf_lo[d] = normal_cdf((support.lower[d] - mean[d]) / sigma[d]);
    cdf_hi[d] = normal_cdf((support.upper[d] - mean[d]) / sigma[d]);
    norm[d] = (cdf_hi[d] - cdf_lo[d]) * sigma[d] * std::sqrt(kTwoPi);
  }
  f.marginal_ = [support, mean, sigma, norm](const Vec& I) {
    if (!support.contains(I)) return 0.0;
    double v = 1.0;
    for (Eigen::Index d = 0; d < I.size(); ++d) {
      const double z = (I[d] - mean[d]) / sigma[d];
      v *= std::exp(-0.5 * z * z) / norm[d];
    }
    return v;
  };
  f.density_ = [marginal = f.marginal_, profile](const Vec& I, const Vec& theta) {
    return marginal(I) * profile.value(theta);
  };
  f.fourier_ = [marginal = f.marginal_, profile](const Vec& I, const ModeVec& modes) {
    return marginal(I) * profile.coefficient(modes);
  };
  f.sampler_ = [support, mean, sigma, cdf_lo, cdf_hi, profile, n](Rng& rng) {
    Vec I(n), theta(n);
    for (int d = 0; d < n; ++d) {
      const double u = cdf_lo[d] + rng.uniform() * (cdf_hi[d] - cdf_lo[d]);
      double x = mean[d] + sigma[d] * standard_normal_quantile(u);
      x = std::min(std::max(x, support.lower[d]), support.upper[d]);
      I[d] = x;
    }
    for (int d = 0; d < n; ++d) theta[d] = profile.sample_dim(d, rng.uniform());
    return PhasePoint(std::move(I), std::move(theta));
  };
  f.mode_radius_ = profile.mode_radius();
  return f;
}

InitialDensity InitialDensity::from_callables(const ActionDomain& support, DensityFn density,
                                              MarginalFn marginal, SampleFn sampler,
                                              FourierFn fourier) {
  InitialDensity f;
  f.support_ = support;
  f.density_ = std::move(density);
  f.marginal_ = std::move(marginal);
  f.sampler_ = std::move(sampler);
  f.fourier_ = std::move(fourier);
  f.mode_radius_ = std::nullopt;
  return f;
}

}  // namespace ensflow
