#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ensflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ModeVec = Eigen::VectorXi;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// 2*pi split so that kTwoPiHi + kTwoPiLo carries ~32 extra bits.
inline constexpr double kTwoPiHi = 6.283185307179586;
inline constexpr double kTwoPiLo = 2.4492935982947064e-16;

/// Canonical representative of an angle in [0, 2*pi). Accurate for |x| up to
/// ~1e8 thanks to the split constant.
inline double wrap_angle(double x) {
  const double k = std::floor(x / kTwoPiHi);
  double r = std::fma(-k, kTwoPiHi, x);
  r = std::fma(-k, kTwoPiLo, r);
  if (r >= kTwoPiHi) r -= kTwoPiHi;
  if (r < 0.0) r += kTwoPiHi;
  return r;
}

inline Vec wrap_angles(Vec theta) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = wrap_angle(theta[i]);
  return theta;
}

/// (m * delta) mod 2*pi without forming the full product naively: the product
/// is split into value + fma residual, each reduced separately. Keeps the
/// per-period angle shift usable for period counts up to ~1e6.
inline double scaled_angle_mod_two_pi(double m, double delta) {
  const double p = m * delta;
  const double resid = std::fma(m, delta, -p);
  return wrap_angle(wrap_angle(p) + resid);
}

/// Distance between two angles on the circle, in [0, pi].
inline double circle_distance(double a, double b) {
  return std::abs(std::remainder(a - b, kTwoPi));
}

/// Open box of admissible actions.
struct ActionDomain {
  Vec lower;
  Vec upper;

  ActionDomain() = default;
  ActionDomain(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.size() == 0)
      throw std::invalid_argument("ActionDomain: bounds must be nonempty and of equal length");
    for (Eigen::Index i = 0; i < lower.size(); ++i)
      if (!(lower[i] < upper[i]))
        throw std::invalid_argument("ActionDomain: lower[i] < upper[i] required");
  }

  int dim() const { return static_cast<int>(lower.size()); }

  double volume() const {
    double v = 1.0;
    for (Eigen::Index i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
    return v;
  }

  bool contains(const Vec& I, double margin = 0.0) const {
    if (I.size() != lower.size()) return false;
    for (Eigen::Index i = 0; i < lower.size(); ++i)
      if (I[i] < lower[i] + margin || I[i] > upper[i] - margin) return false;
    return true;
  }

  /// Smallest box containing this one translated by every offset in the list.
  static ActionDomain inflate(const ActionDomain& base, const std::vector<Vec>& offsets) {
    Vec lo = base.lower, hi = base.upper;
    for (const Vec& s : offsets) {
      lo = lo.cwiseMin(base.lower + s);
      hi = hi.cwiseMax(base.upper + s);
    }
    return ActionDomain(lo, hi);
  }
};

/// Point on Omega x T^n. Angles are stored reduced to [0, 2*pi).
struct PhasePoint {
  Vec action;
  Vec angle;

  PhasePoint() = default;
  PhasePoint(Vec I, Vec theta) : action(std::move(I)), angle(wrap_angles(std::move(theta))) {}
};

}  // namespace ensflow
