#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "ensflow/types.hpp"

namespace ensflow {

using Complex = std::complex<double>;

/// Multivariate polynomial in the action variables, stored as monomials.
struct Monomial {
  double coef = 0.0;
  ModeVec exponents;  // one entry per action dimension, >= 0
};

struct Polynomial {
  std::vector<Monomial> terms;

  double operator()(const Vec& I) const {
    double v = 0.0;
    for (const Monomial& m : terms) {
      double t = m.coef;
      for (Eigen::Index d = 0; d < m.exponents.size(); ++d)
        for (int e = 0; e < m.exponents[d]; ++e) t *= I[d];
      v += t;
    }
    return v;
  }

  bool empty() const { return terms.empty(); }

  /// sum |c| * max(|lo|,|hi|)^e over a box -- a safe sup bound.
  double bound_on(const ActionDomain& box) const {
    double b = 0.0;
    for (const Monomial& m : terms) {
      double t = std::abs(m.coef);
      for (Eigen::Index d = 0; d < m.exponents.size(); ++d) {
        const double r = std::max(std::abs(box.lower[d]), std::abs(box.upper[d]));
        for (int e = 0; e < m.exponents[d]; ++e) t *= r;
      }
      b += t;
    }
    return b;
  }

  static Polynomial constant(double c, int dim) {
    return Polynomial{{Monomial{c, ModeVec::Zero(dim)}}};
  }
};

/// One trigonometric term: re(I) cos<n, theta> + im(I) sin<n, theta>.
struct TrigTerm {
  ModeVec mode;
  Polynomial re;
  Polynomial im;
};

/// Bounded continuous observable G on the inflated domain times the torus,
/// with exact-or-quadrature Fourier coefficients in the angle variables.
class Observable {
 public:
  using EvalFn = std::function<double(const Vec&, const Vec&)>;
  using FourierFn = std::function<Complex(const Vec&, const ModeVec&)>;

  double operator()(const Vec& I, const Vec& theta) const { return eval_(I, theta); }
  double bound() const { return bound_; }
  /// fourier(I, n) = (1/(2pi)^n) integral G(I, theta) exp(-i<n, theta>) dtheta;
  /// exact for the trig-polynomial family, otherwise torus quadrature with
  /// max(64, 8 |n|_inf) points per angle dimension.
  Complex fourier(const Vec& I, const ModeVec& n) const;
  const std::optional<std::vector<ModeVec>>& mode_support() const { return mode_support_; }
  bool has_exact_fourier() const { return static_cast<bool>(fourier_); }
  int dim() const { return dim_; }

  /// G = sum_j re_j(I) cos<n_j, theta> + im_j(I) sin<n_j, theta>; the bound is
  /// evaluated on the supplied (inflated) domain box.
  static Observable trig_polynomial(std::vector<TrigTerm> terms, const ActionDomain& domain);
  static Observable from_callable(int dim, EvalFn eval, double bound, FourierFn fourier = nullptr);

 private:
  int dim_ = 0;
  EvalFn eval_;
  FourierFn fourier_;
  double bound_ = 0.0;
  std::optional<std::vector<ModeVec>> mode_support_;
};

}  // namespace ensflow
