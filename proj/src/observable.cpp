#include "ensflow/observable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ensflow/quadrature.hpp"

namespace ensflow {

Complex Observable::fourier(const Vec& I, const ModeVec& n) const {
  if (fourier_) return fourier_(I, n);
  const int nmax = n.size() ? n.cwiseAbs().maxCoeff() : 0;
  AngleGrid grid{dim_, std::max(64, 8 * nmax)};
  Complex acc(0.0, 0.0);
  grid.for_each([&](const Vec& theta) {
    acc += eval_(I, theta) * std::exp(Complex(0.0, -n.cast<double>().dot(theta)));
  });
  return acc * grid.weight() / std::pow(kTwoPi, dim_);
}

Observable Observable::trig_polynomial(std::vector<TrigTerm> terms, const ActionDomain& domain) {
  if (terms.empty()) throw std::invalid_argument("trig_polynomial: no terms");
  const int n = domain.dim();
  for (const TrigTerm& t : terms)
    if (t.mode.size() != n) throw std::invalid_argument("trig_polynomial: mode dimension mismatch");

  Observable g;
  g.dim_ = n;
  g.eval_ = [terms](const Vec& I, const Vec& theta) {
    double v = 0.0;
    for (const TrigTerm& t : terms) {
      const double phase = t.mode.cast<double>().dot(theta);
      if (!t.re.empty()) v += t.re(I) * std::cos(phase);
      if (!t.im.empty()) v += t.im(I) * std::sin(phase);
    }
    return v;
  };
  g.fourier_ = [terms](const Vec& I, const ModeVec& mode) {
    Complex c(0.0, 0.0);
    for (const TrigTerm& t : terms) {
      const bool zero_mode = t.mode.isZero();
      if (zero_mode) {
        if (mode.isZero() && !t.re.empty()) c += t.re(I);
        continue;
      }
      const double re = t.re.empty() ? 0.0 : t.re(I);
      const double im = t.im.empty() ? 0.0 : t.im(I);
      if (mode == t.mode) c += Complex(re / 2.0, -im / 2.0);
      if (mode == ModeVec(-t.mode)) c += Complex(re / 2.0, im / 2.0);
    }
    return c;
  };

  double bound = 0.0;
  std::vector<ModeVec> support;
  auto push_unique = [&support](const ModeVec& m) {
    if (std::find(support.begin(), support.end(), m) == support.end()) support.push_back(m);
  };
  for (const TrigTerm& t : terms) {
    bound += t.re.bound_on(domain) + t.im.bound_on(domain);
    push_unique(t.mode);
    if (!t.mode.isZero()) push_unique(ModeVec(-t.mode));
  }
  g.bound_ = bound;
  g.mode_support_ = std::move(support);
  return g;
}

Observable Observable::from_callable(int dim, EvalFn eval, double bound, FourierFn fourier) {
  Observable g;
  g.dim_ = dim;
  g.eval_ = std::move(eval);
  g.bound_ = bound;
  g.fourier_ = std::move(fourier);
  return g;
}

}  // namespace ensflow
