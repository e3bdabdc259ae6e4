#include "ensflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ensflow {

ModeSet ModeSet::cube(int dim, int cutoff) {
  ModeSet set;
  ModeVec n = ModeVec::Constant(dim, -cutoff);
  while (true) {
    set.modes.push_back(n);
    int d = dim - 1;
    while (d >= 0 && ++n[d] > cutoff) n[d--] = -cutoff;
    if (d < 0) break;
  }
  return set;
}

ModeSet ModeSet::from_support(const std::vector<ModeVec>& support) {
  ModeSet set;
  auto push_unique = [&set](const ModeVec& m) {
    if (std::find(set.modes.begin(), set.modes.end(), m) == set.modes.end()) set.modes.push_back(m);
  };
  for (const ModeVec& m : support) {
    push_unique(m);
    push_unique(ModeVec(-m));
  }
  return set;
}

ModeSet ModeSet::for_observable(const Observable& g, int fallback_cutoff) {
  if (g.mode_support()) return from_support(*g.mode_support());
  return cube(g.dim(), fallback_cutoff);
}

Complex fourier_coefficient(const Observable& g, const Vec& I, const ModeVec& n) {
  return g.fourier(I, n);
}

Complex fourier_coefficient_quadrature(const Observable& g, const Vec& I, const ModeVec& n,
                                       int points_per_dim) {
  const int nmax = n.size() ? n.cwiseAbs().maxCoeff() : 0;
  const int pts = points_per_dim > 0 ? points_per_dim : std::max(64, 8 * nmax);
  AngleGrid grid{g.dim(), pts};
  Complex acc(0.0, 0.0);
  grid.for_each([&](const Vec& theta) {
    acc += g(I, theta) * std::exp(Complex(0.0, -n.cast<double>().dot(theta)));
  });
  return acc * grid.weight() / std::pow(kTwoPi, g.dim());
}

double angle_average(const Observable& g, const Vec& I) {
  const Complex c = g.fourier(I, ModeVec::Zero(I.size()));
  if (std::abs(c.imag()) > 1e-12)
    throw std::runtime_error("angle_average: nonreal zero-mode coefficient");
  return c.real();
}

double parseval_residual(const Observable& g, const Vec& I, const ModeSet& modes,
                         int grid_points_per_dim) {
  AngleGrid grid{g.dim(), grid_points_per_dim};
  double power = 0.0;
  grid.for_each([&](const Vec& theta) {
    const double v = g(I, theta);
    power += v * v;
  });
  power *= grid.weight() / std::pow(kTwoPi, g.dim());

  double series = 0.0;
  for (const ModeVec& n : modes.modes) series += std::norm(g.fourier(I, n));
  return std::abs(power - series);
}

double expectation_from_phase(const Observable& g, const InitialDensity& f0, const ModeSet& modes,
                              const ActionQuadrature& quad, const Vec& offset,
                              const std::function<Vec(std::size_t, const Vec&)>& phase_at_node,
                              double imag_tol) {
  Complex acc(0.0, 0.0);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec& I = quad.nodes[q];
    const Vec phase = phase_at_node(q, I);
    Complex node(0.0, 0.0);
    for (const ModeVec& n : modes.modes) {
      const Complex fhat = f0.fourier(I, ModeVec(-n));
      if (fhat == Complex(0.0, 0.0)) continue;
      const Complex ghat = g.fourier(I + offset, n);
      if (ghat == Complex(0.0, 0.0)) continue;
      node += ghat * fhat * std::exp(Complex(0.0, n.cast<double>().dot(phase)));
    }
    acc += quad.weights[q] * node;
  }
  acc *= std::pow(kTwoPi, f0.dim());
  if (std::abs(acc.imag()) > imag_tol)
    throw std::runtime_error("expectation: imaginary residue above tolerance");
  return acc.real();
}

double expectation_fourier(const Observable& g, const InitialDensity& f0, double t,
                           const FlowContext& ctx, const ModeSet& modes,
                           const ActionQuadrature& quad, double imag_tol) {
  const SegmentIndex seg = segment_index(t, ctx.schedule());
  const Vec& offset = ctx.offset(seg.segment);
  return expectation_from_phase(
      g, f0, modes, quad, offset,
      [&](std::size_t, const Vec& I) { return angle_drift(I, t, ctx); }, imag_tol);
}

double summability_bound(const Observable& g, const InitialDensity& f0, const ModeSet& modes,
                         const ActionQuadrature& quad) {
  double acc = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec& I = quad.nodes[q];
    double node = 0.0;
    for (const ModeVec& n : modes.modes)
      node += std::abs(g.fourier(I, n)) * std::abs(f0.fourier(I, ModeVec(-n)));
    acc += quad.weights[q] * node;
  }
  return acc;
}

}  // namespace ensflow
