#include <doctest.h>

#include <cmath>

#include "ensflow/spectral.hpp"
#include "fixtures.hpp"

using namespace ensflow;
using namespace fixtures;

TEST_CASE("mode sets are closed under negation with a fixed order") {
  const ModeSet cube = ModeSet::cube(2, 2);
  CHECK(cube.size() == 25);
  for (const ModeVec& n : cube.modes) {
    bool found = false;
    for (const ModeVec& m : cube.modes) found = found || m == ModeVec(-n);
    CHECK(found);
  }
  const ModeSet support = ModeSet::from_support({mode1(3)});
  CHECK(support.size() == 2);
}

TEST_CASE("trig polynomial coefficients match orthogonality") {
  const Observable g = d1_observable();  // I^2 + I cos(theta)
  const Vec I = vec1(0.37);
  CHECK(std::abs(g.fourier(I, mode1(0)) - Complex(0.37 * 0.37, 0.0)) <= 1e-15);
  CHECK(std::abs(g.fourier(I, mode1(1)) - Complex(0.37 / 2.0, 0.0)) <= 1e-15);
  CHECK(std::abs(g.fourier(I, mode1(-1)) - Complex(0.37 / 2.0, 0.0)) <= 1e-15);
  CHECK(std::abs(g.fourier(I, mode1(2))) == 0.0);

  // theta-independent observable: only the zero mode survives.
  const Observable flat = Observable::trig_polynomial(
      {TrigTerm{mode1(0), Polynomial{{Monomial{2.5, mode1(0)}}}, {}}}, d1_domain());
  CHECK(std::abs(flat.fourier(I, mode1(0)) - Complex(2.5, 0.0)) <= 1e-15);
  CHECK(std::abs(flat.fourier(I, mode1(1))) == 0.0);
}

TEST_CASE("quadrature coefficients agree with declared ones") {
  Rng rng(4242);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<TrigTerm> terms;
    for (int mode = 0; mode <= 3; ++mode) {
      Polynomial re{{Monomial{rng.uniform(-1.0, 1.0), mode1(0)},
                     Monomial{rng.uniform(-1.0, 1.0), mode1(1)}}};
      Polynomial im{{Monomial{rng.uniform(-1.0, 1.0), mode1(mode == 0 ? 0 : 2)}}};
      terms.push_back(TrigTerm{mode1(mode), re, mode == 0 ? Polynomial{} : im});
    }
    const Observable g = Observable::trig_polynomial(terms, d1_domain());
    const Vec I = vec1(rng.uniform(0.1, 0.9));
    for (int n = -4; n <= 4; ++n) {
      const Complex declared = g.fourier(I, mode1(n));
      const Complex quad = fourier_coefficient_quadrature(g, I, mode1(n));
      CHECK(std::abs(declared - quad) <= 1e-10);
      // Conjugate symmetry of the real observable.
      CHECK(std::abs(declared - std::conj(g.fourier(I, mode1(-n)))) <= 1e-15);
    }
  }
}

TEST_CASE("angle average is the zero mode") {
  const Observable g = d1_observable();
  CHECK(angle_average(g, vec1(0.6)) == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(angle_average(cos_observable(), vec1(0.5)) == 0.0);
  const Observable seven = Observable::trig_polynomial(
      {TrigTerm{mode1(0), Polynomial::constant(7.0, 1), {}}}, d1_domain());
  CHECK(angle_average(seven, vec1(0.3)) == 7.0);
}

TEST_CASE("parseval residual vanishes for resolved trig polynomials") {
  CHECK(parseval_residual(cos_observable(), vec1(0.5), ModeSet::cube(1, 1)) <= 1e-12);
  const Observable c = Observable::trig_polynomial(
      {TrigTerm{mode1(0), Polynomial::constant(1.3, 1), {}}}, d1_domain());
  CHECK(parseval_residual(c, vec1(0.5), ModeSet::cube(1, 1)) <= 1e-12);

  const Observable g = d1_observable();
  CHECK(parseval_residual(g, vec1(0.4), ModeSet::from_support(*g.mode_support())) <= 1e-10);

  // Smooth non-polynomial observable: the residual decays geometrically in
  // the cutoff (coefficients of exp(cos) are modified Bessel values).
  const Observable smooth = Observable::from_callable(
      1, [](const Vec&, const Vec& theta) { return std::exp(std::cos(theta[0])); },
      std::exp(1.0));
  const double r2 = parseval_residual(smooth, vec1(0.5), ModeSet::cube(1, 2));
  const double r4 = parseval_residual(smooth, vec1(0.5), ModeSet::cube(1, 4));
  const double r8 = parseval_residual(smooth, vec1(0.5), ModeSet::cube(1, 8));
  CHECK(r4 <= r2 / 2.0);
  CHECK(r8 <= r4 / 2.0);
  CHECK(r8 <= 1e-10);
}

TEST_CASE("expectation at t = 0 reconstructs the direct integral") {
  const FlowContext ctx = d1_context();
  const Observable g = d1_observable();
  for (const InitialDensity& f0 : {d1_density_uniform(), d1_density_tilted()}) {
    const SpectralSetup setup = SpectralSetup::make(g, f0);
    const double fourier = expectation_fourier(g, f0, 0.0, ctx, setup.modes, setup.quad);

    // Direct 2n-dimensional quadrature of int G f0.
    double direct = 0.0;
    AngleGrid grid{1, 256};
    for (std::size_t q = 0; q < setup.quad.size(); ++q) {
      const Vec& I = setup.quad.nodes[q];
      double fiber = 0.0;
      grid.for_each([&](const Vec& theta) { fiber += g(I, theta) * f0(I, theta); });
      direct += setup.quad.weights[q] * fiber * grid.weight();
    }
    CHECK(std::abs(fourier - direct) <= 1e-8);
  }
}

TEST_CASE("angle-uniform density kills oscillating observables") {
  const FlowContext ctx = d1_context();
  const InitialDensity f0 = d1_density_uniform();
  const Observable g = cos_observable();
  const SpectralSetup setup = SpectralSetup::make(g, f0);
  for (double t : {0.0, 0.2, 0.5, 1.8, 7.3})
    CHECK(std::abs(expectation_fourier(g, f0, t, ctx, setup.modes, setup.quad)) <= 1e-12);
}

TEST_CASE("theta-independent observables follow the action pushforward") {
  const FlowContext ctx = d1_context();
  const InitialDensity f0 = d1_density_tilted();
  const Observable g = Observable::trig_polynomial(
      {TrigTerm{mode1(0), Polynomial{{Monomial{1.0, mode1(2)}}}, {}}},
      ActionDomain(vec1(0.0), vec1(1.1)));
  const SpectralSetup setup = SpectralSetup::make(g, f0);
  for (double t : {0.0, 0.4, 0.85, 3.3}) {
    const double expect = expectation_fourier(g, f0, t, ctx, setup.modes, setup.quad);
    const Vec offset = ctx.offset(segment_index(t, ctx.schedule()).segment);
    double direct = 0.0;
    for (std::size_t q = 0; q < setup.quad.size(); ++q) {
      const Vec I = setup.quad.nodes[q] + offset;
      direct += setup.quad.weights[q] * f0.action_marginal(setup.quad.nodes[q]) * I[0] * I[0];
    }
    CHECK(std::abs(expect - direct) <= 1e-8);
  }
}

TEST_CASE("coefficient continuity in the action variable") {
  // Finite-difference modulus of continuity stays bounded under refinement
  // (registry coefficients are polynomial in I).
  const Observable g = d1_observable();
  const Vec offset = vec1(0.1);
  double previous = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int points = 16 << level;
    double max_slope = 0.0;
    for (int i = 0; i < points; ++i) {
      const double h = 0.6 / points;
      const double a = 0.2 + i * h;
      const double slope =
          std::abs(g.fourier(vec1(a + h) + offset, mode1(1)) -
                   g.fourier(vec1(a) + offset, mode1(1))) /
          h;
      max_slope = std::max(max_slope, slope);
    }
    if (level > 0) CHECK(max_slope <= 2.0 * previous + 1e-9);
    previous = max_slope;
  }
  CHECK(previous <= 1.0);  // d/dI (I/2) = 1/2 plus slack
}

TEST_CASE("summability bound stabilizes at the declared support") {
  const InitialDensity f0 = d1_density_tilted();
  const Observable g = d1_observable();
  const ActionQuadrature quad = tensor_gauss_legendre(f0.support(), 32);
  const double b1 = summability_bound(g, f0, ModeSet::cube(1, 1), quad);
  const double b2 = summability_bound(g, f0, ModeSet::cube(1, 2), quad);
  const double b4 = summability_bound(g, f0, ModeSet::cube(1, 4), quad);
  CHECK(b1 > 0.0);
  CHECK(std::abs(b2 - b1) <= 1e-14);  // finitely many nonzero terms
  CHECK(std::abs(b4 - b2) <= 1e-14);

  // |G^| is capped by the bound, so the sum is at most bound * sum |f0^|.
  double fhat_sum = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q)
    for (const ModeVec& n : ModeSet::cube(1, 1).modes)
      fhat_sum += quad.weights[q] * std::abs(f0.fourier(quad.nodes[q], n));
  CHECK(b1 <= g.bound() * fhat_sum + 1e-12);

  // Smooth pair through the quadrature fallback: the tail beyond cutoff 16 is
  // negligible (Bessel-type coefficient decay).
  const InitialDensity smooth = InitialDensity::from_callables(
      d1_support(),
      [](const Vec& I, const Vec& theta) {
        const double rho = (I[0] >= 0.2 && I[0] <= 0.8) ? 1.0 / 0.6 : 0.0;
        return rho * std::exp(std::cos(theta[0])) / (kTwoPi * 1.2660658777520083);
      },
      [](const Vec& I) { return (I[0] >= 0.2 && I[0] <= 0.8) ? 1.0 / 0.6 : 0.0; },
      [](Rng&) -> PhasePoint { throw std::logic_error("sampler unused"); });
  const Observable wave = Observable::from_callable(
      1, [](const Vec&, const Vec& theta) { return std::exp(std::sin(theta[0])); },
      std::exp(1.0));
  const ActionQuadrature small_quad = tensor_gauss_legendre(f0.support(), 8);
  const double t16 = summability_bound(wave, smooth, ModeSet::cube(1, 16), small_quad);
  const double t32 = summability_bound(wave, smooth, ModeSet::cube(1, 32), small_quad);
  CHECK(std::abs(t32 - t16) <= 1e-8);
}

TEST_CASE("imaginary residue guard trips on broken symmetry") {
  // A lone +1 mode with no conjugate partner, injected through a callable.
  const Observable lopsided = Observable::from_callable(
      1, [](const Vec&, const Vec& theta) { return std::cos(theta[0]); }, 1.0,
      [](const Vec&, const ModeVec& n) {
        return n[0] == 1 ? Complex(0.5, 0.0) : Complex(0.0, 0.0);
      });
  const FlowContext ctx = d1_context();
  const InitialDensity f0 = d1_density_tilted();
  const ActionQuadrature quad = tensor_gauss_legendre(f0.support(), 16);
  CHECK_THROWS_AS(
      expectation_fourier(lopsided, f0, 0.4, ctx, ModeSet::cube(1, 1), quad, 1e-12),
      std::runtime_error);
}
