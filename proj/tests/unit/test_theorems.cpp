#include <doctest.h>

#include <cmath>

#include "ensflow/theorems.hpp"
#include "fixtures.hpp"

using namespace ensflow;
using namespace fixtures;

TEST_CASE("theoretical limit of the desk instance") {
  const FlowContext ctx = d1_context();
  const Observable g = d1_observable();
  const ActionQuadrature quad = tensor_gauss_legendre(d1_support(), 32);

  // 0.6 E[I^2] + 0.4 E[(I+0.1)^2] with uniform moments E[I] = 1/2, E[I^2] = 0.28.
  for (const InitialDensity& f0 : {d1_density_uniform(), d1_density_tilted()})
    CHECK(theoretical_limit(g, f0, ctx, quad) == doctest::Approx(0.324).epsilon(1e-12));

  // Jump-free: the classical averaged ensemble <G-bar>_0.
  const FlowContext free(TransitionSchedule::jump_free(1.0, 1), d1_field());
  CHECK(theoretical_limit(g, d1_density_uniform(), free, quad) ==
        doctest::Approx(0.28).epsilon(1e-12));

  // Oscillatory observables average to zero fiberwise.
  CHECK(std::abs(theoretical_limit(cos_observable(), d1_density_tilted(), ctx, quad)) <= 1e-14);
}

TEST_CASE("theoretical limit only sees the angle average") {
  const FlowContext ctx = d1_context();
  const ActionQuadrature quad = tensor_gauss_legendre(d1_support(), 32);
  const Observable g = d1_observable();
  const Observable lifted = Observable::trig_polynomial(
      {TrigTerm{mode1(0), Polynomial{{Monomial{1.0, mode1(2)}}}, {}}},
      ActionDomain(vec1(0.0), vec1(1.1)));
  const double a = theoretical_limit(g, d1_density_tilted(), ctx, quad);
  const double b = theoretical_limit(lifted, d1_density_tilted(), ctx, quad);
  CHECK(std::abs(a - b) <= 1e-10);
}

TEST_CASE("theoretical limit is invariant under cyclic relabeling") {
  // Start the period just after the first jump: segments (0.4, 0.3, 0.3),
  // offsets (0, -0.1, -0.1) relative to the pushed-forward base action. The
  // period-closing jump lands on tau_0, so the relabeled schedule fails the
  // zero-net report by construction; the flow formulas still apply.
  const TransitionSchedule relabeled{1.0, {0.0, 0.4, 0.7}, {vec1(0.0), vec1(-0.1), vec1(0.0)}};
  CHECK_FALSE(validate_schedule(relabeled).all_passed());
  const FlowContext ctx2(relabeled, d1_field());
  const InitialDensity pushed =
      InitialDensity::uniform_box(ActionDomain(vec1(0.3), vec1(0.9)));
  const ActionQuadrature quad2 = tensor_gauss_legendre(pushed.support(), 32);

  const double relabeled_limit = theoretical_limit(d1_observable(), pushed, ctx2, quad2);
  CHECK(std::abs(relabeled_limit - 0.324) <= 1e-10);
}

TEST_CASE("theorem 4.1 driver verdicts") {
  const FlowContext ctx = d1_context();
  const InitialDensity f0 = d1_density_tilted();

  VerifyOptions opts;
  opts.horizons = {10, 20, 40, 80, 160, 200};
  opts.backend = Backend::kFourier;
  const LimitReport report = verify_theorem_4_1(d1_observable(), f0, ctx, opts);
  CHECK(report.passed);
  CHECK(report.hypotheses_ok);
  CHECK(report.theoretical_limit == doctest::Approx(0.324).epsilon(1e-10));
  CHECK(report.final_error <= 5e-3);

  // theta-independent observable: converged at the first period already.
  const Observable flat = Observable::trig_polynomial(
      {TrigTerm{mode1(0), Polynomial{{Monomial{1.0, mode1(2)}}}, {}}},
      ActionDomain(vec1(0.0), vec1(1.1)));
  VerifyOptions quick = opts;
  quick.horizons = {1, 2, 4};
  const LimitReport exact = verify_theorem_4_1(flat, f0, ctx, quick);
  CHECK(exact.passed);
  CHECK(exact.final_error <= 1e-8);
  CHECK(exact.runs.front().curve.front().abs_error <= 1e-8);

  // Negative control: constant frequency has critical points everywhere and
  // the frozen cosine bias never averages out.
  const FlowContext frozen(d1_schedule(), FrequencyField::constant(vec1(0.0)));
  const LimitReport control = verify_theorem_4_1(d1_observable(), f0, frozen, opts);
  CHECK_FALSE(control.passed);
  CHECK_FALSE(control.hypotheses_ok);
  CHECK(control.final_error > 0.1);
}

TEST_CASE("theorem 4.2 family driver") {
  const FlowContext ctx = d1_context();
  const InitialDensity f0 = d1_density_tilted();
  const ActionDomain inflated(vec1(0.0), vec1(1.1));

  std::vector<std::pair<std::string, Observable>> family;
  family.emplace_back("one", Observable::trig_polynomial(
                                 {TrigTerm{mode1(0), Polynomial::constant(1.0, 1), {}}}, inflated));
  family.emplace_back("action", Observable::trig_polynomial(
                                    {TrigTerm{mode1(0), Polynomial{{Monomial{1.0, mode1(1)}}}, {}}},
                                    inflated));
  family.emplace_back("cos", Observable::trig_polynomial(
                                 {TrigTerm{mode1(1), Polynomial::constant(1.0, 1), {}}}, inflated));

  VerifyOptions opts;
  opts.horizons = {10, 40, 160, 200};
  opts.backend = Backend::kFourier;
  const FamilyReport report = verify_theorem_4_2(f0, ctx, family, opts);
  CHECK(report.all_passed);
  REQUIRE(report.reports.size() == 3);
  // Total mass converges trivially; the pure harmonic mixes toward zero.
  CHECK(report.reports[0].second.final_error <= 1e-10);
  CHECK(report.reports[2].second.theoretical_limit == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.reports[2].second.final_error <= 5e-3);
}

TEST_CASE("riemann-lebesgue demonstrator with a closed-form integral") {
  // Jump-free schedule, amplitude 1 on the support box, phase 2 pi I t:
  // M(t) = (exp(i 2 pi 0.8 t) - exp(i 2 pi 0.2 t)) / (i 2 pi t).
  const FlowContext free(TransitionSchedule::jump_free(1.0, 1), d1_field());
  const ActionQuadrature quad = tensor_gauss_legendre(d1_support(), 64);
  const std::vector<std::function<Complex(const Vec&)>> amplitude = {
      [](const Vec&) { return Complex(1.0, 0.0); }};

  // Spot check M(t) itself through the same quadrature the demo uses.
  for (double t : {1.3, 4.7}) {
    Complex m(0.0, 0.0);
    for (std::size_t q = 0; q < quad.size(); ++q)
      m += quad.weights[q] * std::exp(Complex(0.0, kTwoPi * quad.nodes[q][0] * t));
    const Complex closed = (std::exp(Complex(0.0, kTwoPi * 0.8 * t)) -
                            std::exp(Complex(0.0, kTwoPi * 0.2 * t))) /
                           Complex(0.0, kTwoPi * t);
    CHECK(std::abs(m - closed) <= 1e-10);
  }

  const DecayTable table =
      rl_time_average_demo(amplitude, mode1(1), free, quad, {20, 100, 200});
  CHECK(table.rows.size() == 3);
  CHECK(table.rows[1].value <= 1e-2);                // l = 100
  CHECK(table.rows[2].value < table.rows[0].value);  // decay

  // Zero amplitude gives the zero function.
  const std::vector<std::function<Complex(const Vec&)>> zero = {
      [](const Vec&) { return Complex(0.0, 0.0); }};
  const DecayTable nil = rl_time_average_demo(zero, mode1(1), free, quad, {10});
  CHECK(nil.rows[0].value == 0.0);
}

TEST_CASE("riemann-lebesgue demonstrator on the desk amplitudes") {
  const FlowContext ctx = d1_context();
  const InitialDensity f0 = d1_density_tilted();
  const Observable g = d1_observable();
  const ActionQuadrature quad = tensor_gauss_legendre(d1_support(), 32);

  std::vector<std::function<Complex(const Vec&)>> amplitudes;
  for (int k = 0; k < ctx.schedule().count(); ++k) {
    const Vec offset = ctx.offset(k);
    amplitudes.push_back([&g, &f0, offset](const Vec& I) {
      return g.fourier(I + offset, mode1(1)) * f0.fourier(I, mode1(-1));
    });
  }
  const DecayTable table = rl_time_average_demo(amplitudes, mode1(1), ctx, quad, {20, 200});
  CHECK(table.rows[1].value < table.rows[0].value);
  CHECK(table.rows[1].value <= table.rows[0].value / 5.0);
}

TEST_CASE("bounded decay averages") {
  // M(t) = 1/(1+t): the running average is log(1+l)/l.
  const DecayTable harmonic = bounded_decay_average_demo(
      [](double t) { return 1.0 / (1.0 + t); }, {10, 100, 1000});
  for (std::size_t i = 0; i < harmonic.rows.size(); ++i) {
    const double l = harmonic.rows[i].horizon;
    CHECK(harmonic.rows[i].value == doctest::Approx(std::log1p(l) / l).epsilon(1e-10));
  }
  CHECK(harmonic.rows.back().value < harmonic.rows.front().value);

  const DecayTable zero = bounded_decay_average_demo([](double) { return 0.0; }, {10});
  CHECK(zero.rows[0].value == 0.0);

  // Oscillatory decaying M: compare against a fine Simpson oracle.
  auto m = [](double t) { return std::sin(t) / (1.0 + t); };
  const DecayTable osc = bounded_decay_average_demo(m, {50, 400});
  for (const DecayRow& row : osc.rows) {
    const int steps = static_cast<int>(row.horizon) * 64;
    double simpson = 0.0;
    const double h = row.horizon / steps;
    for (int i = 0; i < steps; ++i) {
      const double a = i * h;
      simpson += h / 6.0 * (m(a) + 4.0 * m(a + h / 2.0) + m(a + h));
    }
    CHECK(row.value == doctest::Approx(std::abs(simpson) / row.horizon).epsilon(1e-8));
  }
  CHECK(osc.rows.back().value < osc.rows.front().value);
}
