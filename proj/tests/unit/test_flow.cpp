#include <doctest.h>

#include <cmath>

#include "ensflow/flow.hpp"
#include "ensflow/rng.hpp"
#include "fixtures.hpp"

using namespace ensflow;
using namespace fixtures;

TEST_CASE("segment index with the left-closed convention") {
  const TransitionSchedule s = d1_schedule();

  SegmentIndex seg = segment_index(0.0, s);
  CHECK(seg.period_count == 0);
  CHECK(seg.segment == 0);

  seg = segment_index(1.3, s);
  CHECK(seg.period_count == 1);
  CHECK(seg.segment == 1);

  // Just below a jump time: strict inequality at the right endpoint.
  seg = segment_index(0.6999999999, s);
  CHECK(seg.period_count == 0);
  CHECK(seg.segment == 1);

  // Within the snap window the jump has been applied.
  seg = segment_index(0.7 - 1e-15, s);
  CHECK(seg.segment == 2);
  seg = segment_index(3.0 - 1e-14, s);
  CHECK(seg.period_count == 3);
  CHECK(seg.segment == 0);
}

TEST_CASE("action component follows the cumulative jumps") {
  const FlowContext ctx = d1_context();
  CHECK(action_at(vec1(0.5), 0.5, ctx)[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(action_at(vec1(0.5), 0.9, ctx)[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(action_at(vec1(0.5), 0.0, ctx)[0] == 0.5);

  // Exact periodicity: the offset lookup depends only on t mod T.
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(0.0, 50.0);
    const Vec I0 = vec1(rng.uniform(0.2, 0.8));
    CHECK(action_at(I0, t, ctx)[0] == action_at(I0, t + ctx.period(), ctx)[0]);
  }
}

TEST_CASE("period angle shift and average frequency") {
  const FlowContext ctx = d1_context();
  // 0.3*2pi*0.5 + 0.4*2pi*0.6 + 0.3*2pi*0.5 = 1.08 pi
  CHECK(period_angle_shift(vec1(0.5), ctx)[0] == doctest::Approx(1.08 * M_PI).epsilon(1e-14));
  CHECK(average_frequency(vec1(0.5), ctx)[0] == doctest::Approx(1.08 * M_PI).epsilon(1e-14));

  // Symbolic expansion: omega-bar_T(I) = 2 pi I + 0.08 pi for the desk schedule.
  for (double I : {0.25, 0.3, 0.55, 0.71})
    CHECK(average_frequency(vec1(I), ctx)[0] ==
          doctest::Approx(kTwoPi * I + 0.08 * M_PI).epsilon(1e-14));

  // Jump-free reduction: T * omega(I).
  const FlowContext free(TransitionSchedule::jump_free(2.0, 1), d1_field());
  CHECK(period_angle_shift(vec1(0.4), free)[0] == doctest::Approx(2.0 * kTwoPi * 0.4));
  CHECK(average_frequency(vec1(0.4), free)[0] == doctest::Approx(kTwoPi * 0.4));

  const FlowContext zero(d1_schedule(), FrequencyField::constant(vec1(0.0)));
  CHECK(period_angle_shift(vec1(0.5), zero)[0] == 0.0);
}

TEST_CASE("period angle shift gradient") {
  const FlowContext ctx = d1_context();
  CHECK(period_angle_shift_gradient(vec1(0.5), ctx)(0, 0) == doctest::Approx(kTwoPi));

  const FlowContext flat(d1_schedule(), FrequencyField::constant(vec1(2.0)));
  CHECK(period_angle_shift_gradient(vec1(0.5), flat)(0, 0) == 0.0);

  // Central-difference probe of period_angle_shift.
  const double h = 1e-6;
  const double fd =
      (period_angle_shift(vec1(0.5 + h), ctx)[0] - period_angle_shift(vec1(0.5 - h), ctx)[0]) /
      (2.0 * h);
  CHECK(std::abs(fd - period_angle_shift_gradient(vec1(0.5), ctx)(0, 0)) /
            std::abs(fd) <=
        1e-6);

  // Gradient of the average frequency is the shift gradient over T.
  const double fd_avg =
      (average_frequency(vec1(0.5 + h), ctx)[0] - average_frequency(vec1(0.5 - h), ctx)[0]) /
      (2.0 * h);
  CHECK(std::abs(fd_avg - period_angle_shift_gradient(vec1(0.5), ctx)(0, 0) / ctx.period()) <=
        1e-6 * std::abs(fd_avg));
}

TEST_CASE("advance matches the hand-evaluated desk example") {
  const FlowContext ctx = d1_context();
  const PhasePoint start(vec1(0.5), vec1(0.0));

  const PhasePoint mid = advance(start, 0.5, ctx);
  CHECK(mid.action[0] == doctest::Approx(0.6).epsilon(1e-15));
  // 0.3*2pi*0.5 + 0.2*2pi*0.6
  CHECK(mid.angle[0] == doctest::Approx(0.9424777960769379 + 0.7539822368615503).epsilon(1e-14));

  const PhasePoint same = advance(start, 0.0, ctx);
  CHECK(same.action[0] == 0.5);
  CHECK(same.angle[0] == 0.0);

  // Whole periods: action returns, angle advances by m * Delta-theta_T.
  for (int m : {1, 3, 17}) {
    const PhasePoint later = advance(start, static_cast<double>(m), ctx);
    CHECK(later.action[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(circle_distance(later.angle[0], wrap_angle(m * 1.08 * M_PI)) <= 1e-12);
  }
}

TEST_CASE("invert undoes advance") {
  const FlowContext ctx = d1_context();

  const PhasePoint image(vec1(0.6), vec1(1.6964600329384882));
  const PhasePoint pre = invert(image, 0.5, ctx);
  CHECK(pre.action[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(circle_distance(pre.angle[0], 0.0) <= 1e-12);

  const PhasePoint still(vec1(0.37), vec1(2.5));
  const PhasePoint same = invert(still, 0.0, ctx);
  CHECK(same.action[0] == 0.37);
  CHECK(same.angle[0] == 2.5);

  Rng rng(314);
  for (int i = 0; i < 1000; ++i) {
    const PhasePoint x(vec1(rng.uniform(0.2, 0.8)), vec1(rng.uniform(0.0, kTwoPi)));
    const double t = rng.uniform(0.0, 100.0);
    const PhasePoint back = invert(advance(x, t, ctx), t, ctx);
    CHECK(std::abs(back.action[0] - x.action[0]) <= 1e-14);
    CHECK(circle_distance(back.angle[0], x.angle[0]) <= 1e-10);
  }
}

TEST_CASE("jump-free flow is the classical twist map") {
  const FlowContext free(TransitionSchedule::jump_free(1.0, 1), d1_field());
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const PhasePoint x(vec1(rng.uniform(0.05, 0.95)), vec1(rng.uniform(0.0, kTwoPi)));
    const double t = rng.uniform(0.0, 20.0);
    const PhasePoint y = advance(x, t, free);
    CHECK(y.action[0] == x.action[0]);
    CHECK(circle_distance(y.angle[0], wrap_angle(x.angle[0] + t * kTwoPi * x.action[0])) <= 1e-12);
  }
}

TEST_CASE("large period counts keep angle precision") {
  // Independent long-double oracle for (m * delta) mod 2 pi.
  Rng rng(59);
  for (int i = 0; i < 200; ++i) {
    const double m = std::floor(rng.uniform(1.0, 1.0e6));
    const double delta = rng.uniform(0.0, 12.0);
    const long double twopi = 6.283185307179586476925286766559L;
    const long double prod = static_cast<long double>(m) * static_cast<long double>(delta);
    long double r = std::fmod(prod, twopi);
    if (r < 0) r += twopi;
    CHECK(circle_distance(scaled_angle_mod_two_pi(m, delta), static_cast<double>(r)) <= 1e-10);
  }

  // The drift of a 1e6-period advance agrees with the closed form.
  const FlowContext ctx = d1_context();
  const double m = 1.0e6;
  const PhasePoint far = advance(PhasePoint(vec1(0.5), vec1(0.0)), m, ctx);
  const long double shift = 1.08L * 3.14159265358979323846264338328L;
  long double expected = std::fmod(static_cast<long double>(m) * shift,
                                   6.283185307179586476925286766559L);
  CHECK(circle_distance(far.angle[0], static_cast<double>(expected)) <= 1e-9);
}

TEST_CASE("volume preservation probe") {
  const FlowContext ctx = d1_context();
  Rng rng(77);
  for (int i = 0; i < 50; ++i) {
    const PhasePoint x(vec1(rng.uniform(0.2, 0.8)), vec1(rng.uniform(0.0, kTwoPi)));
    const double t = 0.31 + 0.05 * rng.uniform();  // interior of the second segment
    CHECK(jacobian_determinant_probe(x, t, ctx) == doctest::Approx(1.0).epsilon(1e-6));
  }

  // Two dimensional diagonal field: block-triangular Jacobian.
  const FlowContext ctx2 = d2d_context();
  Vec I(2), theta(2);
  I << 0.5, 0.45;
  theta << 1.0, 2.0;
  CHECK(jacobian_determinant_probe(PhasePoint(I, theta), 1.45, ctx2) ==
        doctest::Approx(1.0).epsilon(1e-6));

  // Probes next to a jump time are rejected.
  CHECK_THROWS_AS(jacobian_determinant_probe(PhasePoint(vec1(0.5), vec1(0.0)), 0.7 + 1e-9, ctx),
                  std::invalid_argument);
}
