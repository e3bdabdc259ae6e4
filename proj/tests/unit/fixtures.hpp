#pragma once

#include "ensflow/almostperiodic.hpp"
#include "ensflow/theorems.hpp"

namespace fixtures {

using namespace ensflow;

inline Vec vec1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

inline ModeVec mode1(int n) {
  ModeVec m(1);
  m[0] = n;
  return m;
}

/// Desk instance: T = 1, jumps +0.1 at 0.3 and -0.1 at 0.7, omega = 2 pi I.
inline TransitionSchedule d1_schedule() {
  return TransitionSchedule{1.0, {0.0, 0.3, 0.7}, {vec1(0.0), vec1(0.1), vec1(-0.1)}};
}

inline FrequencyField d1_field() { return FrequencyField::linear1d(kTwoPi, 0.0); }

inline FlowContext d1_context() { return FlowContext(d1_schedule(), d1_field()); }

inline ActionDomain d1_domain() { return ActionDomain(vec1(0.0), vec1(1.0)); }

inline ActionDomain d1_support() { return ActionDomain(vec1(0.2), vec1(0.8)); }

inline InitialDensity d1_density_uniform() { return InitialDensity::uniform_box(d1_support()); }

/// Same action marginal with the angle marginal tilted to
/// (1 + 0.6 cos + 0.6 sin)/2pi, so the first torus modes carry weight and the
/// mixing error decays like 1/l without accidental zeros (a pure cosine tilt
/// telescopes against the I cos(theta) term of G and vanishes whenever l is a
/// multiple of five on this support box).
inline InitialDensity d1_density_tilted() {
  return InitialDensity::uniform_box(d1_support(), AngleProfile(vec1(0.6), vec1(0.6)));
}

/// G = I^2 + I cos(theta) over the inflated D1 domain.
inline Observable d1_observable() {
  const ActionDomain inflated(vec1(0.0), vec1(1.1));
  Polynomial i_squared{{Monomial{1.0, mode1(2)}}};
  Polynomial i_linear{{Monomial{1.0, mode1(1)}}};
  return Observable::trig_polynomial(
      {TrigTerm{mode1(0), i_squared, {}}, TrigTerm{mode1(1), i_linear, {}}}, inflated);
}

inline Observable cos_observable() {
  const ActionDomain inflated(vec1(-2.0), vec1(2.0));
  return Observable::trig_polynomial({TrigTerm{mode1(1), Polynomial::constant(1.0, 1), {}}},
                                     inflated);
}

inline double golden_rotation() { return 0.6180339887498949; }

/// Desk instance for the jump-sequence system: amplitude 0.1, golden rotation.
inline JumpSequence d2_sequence() { return JumpSequence::quasiperiodic(vec1(0.1), golden_rotation()); }

/// Two-dimensional instance with a diagonal affine frequency.
inline TransitionSchedule d2d_schedule() {
  Vec zero = Vec::Zero(2);
  Vec j1(2), j2(2);
  j1 << 0.1, -0.05;
  j2 << -0.1, 0.05;
  return TransitionSchedule{1.0, {0.0, 0.3, 0.7}, {zero, j1, j2}};
}

inline FrequencyField d2d_field() {
  Mat A = Mat::Zero(2, 2);
  A(0, 0) = kTwoPi;
  A(1, 1) = 1.7 * kTwoPi;
  Vec b(2);
  b << 0.3 * kTwoPi, 0.1 * kTwoPi;
  return FrequencyField::linear(A, b);
}

inline FlowContext d2d_context() { return FlowContext(d2d_schedule(), d2d_field()); }

inline ActionDomain d2d_support() {
  Vec lo(2), hi(2);
  lo << 0.2, 0.3;
  hi << 0.8, 0.7;
  return ActionDomain(lo, hi);
}

}  // namespace fixtures
