#pragma once

#include <cstdint>
#include <vector>

#include "ensflow/frequency.hpp"
#include "ensflow/schedule.hpp"
#include "ensflow/types.hpp"

namespace ensflow {

/// Position of a time instant relative to the schedule: t sits in the
/// period_count-th period, inside segment [tau_k, tau_{k+1}).
struct SegmentIndex {
  std::int64_t period_count = 0;  // m = floor(t / T), after boundary snapping
  int segment = 0;                // k with tau_k <= t mod T < tau_{k+1}
  double in_period = 0.0;         // t - m T, snapped onto a jump time when within 1e-12 T
};

/// Immutable schedule + frequency bundle with the cumulative jump sums
/// S_k = sum_{i<=k} jumps[i] cached per segment.
class FlowContext {
 public:
  FlowContext(TransitionSchedule schedule, FrequencyField field);

  const TransitionSchedule& schedule() const { return schedule_; }
  const FrequencyField& field() const { return field_; }
  const std::vector<Vec>& offsets() const { return offsets_; }
  const Vec& offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
  int dim() const { return schedule_.dim(); }
  double period() const { return schedule_.period; }
  /// Length tau_{k+1} - tau_k, with tau_p meaning T.
  double segment_length(int k) const;

 private:
  TransitionSchedule schedule_;
  FrequencyField field_;
  std::vector<Vec> offsets_;
};

/// Segment locator with the left-closed convention: at t mod T = tau_k the
/// jump at tau_k has already been applied. Times within 1e-12 T of a jump
/// time (or of the period boundary) are snapped onto it first.
SegmentIndex segment_index(double t, const TransitionSchedule& schedule);

/// Action component I0 + S_{k(t)}; exactly T-periodic in t.
Vec action_at(const Vec& I0, double t, const FlowContext& ctx);

/// Per-period angle shift sum_{i<p} (tau_{i+1} - tau_i) omega(I + S_i).
Vec period_angle_shift(const Vec& I, const FlowContext& ctx);

/// Mean frequency over one period: period_angle_shift / T.
Vec average_frequency(const Vec& I, const FlowContext& ctx);

/// Gradient counterpart of period_angle_shift.
Mat period_angle_shift_gradient(const Vec& I, const FlowContext& ctx);

/// Angle displacement of the flow started at action I0, reduced to [0, 2*pi)
/// componentwise. The m-fold period shift is reduced with the split-product
/// scheme so period counts up to ~1e6 keep full angle precision.
Vec angle_drift(const Vec& I0, double t, const FlowContext& ctx);

/// The one-parameter flow: (I0, theta0) -> (I0 + S_k, theta0 + drift).
PhasePoint advance(const PhasePoint& x, double t, const FlowContext& ctx);

/// Inverse flow: subtracts S_k from the action and the drift recomputed at
/// the recovered initial action from the angle.
PhasePoint invert(const PhasePoint& x, double t, const FlowContext& ctx);

/// Central-difference determinant of the full 2n x 2n Jacobian of the flow
/// at x; analytically 1. Throws if t mod T sits within 10 h of a jump time,
/// where the map is not differentiable.
double jacobian_determinant_probe(const PhasePoint& x, double t, const FlowContext& ctx,
                                  double step_scale = 1e-6);

}  // namespace ensflow
