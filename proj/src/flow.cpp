#include "ensflow/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace ensflow {

FlowContext::FlowContext(TransitionSchedule schedule, FrequencyField field)
    : schedule_(std::move(schedule)), field_(std::move(field)) {
  const auto& s = schedule_;
  if (s.times.empty() || s.times.size() != s.jumps.size() || !(s.period > 0.0))
    throw std::invalid_argument("FlowContext: malformed schedule");
  if (s.times.front() != 0.0)
    throw std::invalid_argument("FlowContext: tau_0 must be 0");
  for (std::size_t i = 1; i < s.times.size(); ++i)
    if (!(s.times[i - 1] < s.times[i]))
      throw std::invalid_argument("FlowContext: jump times must be strictly increasing");
  if (!(s.times.back() < s.period))
    throw std::invalid_argument("FlowContext: jump times must lie in [0, period)");

  offsets_.reserve(s.jumps.size());
  Vec acc = Vec::Zero(s.dim());
  for (const Vec& j : s.jumps) {
    if (j.size() != acc.size())
      throw std::invalid_argument("FlowContext: jump dimension mismatch");
    acc += j;
    offsets_.push_back(acc);
  }
}

double FlowContext::segment_length(int k) const {
  const auto& tau = schedule_.times;
  const double next = (k + 1 < static_cast<int>(tau.size())) ? tau[k + 1] : schedule_.period;
  return next - tau[static_cast<std::size_t>(k)];
}

SegmentIndex segment_index(double t, const TransitionSchedule& schedule) {
  const double T = schedule.period;
  const double snap = 1e-12 * T;
  std::int64_t m = static_cast<std::int64_t>(std::floor(t / T));
  double r = std::fma(static_cast<double>(-m), T, t);
  if (r < 0.0) {
    m -= 1;
    r = std::fma(static_cast<double>(-m), T, t);
  }
  if (r >= T - snap) {
    m += 1;
    r = 0.0;
  }
  for (double tau : schedule.times)
    if (std::abs(r - tau) <= snap) {
      r = tau;
      break;
    }
  int k = static_cast<int>(schedule.times.size()) - 1;
  while (k > 0 && schedule.times[static_cast<std::size_t>(k)] > r) --k;
  return SegmentIndex{m, k, r};
}

Vec action_at(const Vec& I0, double t, const FlowContext& ctx) {
  return I0 + ctx.offset(segment_index(t, ctx.schedule()).segment);
}

Vec period_angle_shift(const Vec& I, const FlowContext& ctx) {
  Vec shift = Vec::Zero(ctx.dim());
  for (int k = 0; k < ctx.schedule().count(); ++k)
    shift += ctx.segment_length(k) * ctx.field()(I + ctx.offset(k));
  return shift;
}

Vec average_frequency(const Vec& I, const FlowContext& ctx) {
  return period_angle_shift(I, ctx) / ctx.period();
}

Mat period_angle_shift_gradient(const Vec& I, const FlowContext& ctx) {
  Mat g = Mat::Zero(ctx.dim(), ctx.dim());
  for (int k = 0; k < ctx.schedule().count(); ++k)
    g += ctx.segment_length(k) * ctx.field().gradient(I + ctx.offset(k));
  return g;
}

Vec angle_drift(const Vec& I0, double t, const FlowContext& ctx) {
  const SegmentIndex seg = segment_index(t, ctx.schedule());
  Vec drift(ctx.dim());
  if (seg.period_count != 0) {
    const Vec shift = period_angle_shift(I0, ctx);
    for (Eigen::Index i = 0; i < drift.size(); ++i)
      drift[i] = scaled_angle_mod_two_pi(static_cast<double>(seg.period_count), shift[i]);
  } else {
    drift.setZero();
  }
  for (int i = 0; i < seg.segment; ++i)
    drift += ctx.segment_length(i) * ctx.field()(I0 + ctx.offset(i));
  const double elapsed = seg.in_period - ctx.schedule().times[static_cast<std::size_t>(seg.segment)];
  drift += elapsed * ctx.field()(I0 + ctx.offset(seg.segment));
  return wrap_angles(std::move(drift));
}

PhasePoint advance(const PhasePoint& x, double t, const FlowContext& ctx) {
  const SegmentIndex seg = segment_index(t, ctx.schedule());
  PhasePoint out;
  out.action = x.action + ctx.offset(seg.segment);
  out.angle = wrap_angles(x.angle + angle_drift(x.action, t, ctx));
  return out;
}

PhasePoint invert(const PhasePoint& x, double t, const FlowContext& ctx) {
  const SegmentIndex seg = segment_index(t, ctx.schedule());
  PhasePoint out;
  out.action = x.action - ctx.offset(seg.segment);
  out.angle = wrap_angles(x.angle - angle_drift(out.action, t, ctx));
  return out;
}

double jacobian_determinant_probe(const PhasePoint& x, double t, const FlowContext& ctx,
                                  double step_scale) {
  const int n = ctx.dim();
  const double scale =
      std::max(1.0, std::sqrt(x.action.squaredNorm() + x.angle.squaredNorm()));
  const double h = step_scale * scale;

  const SegmentIndex seg = segment_index(t, ctx.schedule());
  for (double tau : ctx.schedule().times)
    if (std::abs(seg.in_period - tau) < 10.0 * h)
      throw std::invalid_argument("jacobian probe: t is within 10 h of a jump time");
  if (seg.in_period > ctx.period() - 10.0 * h)
    throw std::invalid_argument("jacobian probe: t is within 10 h of the period boundary");

  // Central differences in all 2n phase-space directions. Angle differences
  // are taken on the circle so output wrapping cannot corrupt the stencil.
  Mat jac(2 * n, 2 * n);
  auto fill_column = [&](int col, const PhasePoint& plus, const PhasePoint& minus) {
    for (int r = 0; r < n; ++r) jac(r, col) = (plus.action[r] - minus.action[r]) / (2.0 * h);
    for (int r = 0; r < n; ++r)
      jac(n + r, col) = std::remainder(plus.angle[r] - minus.angle[r], kTwoPi) / (2.0 * h);
  };
  for (int j = 0; j < n; ++j) {
    PhasePoint p = x, m = x;
    p.action[j] += h;
    m.action[j] -= h;
    fill_column(j, advance(p, t, ctx), advance(m, t, ctx));
  }
  for (int j = 0; j < n; ++j) {
    PhasePoint p = x, m = x;
    p.angle[j] += h;
    m.angle[j] -= h;
    fill_column(n + j, advance(p, t, ctx), advance(m, t, ctx));
  }
  return jac.determinant();
}

}  // namespace ensflow
