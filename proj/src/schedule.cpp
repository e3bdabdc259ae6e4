#include "ensflow/schedule.hpp"

#include <sstream>

namespace ensflow {

ValidationReport validate_schedule(const TransitionSchedule& s) {
  ValidationReport report;

  const bool shape_ok = !s.times.empty() && s.times.size() == s.jumps.size() && s.period > 0.0;
  report.add("shape", shape_ok,
             shape_ok ? "" : "need period > 0 and matching nonempty time/jump lists");
  if (!shape_ok) return report;

  const int n = static_cast<int>(s.jumps.front().size());
  bool dims_ok = n > 0;
  for (const Vec& j : s.jumps) dims_ok = dims_ok && j.size() == n;
  report.add("jump-dimensions", dims_ok, dims_ok ? "" : "jump vectors differ in length");
  if (!dims_ok) return report;

  const bool t0 = s.times.front() == 0.0;
  report.add("initial-time-zero", t0, t0 ? "" : "tau_0 must be 0");
  const bool j0 = s.jumps.front().norm() == 0.0;
  report.add("initial-jump-zero", j0, j0 ? "" : "jump at tau_0 must vanish");

  bool increasing = true;
  for (std::size_t i = 1; i < s.times.size(); ++i)
    increasing = increasing && s.times[i - 1] < s.times[i];
  const bool within = s.times.back() < s.period;
  report.add("strictly-increasing", increasing);
  report.add("within-period", within, within ? "" : "every tau_k must lie in [0, period)");

  Vec net = Vec::Zero(n);
  for (const Vec& j : s.jumps) net += j;
  std::ostringstream os;
  os << "|net jump| = " << net.norm();
  report.add("zero-net-jump", net.norm() <= kNetJumpTolerance, os.str());

  return report;
}

}  // namespace ensflow
