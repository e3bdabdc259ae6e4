#pragma once

#include <string>
#include <vector>

#include "ensflow/types.hpp"

namespace ensflow {

/// Jump times and jump vectors of one period. Plain data; validate_schedule
/// reports invariant violations and callers decide whether they are fatal
/// (the section-4/5 consistency checks deliberately run relabeled schedules
/// whose period-closing jump breaks the zero-net bookkeeping).
struct TransitionSchedule {
  double period = 0.0;
  std::vector<double> times;   // tau_0 .. tau_{p-1} in [0, period)
  std::vector<Vec> jumps;      // applied at the matching time

  int count() const { return static_cast<int>(times.size()); }
  int dim() const { return jumps.empty() ? 0 : static_cast<int>(jumps.front().size()); }

  static TransitionSchedule jump_free(double period, int dim) {
    return TransitionSchedule{period, {0.0}, {Vec::Zero(dim)}};
  }
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  void add(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }
};

inline constexpr double kNetJumpTolerance = 1e-12;

ValidationReport validate_schedule(const TransitionSchedule& schedule);

}  // namespace ensflow
