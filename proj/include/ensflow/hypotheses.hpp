#pragma once

#include <vector>

#include "ensflow/flow.hpp"

namespace ensflow {

/// Outcome of the no-critical-point scan for the averaged frequency map.
struct HypothesisReport {
  double min_singular_value = 0.0;
  std::vector<Vec> violations;  // grid points where the gradient degenerates
  bool passed = false;
  int grid_points = 0;
};

inline constexpr double kCriticalPointTolerance = 1e-10;

/// Scans a uniform grid over the density support box, evaluating the gradient
/// of the period-averaged frequency; any grid point whose smallest singular
/// value falls to ~0 is a critical point of the averaged rotation map.
HypothesisReport validate_hypotheses(const FlowContext& ctx, const ActionDomain& support_box,
                                     int grid_resolution);

/// Uniform grid over a closed box, endpoints included; row-major order.
std::vector<Vec> uniform_grid(const ActionDomain& box, int resolution);

}  // namespace ensflow
