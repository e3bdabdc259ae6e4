#include "ensflow/hypotheses.hpp"

#include <Eigen/SVD>

namespace ensflow {

std::vector<Vec> uniform_grid(const ActionDomain& box, int resolution) {
  const int n = box.dim();
  std::vector<Vec> grid;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec point(n);
    for (int d = 0; d < n; ++d) {
      const double f = resolution == 1 ? 0.5 : static_cast<double>(idx[d]) / (resolution - 1);
      point[d] = box.lower[d] + f * (box.upper[d] - box.lower[d]);
    }
    grid.push_back(std::move(point));
    int d = n - 1;
    while (d >= 0 && ++idx[d] == resolution) idx[d--] = 0;
    if (d < 0) break;
  }
  return grid;
}

HypothesisReport validate_hypotheses(const FlowContext& ctx, const ActionDomain& support_box,
                                     int grid_resolution) {
  HypothesisReport report;
  report.min_singular_value = std::numeric_limits<double>::infinity();
  const std::vector<Vec> grid = uniform_grid(support_box, grid_resolution);
  report.grid_points = static_cast<int>(grid.size());
  for (const Vec& I : grid) {
    const Mat grad = period_angle_shift_gradient(I, ctx) / ctx.period();
    const double sv = Eigen::JacobiSVD<Mat>(grad).singularValues().minCoeff();
    report.min_singular_value = std::min(report.min_singular_value, sv);
    if (sv <= kCriticalPointTolerance) report.violations.push_back(I);
  }
  report.passed = report.violations.empty();
  return report;
}

}  // namespace ensflow
