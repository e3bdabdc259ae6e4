#include "ensflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ensflow {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double z_prev, dp;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) * z * p2 - j * p3) / (j + 1);
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      z_prev = z;
      z = z_prev - p1 / dp;
    } while (std::abs(z - z_prev) > 1e-15);
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[order - 1 - i] = rule.weights[i];
  }
  return rule;
}

GaussRule gauss_legendre(int order, double a, double b) {
  GaussRule rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b), hal = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = mid + hal * rule.nodes[i];
    rule.weights[i] *= hal;
  }
  return rule;
}

ActionQuadrature tensor_gauss_legendre(const ActionDomain& box, int points_per_dim) {
  const int n = box.dim();
  std::vector<GaussRule> axis(n);
  for (int d = 0; d < n; ++d) axis[d] = gauss_legendre(points_per_dim, box.lower[d], box.upper[d]);

  ActionQuadrature quad;
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(points_per_dim);
  quad.nodes.reserve(total);
  quad.weights.reserve(total);

  std::vector<int> idx(n, 0);
  while (true) {
    Vec node(n);
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      node[d] = axis[d].nodes[idx[d]];
      w *= axis[d].weights[idx[d]];
    }
    quad.nodes.push_back(std::move(node));
    quad.weights.push_back(w);
    int d = n - 1;
    while (d >= 0 && ++idx[d] == points_per_dim) idx[d--] = 0;
    if (d < 0) break;
  }
  return quad;
}

}  // namespace ensflow
