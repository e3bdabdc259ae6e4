#pragma once

#include <vector>

#include "ensflow/types.hpp"

namespace ensflow {

/// One-dimensional Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights via Newton iteration on the Legendre recurrence.
GaussRule gauss_legendre(int order);

/// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int order, double a, double b);

/// Tensor quadrature over an action box. Node ordering is row-major over the
/// per-axis rules and fixed, so reductions are reproducible.
struct ActionQuadrature {
  std::vector<Vec> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

ActionQuadrature tensor_gauss_legendre(const ActionDomain& box, int points_per_dim = 32);

/// Uniform tensor grid on the torus with the periodic trapezoid weight
/// (2*pi/M)^n per node; spectrally accurate for smooth periodic integrands
/// and exact for trigonometric polynomials below the grid Nyquist mode.
struct AngleGrid {
  int dim;
  int points_per_dim;
  /// Visits every grid node in row-major order.
  template <typename F>
  void for_each(F&& f) const {
    const double step = kTwoPi / points_per_dim;
    Vec theta = Vec::Zero(dim);
    std::vector<int> idx(dim, 0);
    while (true) {
      for (int d = 0; d < dim; ++d) theta[d] = idx[d] * step;
      f(theta);
      int d = dim - 1;
      while (d >= 0 && ++idx[d] == points_per_dim) idx[d--] = 0;
      if (d < 0) break;
    }
  }
  double weight() const {
    double w = 1.0;
    for (int d = 0; d < dim; ++d) w *= kTwoPi / points_per_dim;
    return w;
  }
};

}  // namespace ensflow
