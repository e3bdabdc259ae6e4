#pragma once

#include <functional>
#include <vector>

#include "ensflow/density.hpp"
#include "ensflow/flow.hpp"
#include "ensflow/observable.hpp"
#include "ensflow/quadrature.hpp"

namespace ensflow {

/// Finite set of torus modes, closed under negation, in a fixed deterministic
/// order (lexicographic for cutoff balls, declaration order for explicit
/// supports).
struct ModeSet {
  std::vector<ModeVec> modes;

  std::size_t size() const { return modes.size(); }

  /// All modes with |n|_inf <= cutoff.
  static ModeSet cube(int dim, int cutoff);
  /// Explicit support, symmetrized and deduplicated.
  static ModeSet from_support(const std::vector<ModeVec>& support);
  /// Observable's declared support when present, otherwise a cutoff ball.
  static ModeSet for_observable(const Observable& g, int fallback_cutoff = 16);
};

/// Exact coefficient when the observable declares one, else torus quadrature
/// with max(64, 8 |n|_inf) points per angle dimension.
Complex fourier_coefficient(const Observable& g, const Vec& I, const ModeVec& n);

/// Always-quadrature route, kept separate so exact declarations can be
/// cross-checked against an independent evaluation.
Complex fourier_coefficient_quadrature(const Observable& g, const Vec& I, const ModeVec& n,
                                       int points_per_dim = 0);

/// Mean of G over the torus fiber at I, i.e. the zero-mode coefficient.
/// Throws if a real observable produces |Im| > 1e-12.
double angle_average(const Observable& g, const Vec& I);

/// | (1/(2pi)^n) int G^2 dtheta - sum_{modes} |G^(I,n)|^2 |.
double parseval_residual(const Observable& g, const Vec& I, const ModeSet& modes,
                         int grid_points_per_dim = 64);

/// Mode-sum expectation with a caller-supplied action offset and per-node
/// phase. This is the shared kernel behind the periodic and almost-periodic
/// engines; node-major then mode-major accumulation keeps runs reproducible.
double expectation_from_phase(const Observable& g, const InitialDensity& f0, const ModeSet& modes,
                              const ActionQuadrature& quad, const Vec& offset,
                              const std::function<Vec(std::size_t, const Vec&)>& phase_at_node,
                              double imag_tol = 1e-8);

/// <G>_t for the periodic system via the Fourier expansion.
double expectation_fourier(const Observable& g, const InitialDensity& f0, double t,
                           const FlowContext& ctx, const ModeSet& modes,
                           const ActionQuadrature& quad, double imag_tol = 1e-8);

/// integral over Omega of sum_{modes} |G^(I,n)| |f0^(I,-n)| dI; finite by
/// construction for registry families and used for truncation-tail checks.
double summability_bound(const Observable& g, const InitialDensity& f0, const ModeSet& modes,
                         const ActionQuadrature& quad);

}  // namespace ensflow
