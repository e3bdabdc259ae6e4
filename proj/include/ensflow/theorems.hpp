#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ensflow/hypotheses.hpp"
#include "ensflow/montecarlo.hpp"

namespace ensflow {

/// Mode set and action quadrature sized for one observable/density pair.
struct SpectralSetup {
  ModeSet modes;
  ActionQuadrature quad;

  static SpectralSetup make(const Observable& g, const InitialDensity& f0, int mode_cutoff = 16,
                            int action_points_per_dim = 32);
};

/// (1/T) sum_i (tau_{i+1} - tau_i) <G-bar(I + S_i)>_0 -- the time-average
/// limit of the periodic system.
double theoretical_limit(const Observable& g, const InitialDensity& f0, const FlowContext& ctx,
                         const ActionQuadrature& quad);

struct VerifyOptions {
  std::vector<int> horizons{10, 20, 40, 80, 160, 200};
  Backend backend = Backend::kFourier;
  int gl_order = 8;
  std::size_t sample_count = 20000;
  std::uint64_t seed = 0x5eedULL;
  double tolerance = 5e-3;
  int grid_resolution = 33;
  int mode_cutoff = 16;
  int action_points_per_dim = 32;
};

struct BackendRun {
  Backend backend = Backend::kFourier;
  ConvergenceCurve curve;
  double final_error = 0.0;
  double final_standard_error = 0.0;
  bool converged = false;       // final error within max(tolerance, 3 SE)
  bool trend_ok = false;        // error shrank across the ladder (or exact throughout)
  bool passed = false;
};

struct LimitReport {
  double theoretical_limit = 0.0;
  std::vector<BackendRun> runs;
  double final_error = 0.0;     // error of the last run at the largest horizon
  HypothesisReport hypothesis_report;
  bool hypotheses_ok = false;
  bool passed = false;          // hypotheses hold and every backend converged
};

/// Convergence of the time average to the theoretical limit. When the
/// hypothesis scan fails the curves still run, so the same driver doubles as
/// the negative control.
LimitReport verify_theorem_4_1(const Observable& g, const InitialDensity& f0,
                               const FlowContext& ctx, const VerifyOptions& opts = {});

struct FamilyReport {
  std::vector<std::pair<std::string, LimitReport>> reports;
  bool all_passed = false;
};

/// Weak convergence of the time-averaged measures, checked through a finite
/// family of bounded continuous test observables.
FamilyReport verify_theorem_4_2(const InitialDensity& f0, const FlowContext& ctx,
                                const std::vector<std::pair<std::string, Observable>>& family,
                                const VerifyOptions& opts = {});

struct DecayRow {
  double horizon = 0.0;
  double value = 0.0;  // |running average|
};

struct DecayTable {
  std::vector<DecayRow> rows;
};

/// Running time average of M(t) = int_Omega F_k(t)(I) exp(i<n, Phi(I,t)>) dI
/// for segmentwise-constant amplitudes F_1..F_p; the oscillatory integral of
/// the time-average Riemann-Lebesgue lemma.
DecayTable rl_time_average_demo(const std::vector<std::function<Complex(const Vec&)>>& amplitudes,
                                const ModeVec& mode, const FlowContext& ctx,
                                const ActionQuadrature& quad, const std::vector<int>& horizons,
                                int gl_order = 8);

/// Running average (1/l) int_0^l M(t) dt for a caller-supplied decaying M.
DecayTable bounded_decay_average_demo(const std::function<double(double)>& m,
                                      const std::vector<int>& horizons, int gl_order = 8);

}  // namespace ensflow
