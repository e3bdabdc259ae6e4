#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ensflow/hypotheses.hpp"
#include "ensflow/montecarlo.hpp"
#include "ensflow/theorems.hpp"

namespace ensflow {

/// Action driver for the unit-spaced jump system: jump J_n lands at integer
/// time n (J_0 = 0) and offset(n) = sum_{i<=n} J_i stays within `bound` of
/// zero. General spacings reduce to this by rescaling time.
class JumpSequence {
 public:
  using OffsetFn = std::function<Vec(std::int64_t)>;

  JumpSequence() = default;
  JumpSequence(OffsetFn offset, double bound, int dim)
      : offset_(std::move(offset)), bound_(bound), dim_(dim) {}

  /// Cumulative jump sum c_n = sum_{i=0}^{n} J_i (so c_0 = 0).
  Vec offset(std::int64_t n) const { return offset_(n); }
  /// J_n = c_n - c_{n-1}, with J_0 = 0.
  Vec jump(std::int64_t n) const {
    return n == 0 ? Vec::Zero(dim_) : Vec(offset_(n) - offset_(n - 1));
  }
  double bound() const { return bound_; }
  int dim() const { return dim_; }

  /// offset(n) = a (cos(2 pi gamma n) - 1): telescoping jumps with closed-form
  /// cumulative sums, bound 2|a|, and almost periodicity inherited from the
  /// rotation gamma (irrational gamma gives the genuinely almost periodic
  /// case; rational gamma degenerates to an exactly periodic sequence).
  static JumpSequence quasiperiodic(Vec amplitude, double rotation);

  /// Exactly periodic sequence from one period of jumps; jumps[0] must vanish
  /// and the period must sum to zero so the offsets stay bounded.
  static JumpSequence periodic(std::vector<Vec> jumps);

 private:
  OffsetFn offset_;
  double bound_ = 0.0;
  int dim_ = 0;
};

/// Trajectory of system with integer-time jumps, for one initial action.
/// Keeps the running angle-drift partial sums, so a forward sweep over
/// t in [0, N] costs O(N) frequency evaluations in total.
class ApFlow {
 public:
  ApFlow(const JumpSequence& seq, const FrequencyField& field, Vec initial_action);

  Vec action_at(double t) const;
  /// Angle displacement at time t, reduced componentwise to [0, 2*pi).
  Vec drift(double t);
  PhasePoint advance(const Vec& theta0, double t);

 private:
  void extend(std::int64_t upto);

  const JumpSequence* seq_;
  const FrequencyField* field_;
  Vec initial_action_;
  std::vector<Vec> partial_;  // partial_[j] = sum_{i<j} omega(I0 + c_i)
};

/// One-shot convenience; sweeping callers should hold an ApFlow.
PhasePoint advance_ap(const PhasePoint& x, double t, const JumpSequence& seq,
                      const FrequencyField& field);

/// Smallest p in {1..window} with |offset(n+p) - offset(n)| < epsilon over
/// sampled n in {0..samples}; empty when no candidate qualifies.
std::optional<int> find_almost_period(const JumpSequence& seq, double epsilon, int window,
                                      std::int64_t samples);

/// omega-bar_N(I) = (1/N) sum_{i<N} omega(I + c_i).
Vec averaged_frequency_N(const Vec& I, const JumpSequence& seq, const FrequencyField& field,
                         std::int64_t N);
Mat averaged_frequency_N_gradient(const Vec& I, const JumpSequence& seq,
                                  const FrequencyField& field, std::int64_t N);

struct ApHypothesisReport {
  std::vector<std::pair<std::int64_t, HypothesisReport>> scans;
  bool passed = false;
};

/// No-critical-point scan of omega-bar_N over the support box, for each probe N.
ApHypothesisReport validate_ap_hypotheses(const JumpSequence& seq, const FrequencyField& field,
                                          const ActionDomain& support_box, int grid_resolution,
                                          const std::vector<std::int64_t>& probe_N);

/// Partial average (1/N) sum_{i<N} <G-bar(I + c_i)>_0.
double theoretical_limit_ap(const Observable& g, const InitialDensity& f0, const JumpSequence& seq,
                            std::int64_t N, const ActionQuadrature& quad);

/// <G>_t for the jump-sequence system via the Fourier expansion.
double expectation_fourier_ap(const Observable& g, const InitialDensity& f0, double t,
                              const JumpSequence& seq, const FrequencyField& field,
                              const ModeSet& modes, const ActionQuadrature& quad,
                              double imag_tol = 1e-8);

/// (1/N) int_0^N <G>_t dt with Gauss-Legendre per unit interval, the smooth
/// segments of the integer-jump system. Per-node drift partial sums are built
/// once and advanced with the sweep.
double time_average_fourier_ap(const Observable& g, const InitialDensity& f0, int N,
                               const JumpSequence& seq, const FrequencyField& field,
                               const ModeSet& modes, const ActionQuadrature& quad,
                               int gl_order = 8);

McEstimate time_average_mc_ap(const Observable& g, const SampleCloud& cloud, int N,
                              const JumpSequence& seq, const FrequencyField& field,
                              int gl_order = 8);

struct ApVerifyOptions {
  std::vector<int> horizons{200, 500, 1000, 2000};
  Backend backend = Backend::kFourier;
  int gl_order = 8;
  std::size_t sample_count = 10000;
  std::uint64_t seed = 0x5eedULL;
  double tolerance = 5e-3;
  int grid_resolution = 33;
  int mode_cutoff = 16;
  int action_points_per_dim = 32;
};

struct ApLimitReport {
  double theoretical_limit = 0.0;   // partial average at the reference horizon
  double cesaro_diagnostic = 0.0;   // |value(N_ref) - value(2 N_ref)|
  std::vector<BackendRun> runs;
  double final_error = 0.0;
  ApHypothesisReport hypothesis_report;
  bool hypotheses_ok = false;
  bool passed = false;
};

/// Convergence of the time average of <G>_t to the partial-average limit for
/// the jump-sequence system.
ApLimitReport verify_theorem_5_1(const Observable& g, const InitialDensity& f0,
                                 const JumpSequence& seq, const FrequencyField& field,
                                 const ApVerifyOptions& opts = {});

}  // namespace ensflow
