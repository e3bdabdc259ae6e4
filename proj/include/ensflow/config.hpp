#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensflow/almostperiodic.hpp"
#include "ensflow/density.hpp"
#include "ensflow/frequency.hpp"
#include "ensflow/observable.hpp"
#include "ensflow/schedule.hpp"

namespace ensflow {

/// Raised on malformed or inconsistent configuration input; the CLI maps it
/// to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeGridSpec {
  double start = 0.0;
  double stop = 5.0;
  int count = 51;

  std::vector<double> points() const;
};

struct ApSearchSpec {
  double epsilon = 0.006;
  int window = 100;
  std::int64_t samples = 2000;
};

struct NumericsSpec {
  int mode_cutoff = 16;
  int action_points = 32;
  int time_quad_order = 8;
  int grid_resolution = 33;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  double tolerance = 5e-3;
  std::vector<int> horizons{10, 20, 40, 80, 160, 200};
  TimeGridSpec t_grid;
  ApSearchSpec ap_search;
};

struct ApSequenceSpec {
  Vec amplitude;
  double rotation = 0.0;
};

/// Parsed and resolved run configuration: registry names already turned into
/// live objects, exactly one of schedule / almost-periodic populated.
struct RunConfig {
  int schema = 1;
  ActionDomain domain;
  std::optional<TransitionSchedule> schedule;
  std::optional<ApSequenceSpec> almost_periodic;
  FrequencyField frequency;
  InitialDensity density;
  std::vector<std::pair<std::string, Observable>> observables;
  Backend backend = Backend::kBoth;
  NumericsSpec numerics;
  std::string output_dir = "out";

  bool is_periodic() const { return schedule.has_value(); }
  JumpSequence jump_sequence() const {
    return JumpSequence::quasiperiodic(almost_periodic->amplitude, almost_periodic->rotation);
  }
  /// Box covering every jump-translated copy of the domain.
  ActionDomain inflated_domain() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

Backend parse_backend(const std::string& name);

}  // namespace ensflow
