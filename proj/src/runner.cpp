#include "ensflow/runner.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <json.hpp>

namespace ensflow {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::kMonteCarlo: return "mc";
    case Backend::kFourier: return "fourier";
    default: return "both";
  }
}

fs::path prepare_outdir(const RunConfig& cfg, const RunOptions& opts) {
  fs::path dir = opts.output_dir.empty() ? cfg.output_dir : opts.output_dir;
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// Numbers go through format_double so repeated runs are byte-identical.
ordered_json json_number(double v) { return ordered_json::parse(format_double(v)); }

ordered_json checks_to_json(const ValidationReport& report) {
  ordered_json checks = ordered_json::array();
  for (const ValidationCheck& c : report.checks) {
    ordered_json item;
    item["name"] = c.name;
    item["passed"] = c.passed;
    if (!c.detail.empty()) item["detail"] = c.detail;
    checks.push_back(item);
  }
  return checks;
}

ordered_json curve_to_json(const ConvergenceCurve& curve) {
  ordered_json rows = ordered_json::array();
  for (const ConvergencePoint& p : curve.points) {
    ordered_json row;
    row["horizon"] = p.horizon;
    row["time_average"] = json_number(p.average);
    row["abs_error"] = json_number(p.abs_error);
    row["standard_error"] = json_number(p.standard_error);
    rows.push_back(row);
  }
  return rows;
}

ordered_json run_to_json(const BackendRun& run) {
  ordered_json item;
  item["backend"] = backend_name(run.backend);
  item["final_error"] = json_number(run.final_error);
  item["final_standard_error"] = json_number(run.final_standard_error);
  item["converged"] = run.converged;
  item["trend_ok"] = run.trend_ok;
  item["passed"] = run.passed;
  item["decay_exponent"] = json_number(run.curve.decay_exponent);
  item["points"] = curve_to_json(run.curve);
  return item;
}

std::string curve_csv(const ConvergenceCurve& curve) {
  std::string csv = "l,time_average,abs_error\n";
  for (const ConvergencePoint& p : curve.points)
    csv += std::to_string(p.horizon) + "," + format_double(p.average) + "," +
           format_double(p.abs_error) + "\n";
  return csv;
}

const ConvergenceCurve& primary_curve(const std::vector<BackendRun>& runs) {
  for (const BackendRun& run : runs)
    if (run.backend == Backend::kFourier) return run.curve;
  return runs.front().curve;
}

/// Backend cross-check: shared horizons must agree within 5 standard errors
/// (with a small absolute floor for vanishing-variance observables).
bool backends_diverge(const std::vector<BackendRun>& runs) {
  const BackendRun* fourier = nullptr;
  const BackendRun* mc = nullptr;
  for (const BackendRun& run : runs) {
    if (run.backend == Backend::kFourier) fourier = &run;
    if (run.backend == Backend::kMonteCarlo) mc = &run;
  }
  if (!fourier || !mc) return false;
  for (std::size_t i = 0; i < fourier->curve.points.size(); ++i) {
    const double gap = std::abs(fourier->curve.points[i].average - mc->curve.points[i].average);
    if (gap > 5.0 * mc->curve.points[i].standard_error + 1e-7) return true;
  }
  return false;
}

ValidationReport full_validation(const RunConfig& cfg) {
  ValidationReport report;

  // Frequency gradient vs a finite-difference probe at seeded random points.
  {
    Rng rng(cfg.numerics.seed);
    const ActionDomain box = cfg.density.support();
    double worst = 0.0;
    for (int probe = 0; probe < 8; ++probe) {
      Vec I(box.dim());
      for (int d = 0; d < box.dim(); ++d) I[d] = rng.uniform(box.lower[d], box.upper[d]);
      const Mat analytic = cfg.frequency.gradient(I);
      const double h = 1e-5 * std::max(1.0, I.norm());
      Mat fd(box.dim(), box.dim());
      Vec shifted = I;
      for (int d = 0; d < box.dim(); ++d) {
        shifted[d] = I[d] + h;
        const Vec up = cfg.frequency(shifted);
        shifted[d] = I[d] - h;
        const Vec dn = cfg.frequency(shifted);
        shifted[d] = I[d];
        fd.col(d) = (up - dn) / (2.0 * h);
      }
      const double scale = std::max(1.0, analytic.norm());
      worst = std::max(worst, (analytic - fd).norm() / scale);
    }
    report.add("frequency-gradient-consistency", worst <= 1e-6,
               "max relative deviation " + format_double(worst));
  }

  // Density normalization over the support box (angle part integrates to one
  // by construction for the registry families).
  {
    const ActionQuadrature quad =
        tensor_gauss_legendre(cfg.density.support(), cfg.numerics.action_points);
    double mass = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q)
      mass += quad.weights[q] * cfg.density.action_marginal(quad.nodes[q]);
    report.add("density-normalization", std::abs(mass - 1.0) <= 1e-8,
               "|mass - 1| = " + format_double(std::abs(mass - 1.0)));
  }

  if (cfg.is_periodic()) {
    ValidationReport schedule_report = validate_schedule(*cfg.schedule);
    for (ValidationCheck& c : schedule_report.checks)
      report.checks.push_back(std::move(c));
    const FlowContext ctx(*cfg.schedule, cfg.frequency);
    const HypothesisReport hyp =
        validate_hypotheses(ctx, cfg.density.support(), cfg.numerics.grid_resolution);
    report.add("no-critical-points", hyp.passed,
               "min singular value " + format_double(hyp.min_singular_value) + " over " +
                   std::to_string(hyp.grid_points) + " grid points");
  } else {
    const JumpSequence seq = cfg.jump_sequence();
    // Boundedness and cumulative consistency probes of the jump sequence.
    double worst_offset = 0.0, worst_consistency = 0.0;
    for (std::int64_t n = 0; n <= 1000000; n += (n < 1000 ? 1 : 997)) {
      worst_offset = std::max(worst_offset, seq.offset(n).norm());
      if (n > 0)
        worst_consistency = std::max(
            worst_consistency, (seq.offset(n) - seq.offset(n - 1) - seq.jump(n)).norm());
    }
    report.add("ap-boundedness", worst_offset <= seq.bound() + 1e-12,
               "sup |offset| = " + format_double(worst_offset) + " vs bound " +
                   format_double(seq.bound()));
    report.add("ap-cumulative-consistency", worst_consistency == 0.0);
    std::vector<std::int64_t> probes;
    for (int h : cfg.numerics.horizons) probes.push_back(h);
    const ApHypothesisReport hyp = validate_ap_hypotheses(
        seq, cfg.frequency, cfg.density.support(), cfg.numerics.grid_resolution, probes);
    double min_sv = std::numeric_limits<double>::infinity();
    for (const auto& [N, scan] : hyp.scans) min_sv = std::min(min_sv, scan.min_singular_value);
    report.add("no-critical-points", hyp.passed,
               "min singular value " + format_double(min_sv) + " over probe horizons");
  }
  return report;
}

int finish_verify(const fs::path& dir, const std::string& stem, ordered_json& doc,
                  const std::vector<BackendRun>& runs, bool passed, const RunOptions& opts,
                  std::ostream& log) {
  const bool diverged = backends_diverge(runs);
  doc["oracle_divergence"] = diverged;
  if (opts.negative_control) {
    doc["negative_control"] = true;
    doc["expected_fail_confirmed"] = !passed;
  }
  write_text(dir / (stem + ".json"), doc.dump(2) + "\n");
  if (!runs.empty()) write_text(dir / (stem + "_curve.csv"), curve_csv(primary_curve(runs)));

  if (diverged) {
    log << stem << ": backend divergence beyond 5 standard errors\n";
    return kExitOracleDivergence;
  }
  if (opts.negative_control) {
    log << stem << (passed ? ": unexpectedly passed (negative control)\n"
                           : ": expected-fail confirmed\n");
    return passed ? kExitFail : kExitPass;
  }
  log << stem << (passed ? ": pass\n" : ": fail\n");
  return passed ? kExitPass : kExitFail;
}

}  // namespace

int run_validate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const fs::path dir = prepare_outdir(cfg, opts);
  const ValidationReport report = full_validation(cfg);

  ordered_json doc;
  doc["command"] = "validate";
  doc["checks"] = checks_to_json(report);
  doc["passed"] = report.all_passed();
  write_text(dir / "validate.json", doc.dump(2) + "\n");

  for (const ValidationCheck& c : report.checks)
    log << (c.passed ? "  ok   " : "  FAIL ") << c.name
        << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  log << "validate: " << (report.all_passed() ? "pass" : "fail") << "\n";
  return report.all_passed() ? kExitPass : kExitFail;
}

int run_simulate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const fs::path dir = prepare_outdir(cfg, opts);
  if (!full_validation(cfg).all_passed()) {
    log << "simulate: validation failed; run the validate command for detail\n";
    return kExitFail;
  }

  const auto& [name, g] = cfg.observables.front();
  const SpectralSetup setup =
      SpectralSetup::make(g, cfg.density, cfg.numerics.mode_cutoff, cfg.numerics.action_points);
  const std::vector<double> grid = cfg.numerics.t_grid.points();
  const bool want_mc = cfg.backend != Backend::kFourier;
  const bool want_fourier = cfg.backend != Backend::kMonteCarlo;

  std::vector<McEstimate> mc(grid.size());
  std::vector<double> fourier(grid.size(), 0.0);

  if (cfg.is_periodic()) {
    const FlowContext ctx(*cfg.schedule, cfg.frequency);
    SampleCloud cloud;
    if (want_mc) cloud = draw_cloud(cfg.density, cfg.numerics.samples, cfg.numerics.seed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (want_mc) mc[i] = expectation_mc(g, cloud, grid[i], ctx);
      if (want_fourier)
        fourier[i] = expectation_fourier(g, cfg.density, grid[i], ctx, setup.modes, setup.quad);
    }
  } else {
    const JumpSequence seq = cfg.jump_sequence();
    if (want_fourier)
      for (std::size_t i = 0; i < grid.size(); ++i)
        fourier[i] =
            expectation_fourier_ap(g, cfg.density, grid[i], seq, cfg.frequency, setup.modes,
                                   setup.quad);
    if (want_mc) {
      const SampleCloud cloud = draw_cloud(cfg.density, cfg.numerics.samples, cfg.numerics.seed);
      std::vector<double> sum(grid.size(), 0.0), sumsq(grid.size(), 0.0);
      for (const PhasePoint& x : cloud.points) {
        ApFlow flow(seq, cfg.frequency, x.action);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const PhasePoint y = flow.advance(x.angle, grid[i]);
          const double v = g(y.action, y.angle);
          sum[i] += v;
          sumsq[i] += v * v;
        }
      }
      const double n = static_cast<double>(cloud.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double mean = sum[i] / n;
        const double var = std::max(0.0, sumsq[i] / n - mean * mean);
        mc[i] = McEstimate{mean, std::sqrt(var / n)};
      }
    }
  }

  std::string csv = "t,mc,mc_stderr,fourier\n";
  bool diverged = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += format_double(grid[i]);
    csv += ",";
    if (want_mc) csv += format_double(mc[i].value) + "," + format_double(mc[i].standard_error);
    else csv += ",";
    csv += ",";
    if (want_fourier) csv += format_double(fourier[i]);
    csv += "\n";
    if (want_mc && want_fourier &&
        std::abs(mc[i].value - fourier[i]) > 5.0 * mc[i].standard_error + 1e-7)
      diverged = true;
  }
  write_text(dir / "simulate.csv", csv);
  log << "simulate: wrote " << grid.size() << " rows (" << name << ")\n";
  if (diverged) {
    log << "simulate: backend divergence beyond 5 standard errors\n";
    return kExitOracleDivergence;
  }
  return kExitPass;
}

int run_verify(const RunConfig& cfg, const std::string& which, const RunOptions& opts,
               std::ostream& log) {
  const fs::path dir = prepare_outdir(cfg, opts);
  const ValidationReport validation = full_validation(cfg);
  if (!validation.all_passed() && !opts.negative_control) {
    log << "verify: validation failed; rerun with --negative-control to treat the failure as "
           "intentional\n";
    return kExitFail;
  }

  if (which == "5.1") {
    if (cfg.is_periodic()) {
      log << "verify 5.1: config must declare an almost_periodic sequence\n";
      return kExitConfig;
    }
    ApVerifyOptions vopts;
    vopts.horizons = cfg.numerics.horizons;
    vopts.backend = cfg.backend;
    vopts.gl_order = cfg.numerics.time_quad_order;
    vopts.sample_count = cfg.numerics.samples;
    vopts.seed = cfg.numerics.seed;
    vopts.tolerance = cfg.numerics.tolerance;
    vopts.grid_resolution = cfg.numerics.grid_resolution;
    vopts.mode_cutoff = cfg.numerics.mode_cutoff;
    vopts.action_points_per_dim = cfg.numerics.action_points;
    const ApLimitReport report = verify_theorem_5_1(
        cfg.observables.front().second, cfg.density, cfg.jump_sequence(), cfg.frequency, vopts);

    ordered_json doc;
    doc["command"] = "verify";
    doc["theorem"] = "5.1";
    doc["theoretical_limit"] = json_number(report.theoretical_limit);
    doc["cesaro_diagnostic"] = json_number(report.cesaro_diagnostic);
    doc["hypotheses_ok"] = report.hypotheses_ok;
    doc["final_error"] = json_number(report.final_error);
    ordered_json runs = ordered_json::array();
    for (const BackendRun& run : report.runs) runs.push_back(run_to_json(run));
    doc["runs"] = runs;
    doc["passed"] = report.passed;
    return finish_verify(dir, "verify_5.1", doc, report.runs, report.passed, opts, log);
  }

  if (!cfg.is_periodic()) {
    log << "verify " << which << ": config must declare a periodic schedule\n";
    return kExitConfig;
  }
  const FlowContext ctx(*cfg.schedule, cfg.frequency);

  VerifyOptions vopts;
  vopts.horizons = cfg.numerics.horizons;
  vopts.backend = cfg.backend;
  vopts.gl_order = cfg.numerics.time_quad_order;
  vopts.sample_count = cfg.numerics.samples;
  vopts.seed = cfg.numerics.seed;
  vopts.tolerance = cfg.numerics.tolerance;
  vopts.grid_resolution = cfg.numerics.grid_resolution;
  vopts.mode_cutoff = cfg.numerics.mode_cutoff;
  vopts.action_points_per_dim = cfg.numerics.action_points;

  if (which == "4.1") {
    const LimitReport report =
        verify_theorem_4_1(cfg.observables.front().second, cfg.density, ctx, vopts);
    ordered_json doc;
    doc["command"] = "verify";
    doc["theorem"] = "4.1";
    doc["theoretical_limit"] = json_number(report.theoretical_limit);
    doc["hypotheses_ok"] = report.hypotheses_ok;
    doc["min_singular_value"] = json_number(report.hypothesis_report.min_singular_value);
    doc["final_error"] = json_number(report.final_error);
    ordered_json runs = ordered_json::array();
    for (const BackendRun& run : report.runs) runs.push_back(run_to_json(run));
    doc["runs"] = runs;
    doc["passed"] = report.passed;
    return finish_verify(dir, "verify_4.1", doc, report.runs, report.passed, opts, log);
  }

  if (which == "4.2") {
    const FamilyReport report = verify_theorem_4_2(cfg.density, ctx, cfg.observables, vopts);
    ordered_json doc;
    doc["command"] = "verify";
    doc["theorem"] = "4.2";
    ordered_json items = ordered_json::array();
    bool any_divergence = false;
    for (const auto& [name, r] : report.reports) {
      ordered_json item;
      item["observable"] = name;
      item["theoretical_limit"] = json_number(r.theoretical_limit);
      item["final_error"] = json_number(r.final_error);
      item["passed"] = r.passed;
      ordered_json runs = ordered_json::array();
      for (const BackendRun& run : r.runs) runs.push_back(run_to_json(run));
      item["runs"] = runs;
      items.push_back(item);
      any_divergence = any_divergence || backends_diverge(r.runs);
      write_text(dir / ("verify_4.2_" + name + "_curve.csv"), curve_csv(primary_curve(r.runs)));
      log << "  " << (r.passed ? "ok   " : "FAIL ") << name
          << "  final_error=" << format_double(r.final_error) << "\n";
    }
    doc["observables"] = items;
    doc["oracle_divergence"] = any_divergence;
    doc["passed"] = report.all_passed;
    if (opts.negative_control) {
      doc["negative_control"] = true;
      doc["expected_fail_confirmed"] = !report.all_passed;
    }
    write_text(dir / "verify_4.2.json", doc.dump(2) + "\n");
    if (any_divergence) {
      log << "verify_4.2: backend divergence beyond 5 standard errors\n";
      return kExitOracleDivergence;
    }
    const bool ok = opts.negative_control ? !report.all_passed : report.all_passed;
    log << "verify_4.2: " << (ok ? "pass" : "fail") << "\n";
    return ok ? kExitPass : kExitFail;
  }

  if (which == "rl") {
    // Lemma demonstrator: amplitudes G^(I + S_k, n) f0^(I, -n) with the
    // schedule's own phases, the exact oscillatory integrand of the proof.
    const Observable& g = cfg.observables.front().second;
    const SpectralSetup setup =
        SpectralSetup::make(g, cfg.density, cfg.numerics.mode_cutoff, cfg.numerics.action_points);
    ModeVec mode = ModeVec::Zero(cfg.domain.dim());
    mode[0] = 1;
    if (g.mode_support())
      for (const ModeVec& candidate : *g.mode_support())
        if (!candidate.isZero()) {
          mode = candidate;
          break;
        }
    std::vector<std::function<Complex(const Vec&)>> amplitudes;
    for (int k = 0; k < ctx.schedule().count(); ++k) {
      const Vec offset = ctx.offset(k);
      amplitudes.push_back([&g, &f0 = cfg.density, offset, mode](const Vec& I) {
        return g.fourier(I + offset, mode) * f0.fourier(I, ModeVec(-mode));
      });
    }
    const DecayTable table = rl_time_average_demo(amplitudes, mode, ctx, setup.quad,
                                                  cfg.numerics.horizons,
                                                  cfg.numerics.time_quad_order);
    ordered_json doc;
    doc["command"] = "verify";
    doc["theorem"] = "rl";
    ordered_json rows = ordered_json::array();
    std::string csv = "l,time_average,abs_error\n";
    for (const DecayRow& r : table.rows) {
      ordered_json row;
      row["horizon"] = json_number(r.horizon);
      row["running_average"] = json_number(r.value);
      rows.push_back(row);
      csv += format_double(r.horizon) + "," + format_double(r.value) + "," +
             format_double(r.value) + "\n";
    }
    doc["rows"] = rows;
    const double first = table.rows.front().value;
    const double last = table.rows.back().value;
    const bool passed = last <= first / 5.0;
    doc["decay_ratio"] = json_number(first / std::max(last, 1e-300));
    doc["passed"] = passed;
    if (opts.negative_control) {
      doc["negative_control"] = true;
      doc["expected_fail_confirmed"] = !passed;
    }
    write_text(dir / "verify_rl.json", doc.dump(2) + "\n");
    write_text(dir / "verify_rl_curve.csv", csv);
    const bool ok = opts.negative_control ? !passed : passed;
    log << "verify_rl: " << (ok ? "pass" : "fail") << " (decay ratio "
        << format_double(first / std::max(last, 1e-300)) << ")\n";
    return ok ? kExitPass : kExitFail;
  }

  log << "verify: unknown target '" << which << "' (expected 4.1 | 4.2 | 5.1 | rl)\n";
  return kExitConfig;
}

}  // namespace ensflow
