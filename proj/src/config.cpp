#include "ensflow/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ensflow {

using nlohmann::json;

namespace {

Vec parse_vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Mat parse_mat(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a matrix (array of rows)");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ConfigError(where + ": expected a matrix (array of rows)");
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ConfigError(where + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

ModeVec parse_modevec(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty integer array");
  ModeVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw ConfigError(where + ": expected integers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<int>();
  }
  return v;
}

ActionDomain parse_domain(const json& j) {
  if (!j.contains("lower") || !j.contains("upper"))
    throw ConfigError("domain: need lower and upper");
  try {
    return ActionDomain(parse_vec(j["lower"], "domain.lower"), parse_vec(j["upper"], "domain.upper"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

TransitionSchedule parse_schedule(const json& j, int dim) {
  TransitionSchedule s;
  if (!j.contains("period") || !j["period"].is_number())
    throw ConfigError("schedule.period: expected a number");
  s.period = j["period"].get<double>();
  if (!j.contains("times") || !j["times"].is_array())
    throw ConfigError("schedule.times: expected an array");
  for (const auto& t : j["times"]) s.times.push_back(t.get<double>());
  if (!j.contains("jumps") || !j["jumps"].is_array())
    throw ConfigError("schedule.jumps: expected an array of vectors");
  for (std::size_t i = 0; i < j["jumps"].size(); ++i) {
    Vec jump = parse_vec(j["jumps"][i], "schedule.jumps");
    if (jump.size() != dim) throw ConfigError("schedule.jumps: dimension mismatch with domain");
    s.jumps.push_back(std::move(jump));
  }
  if (s.times.size() != s.jumps.size())
    throw ConfigError("schedule: times and jumps must have equal length");
  return s;
}

FrequencyField parse_frequency(const json& j, int dim) {
  const std::string kind = j.value("kind", "");
  if (kind == "linear") {
    Mat A = j.contains("matrix") ? parse_mat(j["matrix"], "frequency.matrix")
                                 : Mat::Identity(dim, dim);
    Vec b = j.contains("offset") ? parse_vec(j["offset"], "frequency.offset") : Vec::Zero(dim);
    if (A.rows() != dim || A.cols() != dim || b.size() != dim)
      throw ConfigError("frequency: matrix/offset dimension mismatch with domain");
    return FrequencyField::linear(std::move(A), std::move(b));
  }
  if (kind == "constant") {
    Vec c = j.contains("value") ? parse_vec(j["value"], "frequency.value") : Vec::Zero(dim);
    if (c.size() != dim) throw ConfigError("frequency: value dimension mismatch with domain");
    return FrequencyField::constant(std::move(c));
  }
  throw ConfigError("frequency.kind: unknown registry name '" + kind +
                    "' (expected linear | constant)");
}

AngleProfile parse_profile(const json& j, int dim) {
  Vec alpha = Vec::Zero(dim), beta = Vec::Zero(dim);
  if (j.contains("angle_alpha")) alpha = parse_vec(j["angle_alpha"], "density.angle_alpha");
  if (j.contains("angle_beta")) beta = parse_vec(j["angle_beta"], "density.angle_beta");
  if (alpha.size() != dim || beta.size() != dim)
    throw ConfigError("density: angle profile dimension mismatch");
  try {
    return AngleProfile(std::move(alpha), std::move(beta));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("density: ") + e.what());
  }
}

InitialDensity parse_density(const json& j, const ActionDomain& domain) {
  const std::string kind = j.value("kind", "");
  if (!j.contains("lower") || !j.contains("upper"))
    throw ConfigError("density: need lower and upper support bounds");
  ActionDomain support(parse_vec(j["lower"], "density.lower"),
                       parse_vec(j["upper"], "density.upper"));
  if (support.dim() != domain.dim()) throw ConfigError("density: dimension mismatch with domain");
  for (int d = 0; d < domain.dim(); ++d)
    if (support.lower[d] < domain.lower[d] + 1e-6 || support.upper[d] > domain.upper[d] - 1e-6)
      throw ConfigError("density: support must lie strictly inside the domain (margin 1e-6)");
  AngleProfile profile = parse_profile(j, domain.dim());
  if (kind == "uniform-box") return InitialDensity::uniform_box(support, std::move(profile));
  if (kind == "truncated-gaussian") {
    if (!j.contains("mean") || !j.contains("sigma"))
      throw ConfigError("density: truncated-gaussian needs mean and sigma");
    return InitialDensity::truncated_gaussian(support, parse_vec(j["mean"], "density.mean"),
                                              parse_vec(j["sigma"], "density.sigma"),
                                              std::move(profile));
  }
  throw ConfigError("density.kind: unknown registry name '" + kind +
                    "' (expected uniform-box | truncated-gaussian)");
}

Polynomial parse_polynomial(const json& j, int dim, const std::string& where) {
  Polynomial p;
  if (!j.is_array()) throw ConfigError(where + ": expected an array of monomials");
  for (const auto& m : j) {
    if (!m.contains("c") || !m.contains("e")) throw ConfigError(where + ": monomial needs c and e");
    Monomial mono;
    mono.coef = m["c"].get<double>();
    mono.exponents = parse_modevec(m["e"], where + ".e");
    if (mono.exponents.size() != dim) throw ConfigError(where + ": exponent dimension mismatch");
    if (mono.exponents.minCoeff() < 0) throw ConfigError(where + ": exponents must be >= 0");
    p.terms.push_back(std::move(mono));
  }
  return p;
}

Observable parse_observable(const json& j, const ActionDomain& inflated) {
  const std::string kind = j.value("kind", "");
  if (kind != "trigpoly")
    throw ConfigError("observable.kind: unknown registry name '" + kind + "' (expected trigpoly)");
  if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
    throw ConfigError("observable.terms: expected a nonempty array");
  std::vector<TrigTerm> terms;
  for (const auto& t : j["terms"]) {
    TrigTerm term;
    if (!t.contains("mode")) throw ConfigError("observable term: missing mode");
    term.mode = parse_modevec(t["mode"], "observable.mode");
    if (term.mode.size() != inflated.dim())
      throw ConfigError("observable: mode dimension mismatch with domain");
    if (t.contains("re")) term.re = parse_polynomial(t["re"], inflated.dim(), "observable.re");
    if (t.contains("im")) term.im = parse_polynomial(t["im"], inflated.dim(), "observable.im");
    if (term.re.empty() && term.im.empty())
      throw ConfigError("observable term: need re or im coefficients");
    terms.push_back(std::move(term));
  }
  return Observable::trig_polynomial(std::move(terms), inflated);
}

}  // namespace

std::vector<double> TimeGridSpec::points() const {
  std::vector<double> ts;
  if (count == 1) {
    ts.push_back(start);
    return ts;
  }
  for (int i = 0; i < count; ++i)
    ts.push_back(start + (stop - start) * static_cast<double>(i) / (count - 1));
  return ts;
}

ActionDomain RunConfig::inflated_domain() const {
  if (schedule) {
    std::vector<Vec> offsets;
    Vec acc = Vec::Zero(domain.dim());
    for (const Vec& j : schedule->jumps) {
      acc += j;
      offsets.push_back(acc);
    }
    return ActionDomain::inflate(domain, offsets);
  }
  const double b = jump_sequence().bound();
  return ActionDomain(domain.lower.array() - b, domain.upper.array() + b);
}

Backend parse_backend(const std::string& name) {
  if (name == "mc") return Backend::kMonteCarlo;
  if (name == "fourier") return Backend::kFourier;
  if (name == "both") return Backend::kBoth;
  throw ConfigError("backend: expected mc | fourier | both, got '" + name + "'");
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  if (!j.contains("schema") || !j["schema"].is_number_integer())
    throw ConfigError("config: missing integer 'schema' field");
  cfg.schema = j["schema"].get<int>();
  if (cfg.schema != 1) throw ConfigError("config: unsupported schema version");

  if (!j.contains("domain")) throw ConfigError("config: missing 'domain'");
  cfg.domain = parse_domain(j["domain"]);
  const int dim = cfg.domain.dim();

  const bool has_schedule = j.contains("schedule");
  const bool has_ap = j.contains("almost_periodic");
  if (has_schedule == has_ap)
    throw ConfigError("config: exactly one of 'schedule' / 'almost_periodic' required");
  if (has_schedule) cfg.schedule = parse_schedule(j["schedule"], dim);
  if (has_ap) {
    const json& ap = j["almost_periodic"];
    ApSequenceSpec spec;
    if (!ap.contains("amplitude") || !ap.contains("rotation"))
      throw ConfigError("almost_periodic: need amplitude and rotation");
    spec.amplitude = parse_vec(ap["amplitude"], "almost_periodic.amplitude");
    if (spec.amplitude.size() != dim)
      throw ConfigError("almost_periodic: amplitude dimension mismatch");
    spec.rotation = ap["rotation"].get<double>();
    if (!(spec.rotation > 0.0 && spec.rotation < 1.0))
      throw ConfigError("almost_periodic: rotation must lie in (0, 1)");
    cfg.almost_periodic = std::move(spec);
  }

  if (!j.contains("frequency")) throw ConfigError("config: missing 'frequency'");
  cfg.frequency = parse_frequency(j["frequency"], dim);

  if (!j.contains("density")) throw ConfigError("config: missing 'density'");
  cfg.density = parse_density(j["density"], cfg.domain);

  const ActionDomain inflated = cfg.inflated_domain();
  if (j.contains("observable"))
    cfg.observables.emplace_back(j["observable"].value("name", "G"),
                                 parse_observable(j["observable"], inflated));
  if (j.contains("observables")) {
    if (!j["observables"].is_array()) throw ConfigError("observables: expected an array");
    int index = 0;
    for (const auto& o : j["observables"]) {
      std::string name = o.value("name", "G" + std::to_string(index));
      cfg.observables.emplace_back(std::move(name), parse_observable(o, inflated));
      ++index;
    }
  }
  if (cfg.observables.empty())
    throw ConfigError("config: need 'observable' or a nonempty 'observables' list");

  cfg.backend = parse_backend(j.value("backend", "both"));

  if (j.contains("numerics")) {
    const json& n = j["numerics"];
    NumericsSpec& spec = cfg.numerics;
    spec.mode_cutoff = n.value("mode_cutoff", spec.mode_cutoff);
    spec.action_points = n.value("action_points", spec.action_points);
    spec.time_quad_order = n.value("time_quad_order", spec.time_quad_order);
    spec.grid_resolution = n.value("grid_resolution", spec.grid_resolution);
    spec.samples = n.value("samples", spec.samples);
    spec.seed = n.value("seed", spec.seed);
    spec.tolerance = n.value("tolerance", spec.tolerance);
    if (n.contains("horizons")) {
      spec.horizons.clear();
      for (const auto& h : n["horizons"]) {
        if (!h.is_number_integer() || h.get<int>() < 1)
          throw ConfigError("numerics.horizons: expected positive integers");
        spec.horizons.push_back(h.get<int>());
      }
      if (spec.horizons.empty()) throw ConfigError("numerics.horizons: expected at least one");
      for (std::size_t i = 1; i < spec.horizons.size(); ++i)
        if (spec.horizons[i] <= spec.horizons[i - 1])
          throw ConfigError("numerics.horizons: must be strictly increasing");
    }
    if (n.contains("t_grid")) {
      const json& t = n["t_grid"];
      spec.t_grid.start = t.value("start", 0.0);
      spec.t_grid.stop = t.value("stop", 5.0);
      spec.t_grid.count = t.value("count", 51);
      if (spec.t_grid.count < 1 || spec.t_grid.stop < spec.t_grid.start)
        throw ConfigError("numerics.t_grid: malformed grid");
    }
    if (n.contains("almost_period")) {
      const json& a = n["almost_period"];
      spec.ap_search.epsilon = a.value("epsilon", spec.ap_search.epsilon);
      spec.ap_search.window = a.value("window", spec.ap_search.window);
      spec.ap_search.samples = a.value("samples", spec.ap_search.samples);
    }
    if (spec.mode_cutoff < 1 || spec.action_points < 1 || spec.time_quad_order < 1 ||
        spec.grid_resolution < 1 || spec.samples < 1)
      throw ConfigError("numerics: counts and orders must be positive");
  }

  if (j.contains("output")) cfg.output_dir = j["output"].value("dir", cfg.output_dir);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace ensflow
