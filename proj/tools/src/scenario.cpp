#include "weylstrip_cli/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "weylstrip/boundary.hpp"
#include "weylstrip/evolution.hpp"
#include "weylstrip/linalg.hpp"
#include "weylstrip/potential.hpp"
#include "weylstrip/propagator.hpp"
#include "weylstrip/recovery.hpp"
#include "weylstrip/verify.hpp"
#include "weylstrip/weyl.hpp"

namespace weylstrip::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kDefaultBoundaryDegree = 40;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": not finite");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

double positive(const json& j, const std::string& where) {
  const double v = number(j, where);
  if (!(v > 0.0)) throw ConfigError(where + ": must be positive");
  return v;
}

cplx complex_value(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": complex numbers are [re, im] arrays");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

Mat matrix_value(const json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw ConfigError(where + ": expected " + std::to_string(rows) + " rows");
  }
  Mat out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ConfigError(where + ": row " + std::to_string(r) + " needs " + std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      out(r, c) = complex_value(row[static_cast<std::size_t>(c)], where + "[" + std::to_string(r) + "][" +
                                                                      std::to_string(c) + "]");
    }
  }
  return out;
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string kind_of(const json& desc, const std::string& where) {
  if (!desc.contains("kind") || !desc["kind"].is_string()) throw ConfigError(where + ".kind: missing");
  return desc["kind"].get<std::string>();
}

void validate_potential(const json& desc, const Signature& sig) {
  const std::string kind = kind_of(desc, "potential");
  if (kind == "zero") {
    check_keys(desc, {"kind"}, "potential");
  } else if (kind == "constant") {
    check_keys(desc, {"kind", "v"}, "potential");
    matrix_value(desc.at("v"), sig.m1(), sig.m2(), "potential.v");
  } else if (kind == "plane_wave") {
    check_keys(desc, {"kind", "q", "k", "omega"}, "potential");
    if (!desc.contains("q") || !desc.contains("k")) throw ConfigError("potential: plane_wave needs q and k");
    matrix_value(desc["q"], sig.m1(), sig.m2(), "potential.q");
    number(desc["k"], "potential.k");
    if (desc.contains("omega")) number(desc["omega"], "potential.omega");
  } else if (kind == "sampled") {
    check_keys(desc, {"kind", "x", "v"}, "potential");
    if (!desc.contains("x") || !desc.contains("v") || !desc["x"].is_array() || !desc["v"].is_array() ||
        desc["x"].size() != desc["v"].size() || desc["x"].size() < 2) {
      throw ConfigError("potential: sampled needs equal-length x and v arrays with at least 2 entries");
    }
    for (std::size_t i = 0; i < desc["x"].size(); ++i) {
      number(desc["x"][i], "potential.x");
      matrix_value(desc["v"][i], sig.m1(), sig.m2(), "potential.v[" + std::to_string(i) + "]");
    }
  } else {
    throw ConfigError("potential.kind: unknown kind '" + kind + "'");
  }
}

void validate_boundary(const json& desc, const Signature& sig) {
  const std::string kind = kind_of(desc, "boundary");
  if (kind == "zero") {
    check_keys(desc, {"kind", "T", "degree"}, "boundary");
  } else if (kind == "plane_wave") {
    check_keys(desc, {"kind", "q", "k", "omega", "T", "degree"}, "boundary");
    if (!desc.contains("q") || !desc.contains("k")) throw ConfigError("boundary: plane_wave needs q and k");
    matrix_value(desc["q"], sig.m1(), sig.m2(), "boundary.q");
    number(desc["k"], "boundary.k");
    if (desc.contains("omega")) number(desc["omega"], "boundary.omega");
  } else if (kind == "csv") {
    check_keys(desc, {"kind", "path", "T", "degree"}, "boundary");
    if (!desc.contains("path") || !desc["path"].is_string()) throw ConfigError("boundary.path: missing");
  } else {
    throw ConfigError("boundary.kind: unknown kind '" + kind + "'");
  }
  if (desc.contains("T")) positive(desc["T"], "boundary.T");
  if (desc.contains("degree") && integer(desc["degree"], "boundary.degree") < 4) {
    throw ConfigError("boundary.degree: must be at least 4");
  }
}

ExactField exact_field(const json& desc, const Signature& sig) {
  const std::string kind = desc["kind"].get<std::string>();
  if (kind == "zero") return ExactField::zero(sig);
  if (kind == "plane_wave") {
    const Mat q = matrix_value(desc["q"], sig.m1(), sig.m2(), "q");
    const double k = desc["k"].get<double>();
    return desc.contains("omega") ? ExactField::plane_wave(q, k, desc["omega"].get<double>())
                                  : ExactField::plane_wave(q, k);
  }
  throw ConfigError("this mode needs a zero or plane_wave field, got '" + kind + "'");
}

PotentialProfile make_profile(const json& desc, const Signature& sig) {
  const std::string kind = desc["kind"].get<std::string>();
  if (kind == "constant") return PotentialProfile::constant(matrix_value(desc["v"], sig.m1(), sig.m2(), "v"));
  if (kind == "sampled") {
    std::vector<double> x;
    std::vector<Mat> v;
    for (std::size_t i = 0; i < desc["x"].size(); ++i) {
      x.push_back(desc["x"][i].get<double>());
      v.push_back(matrix_value(desc["v"][i], sig.m1(), sig.m2(), "v"));
    }
    return PotentialProfile::sampled(std::move(x), std::move(v));
  }
  return exact_field(desc, sig).profile_at(0.0);
}

BoundaryTrace make_trace(const json& desc, const Signature& sig, double t_max) {
  const std::string kind = desc["kind"].get<std::string>();
  const double T = desc.contains("T") ? desc["T"].get<double>() : t_max;
  const int degree = desc.contains("degree") ? desc["degree"].get<int>() : kDefaultBoundaryDegree;
  if (kind == "csv") {
    const auto samples = read_boundary_csv(desc["path"].get<std::string>(), sig);
    return ingest_boundary(samples, T, degree);
  }
  return exact_field(desc, sig).boundary_trace(T, degree);
}

double sigma_max(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

std::vector<double> time_grid(const Grids& g) {
  std::vector<double> out;
  for (int k = 1; k <= g.steps; ++k) out.push_back(g.t_max * k / g.steps);
  return out;
}

WeylOptions weyl_options(const ScenarioConfig& c) {
  WeylOptions o;
  o.integrator.tol = c.tol.ode_tol;
  o.stop_below = c.stop_below;
  return o;
}

std::vector<Record> run_weyl(const ScenarioConfig& c, const PotentialProfile& profile, cplx zc) {
  const SpectralParameter z(zc);
  const auto opts = weyl_options(c);
  auto make = [&](double x, const Mat& phi, double unc) {
    Record r{zc, x, phi, unc, {}, {}};
    r.residuals = {{"sigma_max", sigma_max(phi)}};
    r.flags = {{"converged", unc <= c.tol.accept_tol}, {"contraction", sigma_max(phi) <= 1.0 + unc + 1e-10}};
    return r;
  };
  if (c.grids.steps == 1) {
    const auto est = weyl_estimate(profile, z, c.grids.x_max, opts);
    return {make(est.x_max, est.phi, est.uncertainty)};
  }
  std::vector<double> depths;
  for (int k = 1; k <= c.grids.steps; ++k) depths.push_back(c.grids.x_max * k / c.grids.steps);
  std::vector<Record> out;
  for (const auto& s : ball_trajectory(profile, z, depths, opts)) out.push_back(make(s.x, s.ball.center, s.uncertainty));
  return out;
}

struct EvolveContext {
  ExactField field;
  BoundaryTrace trace;
  AdmissibleDomains domains;
};

std::vector<Record> run_evolve(const ScenarioConfig& c, const EvolveContext& ctx, cplx zc) {
  const SpectralParameter z(zc);
  const auto wopts = weyl_options(c);
  const auto phi0 = weyl_estimate(ctx.field.profile_at(0.0), z, c.grids.x_max, wopts);
  IntegratorOptions ropts;
  ropts.tol = c.tol.ode_tol;
  const auto times = time_grid(c.grids);
  ropts.sample_at = times;
  const auto R = propagate_R(ctx.trace, z, c.grids.t_max, ropts);
  std::vector<Record> out;
  for (std::size_t i = 1; i < R.size(); ++i) {
    const double t = R.grid[i];
    const auto evolved = evolve_weyl(phi0.phi, R.values[i], c.sig, t, z);
    const auto direct = weyl_estimate(ctx.field.profile_at(t), z, c.grids.x_max, wopts);
    const double deviation = linalg::op_norm(evolved.phi_t - direct.phi);
    Record r{zc, t, evolved.phi_t, direct.uncertainty, {}, {}};
    r.residuals = {{"direct_deviation", deviation},
                   {"denominator_condition", evolved.denominator_condition},
                   {"initial_uncertainty", phi0.uncertainty}};
    r.flags = {{"within_accept", deviation <= c.tol.accept_tol},
               {"in_omega_t", ctx.domains.in_omega_t(z)},
               {"in_omega_hat_t", ctx.domains.in_omega_hat_t(z)},
               {"exceptional", evolved.exceptional}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Record> run_quarterplane(const ScenarioConfig& c, const BoundaryTrace& trace,
                                     const AdmissibleDomains& domains, cplx zc) {
  const SpectralParameter z(zc);
  if (!domains.in_omega(z)) {
    Record r{zc, 0.0, Mat(), kNaN, {}, {{"in_omega", false}, {"converged", false}}};
    return {r};
  }
  QuarterPlaneOptions opts;
  opts.integrator.tol = c.tol.ode_tol;
  const auto qp = quarterplane_weyl(trace, z, c.grids.t_max, opts);
  Record r{zc, qp.t_used, qp.phi0, kNaN, {}, {}};
  r.residuals = {{"r_residual", qp.residual}, {"r22_min_sv", qp.r22_min_sv}, {"window", qp.window}};
  r.flags = {{"in_omega", true}, {"converged", qp.converged}};
  return {r};
}

std::vector<Record> run_verify(const ScenarioConfig& c, const ExactField& field, cplx zc) {
  const int n = c.grids.steps;
  const auto coarse = SolutionField::sample(field, 0.0, c.grids.x_max, n + 1, 0.0, c.grids.t_max, n + 1);
  const auto fine = SolutionField::sample(field, 0.0, c.grids.x_max, 2 * n + 1, 0.0, c.grids.t_max, 2 * n + 1);
  const double zc_h = zero_curvature_residual(coarse, zc);
  const double zc_h2 = zero_curvature_residual(fine, zc);
  const double fact = factorization_residual(field, SpectralParameter(zc), c.grids.x_max, c.grids.t_max, c.tol.ode_tol);
  Record r{zc, c.grids.x_max, Mat(), kNaN, {}, {}};
  r.residuals = {{"zero_curvature_h", zc_h},
                 {"zero_curvature_h2", zc_h2},
                 {"refinement_ratio", zc_h2 > 0.0 ? zc_h / zc_h2 : kNaN},
                 {"factorization", fact}};
  r.flags = {{"factorization_ok", fact <= c.tol.accept_tol}};
  return {r};
}

/// Runs task(i) for i < n on up to `workers` threads; results keep index order
/// and the first failing index's exception is rethrown.
std::vector<std::vector<Record>> parallel_map(std::size_t n, int workers,
                                              const std::function<std::vector<Record>(std::size_t)>& task) {
  std::vector<std::vector<Record>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, workers));
  if (count == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(count, n); ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void add_summary_maxima(Report& report) {
  double max_unc = kNaN;
  for (const auto& r : report.records) {
    if (!std::isnan(r.uncertainty)) max_unc = std::isnan(max_unc) ? r.uncertainty : std::max(max_unc, r.uncertainty);
  }
  report.summary.insert(report.summary.begin(), {"max_uncertainty", max_unc});
  std::vector<std::string> names;
  for (const auto& r : report.records) {
    for (const auto& [name, _] : r.residuals) {
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
  }
  for (const auto& name : names) {
    double worst = kNaN;
    for (const auto& r : report.records) {
      for (const auto& [n, v] : r.residuals) {
        if (n == name && !std::isnan(v)) worst = std::isnan(worst) ? v : std::max(worst, v);
      }
    }
    report.summary.emplace_back("max_" + name, worst);
  }
}

std::string csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "weyl") return Mode::weyl;
  if (name == "evolve") return Mode::evolve;
  if (name == "quarterplane") return Mode::quarterplane;
  if (name == "recover") return Mode::recover;
  if (name == "verify") return Mode::verify;
  throw ConfigError("mode: unknown mode '" + name + "'");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::weyl: return "weyl";
    case Mode::evolve: return "evolve";
    case Mode::quarterplane: return "quarterplane";
    case Mode::recover: return "recover";
    case Mode::verify: return "verify";
  }
  return "unknown";
}

ScenarioConfig parse_config(const json& doc, const std::optional<std::string>& mode_override) {
  check_keys(doc, {"mode", "sig", "potential", "boundary", "z_list", "grids", "tolerances", "stop_below",
                   "jet_order", "output"},
             "config");
  ScenarioConfig c;
  c.source = doc;
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ConfigError("mode: expected a string");
    c.mode = parse_mode(doc["mode"].get<std::string>());
    if (mode_override && parse_mode(*mode_override) != c.mode) {
      throw ConfigError("mode: command line says '" + *mode_override + "' but config says '" + mode_name(c.mode) + "'");
    }
  } else if (mode_override) {
    c.mode = parse_mode(*mode_override);
  } else {
    throw ConfigError("mode: missing");
  }

  if (doc.contains("sig")) {
    const json& s = doc["sig"];
    check_keys(s, {"m1", "m2"}, "sig");
    if (!s.contains("m1") || !s.contains("m2")) throw ConfigError("sig: needs m1 and m2");
    const int m1 = integer(s["m1"], "sig.m1"), m2 = integer(s["m2"], "sig.m2");
    if (m1 < 1 || m2 < 1) throw ConfigError("sig: m1 and m2 must be positive");
    c.sig = Signature(m1, m2);
  }

  if (doc.contains("grids")) {
    const json& g = doc["grids"];
    check_keys(g, {"x_max", "t_max", "steps"}, "grids");
    if (g.contains("x_max")) c.grids.x_max = positive(g["x_max"], "grids.x_max");
    if (g.contains("t_max")) c.grids.t_max = positive(g["t_max"], "grids.t_max");
    if (g.contains("steps")) c.grids.steps = integer(g["steps"], "grids.steps");
    if (c.grids.steps < 1) throw ConfigError("grids.steps: must be at least 1");
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    check_keys(t, {"ode_tol", "accept_tol"}, "tolerances");
    if (t.contains("ode_tol")) c.tol.ode_tol = positive(t["ode_tol"], "tolerances.ode_tol");
    if (t.contains("accept_tol")) c.tol.accept_tol = positive(t["accept_tol"], "tolerances.accept_tol");
  }
  if (doc.contains("stop_below")) c.stop_below = positive(doc["stop_below"], "stop_below");
  if (doc.contains("jet_order")) c.jet_order = integer(doc["jet_order"], "jet_order");
  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path: expected a string");
      c.out_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("output.format: expected a string");
      c.format = o["format"].get<std::string>();
    }
  }
  if (c.format != "json" && c.format != "csv") throw ConfigError("output.format: must be json or csv");

  if (doc.contains("z_list")) {
    if (!doc["z_list"].is_array()) throw ConfigError("z_list: expected an array");
    for (std::size_t i = 0; i < doc["z_list"].size(); ++i) {
      const cplx z = complex_value(doc["z_list"][i], "z_list[" + std::to_string(i) + "]");
      const bool ok = c.mode == Mode::verify ? z.imag() >= 0.0 : z.imag() > 0.0;
      if (!ok) {
        throw ConfigError("z_list[" + std::to_string(i) + "]: Im z must be " +
                          (c.mode == Mode::verify ? ">= 0" : "> 0"));
      }
      c.z_list.push_back(z);
    }
  }

  if (doc.contains("potential")) {
    validate_potential(doc["potential"], c.sig);
    c.potential = doc["potential"];
  }
  if (doc.contains("boundary")) {
    if (c.mode == Mode::evolve) {
      // The trace comes from the exact field; only its degree is configurable.
      check_keys(doc["boundary"], {"degree"}, "boundary");
      if (doc["boundary"].contains("degree") && integer(doc["boundary"]["degree"], "boundary.degree") < 4) {
        throw ConfigError("boundary.degree: must be at least 4");
      }
    } else {
      validate_boundary(doc["boundary"], c.sig);
    }
    c.boundary = doc["boundary"];
  }
  switch (c.mode) {
    case Mode::weyl:
      if (!c.potential) throw ConfigError("potential: required for mode weyl");
      break;
    case Mode::evolve:
    case Mode::verify: {
      if (!c.potential) throw ConfigError("potential: required for mode " + mode_name(c.mode));
      const std::string kind = (*c.potential)["kind"].get<std::string>();
      if (kind != "zero" && kind != "plane_wave") {
        throw ConfigError("potential.kind: mode " + mode_name(c.mode) + " needs zero or plane_wave");
      }
      if (c.mode == Mode::verify && c.grids.steps < 2) throw ConfigError("grids.steps: verify needs at least 2");
      break;
    }
    case Mode::quarterplane:
    case Mode::recover:
      if (!c.boundary) throw ConfigError("boundary: required for mode " + mode_name(c.mode));
      break;
  }
  if (c.mode == Mode::recover && c.jet_order < 2) throw ConfigError("jet_order: must be at least 2");
  return c;
}

ScenarioConfig load_config(const std::string& path, const std::optional<std::string>& mode_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(doc, mode_override);
}

Report run_scenario(const ScenarioConfig& c, int workers) {
  Report report;
  report.config = c;
  spdlog::info("mode {} with {} spectral points on {} workers", mode_name(c.mode), c.z_list.size(), workers);
  std::function<std::vector<Record>(std::size_t)> task;

  switch (c.mode) {
    case Mode::weyl: {
      const auto profile = make_profile(*c.potential, c.sig);
      task = [&c, profile](std::size_t i) { return run_weyl(c, profile, c.z_list[i]); };
      break;
    }
    case Mode::evolve: {
      const auto field = exact_field(*c.potential, c.sig);
      const int degree = c.boundary && c.boundary->contains("degree") ? (*c.boundary)["degree"].get<int>()
                                                                      : kDefaultBoundaryDegree;
      auto trace = field.boundary_trace(c.grids.t_max, degree);
      DomainBounds bounds;
      bounds.M = field.is_zero() ? 0.0 : linalg::op_norm(field.value(0.0, 0.0));
      bounds.M0 = bounds.Mhat = trace.sup_v0();
      bounds.Mbreve = trace.sup_v1();
      const EvolveContext ctx{field, trace, admissible_domains(bounds, c.grids.t_max)};
      report.summary.emplace_back("boundary_fit_residual", trace.fit_residual());
      task = [&c, ctx](std::size_t i) { return run_evolve(c, ctx, c.z_list[i]); };
      break;
    }
    case Mode::quarterplane: {
      const auto trace = make_trace(*c.boundary, c.sig, c.grids.t_max);
      DomainBounds bounds;
      bounds.M0 = bounds.Mhat = trace.sup_v0();
      bounds.Mbreve = trace.sup_v1();
      const auto domains = admissible_domains(bounds, trace.T());
      report.summary.emplace_back("boundary_fit_residual", trace.fit_residual());
      task = [&c, trace, domains](std::size_t i) { return run_quarterplane(c, trace, domains, c.z_list[i]); };
      break;
    }
    case Mode::recover: {
      const auto trace = make_trace(*c.boundary, c.sig, c.grids.t_max);
      const auto jet = corner_jet(trace, c.jet_order);
      for (int k = 0; k <= jet.K; ++k) {
        Record r{cplx{}, static_cast<double>(k), jet.jet0[static_cast<std::size_t>(k)], kNaN, {}, {}};
        r.residuals = {{"series_max_coeff", static_cast<double>(jet.w[static_cast<std::size_t>(k)].max_coeff())}};
        report.records.push_back(std::move(r));
      }
      report.summary.emplace_back("boundary_fit_residual", trace.fit_residual());
      report.summary.emplace_back("recursion_residual", jet.recursion_residual());
      add_summary_maxima(report);
      return report;
    }
    case Mode::verify: {
      const auto field = exact_field(*c.potential, c.sig);
      const int n = c.grids.steps;
      const double coarse =
          dnls_residual(SolutionField::sample(field, 0.0, c.grids.x_max, n + 1, 0.0, c.grids.t_max, n + 1));
      const double fine =
          dnls_residual(SolutionField::sample(field, 0.0, c.grids.x_max, 2 * n + 1, 0.0, c.grids.t_max, 2 * n + 1));
      report.summary.emplace_back("dnls_h", coarse);
      report.summary.emplace_back("dnls_h2", fine);
      report.summary.emplace_back("dnls_refinement_ratio", fine > 0.0 ? coarse / fine : kNaN);
      task = [&c, field](std::size_t i) { return run_verify(c, field, c.z_list[i]); };
      break;
    }
  }

  for (auto& records : parallel_map(c.z_list.size(), workers, task)) {
    for (auto& r : records) report.records.push_back(std::move(r));
  }
  add_summary_maxima(report);
  return report;
}

json report_json(const Report& report) {
  json out;
  out["config"] = report.config.source;
  out["mode"] = mode_name(report.config.mode);
  json records = json::array();
  for (const auto& r : report.records) {
    json rec;
    rec["z"] = complex_json(r.z);
    rec["coord"] = r.coord;
    rec["phi"] = r.phi.size() ? matrix_json(r.phi) : json(nullptr);
    rec["uncertainty"] = std::isnan(r.uncertainty) ? json(nullptr) : json(r.uncertainty);
    json residuals = json::object();
    for (const auto& [name, v] : r.residuals) residuals[name] = std::isnan(v) ? json(nullptr) : json(v);
    rec["residuals"] = residuals;
    json flags = json::object();
    for (const auto& [name, v] : r.flags) flags[name] = v;
    rec["flags"] = flags;
    records.push_back(std::move(rec));
  }
  out["records"] = records;
  json summary = json::object();
  for (const auto& [name, v] : report.summary) summary[name] = std::isnan(v) ? json(nullptr) : json(v);
  out["summary"] = summary;
  return out;
}

std::string report_csv(const Report& report) {
  const Signature& sig = report.config.sig;
  // Jets are m1 x m2 like v; Weyl values are m2 x m1.
  const bool jet = report.config.mode == Mode::recover;
  const int rows = jet ? sig.m1() : sig.m2(), cols = jet ? sig.m2() : sig.m1();
  std::ostringstream s;
  s << "z_re,z_im,coord";
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) s << ",phi_" << r << "_" << c << "_re,phi_" << r << "_" << c << "_im";
  s << ",uncertainty,flags\n";
  for (const auto& rec : report.records) {
    s << csv_number(rec.z.real()) << "," << csv_number(rec.z.imag()) << "," << csv_number(rec.coord);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const cplx v = rec.phi.size() ? rec.phi(r, c) : cplx(kNaN, kNaN);
        s << "," << csv_number(v.real()) << "," << csv_number(v.imag());
      }
    }
    s << "," << csv_number(rec.uncertainty) << ",";
    bool first = true;
    for (const auto& [name, v] : rec.flags) {
      if (!v) continue;
      s << (first ? "" : ";") << name;
      first = false;
    }
    s << "\n";
  }
  return s.str();
}

void emit_report(const Report& report, const std::string& format, const std::string& path) {
  if (format != "json" && format != "csv") throw ConfigError("format: must be json or csv");
  const std::string text = format == "json" ? report_json(report).dump(2) + "\n" : report_csv(report);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalError("emit_report", "cannot write '" + path + "'");
  out << text;
  if (!out) throw NumericalError("emit_report", "write to '" + path + "' failed");
}

}  // namespace weylstrip::cli
