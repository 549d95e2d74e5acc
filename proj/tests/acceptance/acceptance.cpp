// Runs every acceptance criterion and prints one PASS/FAIL line for each.
//
// Exit status is 0 only when every criterion passes, apart from ids passed
// with --expect-fail. An expected failure that starts passing is reported and
// also fails the run, so the list cannot go stale.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weylstrip/boundary.hpp"
#include "weylstrip/dirac.hpp"
#include "weylstrip/evolution.hpp"
#include "weylstrip/linalg.hpp"
#include "weylstrip/potential.hpp"
#include "weylstrip/propagator.hpp"
#include "weylstrip/recovery.hpp"
#include "weylstrip/verify.hpp"
#include "weylstrip/weyl.hpp"

using namespace weylstrip;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Every Weyl estimate computed by any criterion, for the contraction check.
std::vector<WeylEstimate> g_estimates;

WeylEstimate record(WeylEstimate e) {
  g_estimates.push_back(e);
  return e;
}

Mat scalar(cplx c) { return Mat::Constant(1, 1, c); }

// Weyl function of the scalar constant potential q:
// i(s + iz)/q with s = sqrt(q^2 - z^2), Re s > 0. Equals i(sqrt(eta^2 + q^2) - eta)/q on the imaginary axis.
cplx constant_weyl_closed_form(cplx z, double q) {
  cplx s = std::sqrt(q * q - z * z);
  if (s.real() < 0.0) s = -s;
  return kI * (s + kI * z) / q;
}

PotentialProfile random_profile(std::uint32_t seed, double length, double spacing) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  const int n = static_cast<int>(std::round(length / spacing)) + 1;
  // Smooth the white noise with a short moving average so the spline sees a
  // bounded potential rather than a jagged one.
  std::vector<Mat> raw;
  for (int i = 0; i < n + 4; ++i) {
    Mat v(2, 1);
    v << cplx(normal(rng), normal(rng)), cplx(normal(rng), normal(rng));
    raw.push_back(v);
  }
  std::vector<double> x;
  std::vector<Mat> v;
  for (int i = 0; i < n; ++i) {
    Mat avg = (raw[i] + raw[i + 1] + raw[i + 2] + raw[i + 3] + raw[i + 4]) / 5.0;
    avg /= std::max(1.0, linalg::op_norm(avg)) * 1.1;
    x.push_back(i * spacing);
    v.push_back(avg);
  }
  return PotentialProfile::sampled(std::move(x), std::move(v));
}

Mat random_contraction(std::mt19937& rng, int rows, int cols) {
  std::normal_distribution<double> normal;
  Mat K(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) K(r, c) = cplx(normal(rng), normal(rng));
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  return K * (radius(rng) / linalg::op_norm(K));
}

Outcome criterion_1() {
  Outcome out;
  const auto start = Clock::now();
  const Signature sig{2, 1};
  const auto profile = PotentialProfile::zero(sig);
  const SpectralParameter z(0.3, 0.7);
  const Mat j = sig.j();

  WeylOptions wopts;
  wopts.integrator.tol = 1e-13;
  const auto est = record(weyl_estimate(profile, z, 30.0, wopts));
  out.require(linalg::max_abs(est.phi) <= 1e-12, "phi == 0");

  IntegratorOptions opts;
  opts.tol = 1e-13;
  opts.sample_at = {0.5, 1.0, 2.0, 3.0};
  const auto u = propagate_u(profile, z, 4.0, opts);
  double u_err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.grid[i];
    Mat exact = Mat::Zero(3, 3);
    for (int d = 0; d < 3; ++d) exact(d, d) = std::exp(kI * z.value() * j(d, d).real() * x);
    u_err = std::max(u_err, linalg::max_abs(u.true_value(i) - exact) / linalg::max_abs(exact));
  }

  const auto trace = ExactField::zero(sig).boundary_trace(2.0, 16);
  opts.sample_at = {0.5, 1.0, 1.5};
  const auto R = propagate_R(trace, z, 2.0, opts);
  double r_err = 0.0;
  const cplx z2 = z.value() * z.value();
  for (std::size_t i = 0; i < R.size(); ++i) {
    const double t = R.grid[i];
    Mat exact = Mat::Zero(3, 3);
    for (int d = 0; d < 3; ++d) exact(d, d) = std::exp(-kI * z2 * j(d, d).real() * t);
    r_err = std::max(r_err, linalg::max_abs(R.true_value(i) - exact) / linalg::max_abs(exact));
  }
  out.require(u_err <= 1e-12, "u closed form");
  out.require(r_err <= 1e-12, "R closed form");
  const double runtime = seconds_since(start);
  out.require(runtime < 1.0, "runtime < 1 s");
  out.detail << " |phi|=" << linalg::max_abs(est.phi) << " u_err=" << u_err << " R_err=" << r_err
             << " runtime=" << runtime << "s";
  return out;
}

Outcome criterion_2() {
  Outcome out;
  const auto start = Clock::now();
  const double q = 1.0;
  const auto profile = PotentialProfile::constant(scalar(q));
  WeylOptions wopts;
  wopts.stop_below = 1e-9;
  wopts.integrator.tol = 1e-11;
  double worst = 0.0, worst_unc = 0.0;
  for (double xi : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (double eta : {0.5, 1.0, 1.5, 2.0}) {
      const SpectralParameter z(xi, eta);
      const auto est = record(weyl_estimate(profile, z, 200.0, wopts));
      const cplx exact = constant_weyl_closed_form(z.value(), q);
      worst = std::max(worst, std::abs(est.phi(0, 0) - exact) / std::abs(exact));
      worst_unc = std::max(worst_unc, est.uncertainty);
    }
  }
  const auto spot = record(weyl_estimate(profile, SpectralParameter(0.0, 0.75), 200.0, wopts));
  const double spot_err = std::abs(spot.phi(0, 0) - cplx(0.0, 0.5)) / 0.5;
  out.require(worst <= 1e-6, "relative error <= 1e-6");
  out.require(worst_unc < 1e-8, "uncertainty < 1e-8");
  out.require(spot_err <= 1e-6, "phi(0.75i) = 0.5i");
  const double runtime = seconds_since(start);
  out.require(runtime < 10.0, "runtime < 10 s");
  out.detail << " max_rel_err=" << worst << " max_uncertainty=" << worst_unc << " spot_err=" << spot_err
             << " runtime=" << runtime << "s";
  return out;
}

Outcome criterion_3() {
  Outcome out;
  const auto profile = random_profile(20240611u, 12.0, 0.1);
  const SpectralParameter z(0.0, 1.0);
  std::vector<double> depths;
  for (int i = 1; i <= 40; ++i) depths.push_back(0.25 * i);
  WeylOptions wopts;
  wopts.integrator.tol = 1e-11;
  const auto traj = ball_trajectory(profile, z, depths, wopts);

  double prev_left = 1.0;  // unit ball at depth 0
  double worst_increase = 0.0, worst_right = 0.0;
  for (const auto& s : traj) {
    const double left = s.ball.left_radius();
    worst_increase = std::max(worst_increase, left - prev_left);
    prev_left = left;
    worst_right = std::max(worst_right, s.ball.right_radius());
    g_estimates.push_back({s.ball.center, z, s.x, s.uncertainty, s.ball});
  }
  const double left_at_10 = traj.back().ball.left_radius();
  out.require(worst_increase <= 1e-10, "left semi-radius monotone");
  out.require(left_at_10 < 1e-6, "left semi-radius < 1e-6 at x = 10");
  out.require(worst_right <= 1.0 * (1.0 + 1e-8), "right semi-radius bounded by its x = 0 value");

  std::mt19937 rng(7u);
  std::uniform_int_distribution<std::size_t> pick(0, traj.size() - 2);
  int nested = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    if (a == b) ++b;
    const Mat deeper_point = traj[b].ball.point(random_contraction(rng, 1, 2));
    if (traj[a].ball.contains(deeper_point, 1e-8)) ++nested;
  }
  out.require(nested == 50, "ball nesting");
  out.detail << " max_left_increase=" << worst_increase << " left(10)=" << left_at_10
             << " max_right=" << worst_right << " nested=" << nested << "/50";
  return out;
}

Outcome criterion_5() {
  Outcome out;
  const auto profile = random_profile(99u, 12.0, 0.1);
  const Signature sig{2, 1};
  const Mat j = sig.j();

  IntegratorOptions opts;
  opts.tol = 1e-12;
  for (int i = 1; i < 20; ++i) opts.sample_at.push_back(0.5 * i);
  double worst_unitary = 0.0;
  for (double re : {-2.0, 0.0, 1.5}) {
    const auto u = propagate_u(profile, SpectralParameter(re, 0.0), 10.0, opts);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Mat ui = u.true_value(i);
      worst_unitary = std::max(worst_unitary, linalg::op_norm(ui.adjoint() * j * ui - j));
    }
  }

  // u(b)* j u(b) - u(a)* j u(a) = u(a)* (M* j M - j) u(a) with M the transfer
  // matrix over [a, b], so checking M step by step is the well-scaled form of
  // Loewner monotonicity.
  double worst_eig = -std::numeric_limits<double>::infinity();
  for (double re : {-1.0, 0.0, 0.7}) {
    for (double im : {0.3, 1.0}) {
      const cplx zc(re, im);
      const Generator gen = [&](double s) { return build_G(zc, profile.value(s), sig); };
      IntegratorOptions step_opts;
      step_opts.tol = 1e-12;
      for (int i = 0; i < 20; ++i) {
        const auto seg = propagate(gen, 0.5 * i, 0.5 * (i + 1), SpectralParameter(zc), step_opts, "monotonicity");
        const Mat M = seg.true_value(seg.size() - 1);
        worst_eig = std::max(worst_eig, linalg::max_eigenvalue(M.adjoint() * j * M - j));
      }
    }
  }
  out.require(worst_unitary <= 1e-6, "real z: u* j u = j");
  out.require(worst_eig <= 1e-6, "Im z > 0: u* j u non-increasing");
  out.detail << " max||u*ju-j||=" << worst_unitary << " max_eig_increment=" << worst_eig;
  return out;
}

struct PlaneWaveSetup {
  double q = 0.3;
  double k = 1.0;
  ExactField field = ExactField::plane_wave(scalar(0.3), 1.0);
};

Outcome criterion_6() {
  Outcome out;
  const auto start = Clock::now();
  const PlaneWaveSetup pw;
  out.require(std::abs(pw.field.omega() - 0.59) <= 1e-15, "omega = 0.59");
  const auto trace = pw.field.boundary_trace(1.0, 40);
  const Signature sig{1, 1};
  WeylOptions wopts;
  wopts.stop_below = 1e-10;
  wopts.integrator.tol = 1e-11;
  double worst = 0.0;
  for (double re : {-1.0, 0.0, 1.0}) {
    for (double im : {0.5, 1.0, 2.0}) {
      const SpectralParameter z(re, im);
      const auto phi0 = record(weyl_estimate(pw.field.profile_at(0.0), z, 400.0, wopts));
      IntegratorOptions ropts;
      ropts.tol = 1e-11;
      ropts.sample_at = {0.25, 0.5};
      const auto R = propagate_R(trace, z, 1.0, ropts);
      for (std::size_t i = 0; i < R.size(); ++i) {
        const double t = R.grid[i];
        const auto evolved = evolve_weyl(phi0.phi, R.values[i], sig, t, z);
        const auto direct = record(weyl_estimate(pw.field.profile_at(t), z, 400.0, wopts));
        worst = std::max(worst, linalg::op_norm(evolved.phi_t - direct.phi));
      }
    }
  }
  out.require(worst <= 1e-4, "evolved = direct to 1e-4");
  const double runtime = seconds_since(start);
  out.require(runtime < 60.0, "runtime < 60 s");
  out.detail << " max_diff=" << worst << " runtime=" << runtime << "s";
  return out;
}

Outcome criterion_7() {
  Outcome out;
  const PlaneWaveSetup pw;
  const SpectralParameter z(0.5, 0.5);
  const double r9 = factorization_residual(pw.field, z, 1.0, 0.5, 1e-9);
  out.require(r9 <= 1e-6, "residual <= 1e-6 at tol 1e-9");
  // Least-squares slope of log(residual) against log(tol).
  std::vector<double> lx, ly;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    lx.push_back(std::log10(tol));
    ly.push_back(std::log10(factorization_residual(pw.field, z, 1.0, 0.5, tol)));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = num / den;
  out.require(slope >= 0.6 && slope <= 1.4, "log-log slope in [0.6, 1.4]");
  out.detail << " residual(1e-9)=" << r9 << " slope=" << slope;
  return out;
}

Outcome criterion_8() {
  Outcome out;
  const PlaneWaveSetup pw;
  const cplx z(0.5, 0.5);
  auto sample = [&](const ExactField& f, int refine) {
    return SolutionField::sample(f, 0.0, 2.0, 20 * refine + 1, 0.0, 1.0, 10 * refine + 1);
  };
  const auto coarse = sample(pw.field, 2), fine = sample(pw.field, 4);
  const double dnls_ratio = dnls_residual(coarse) / dnls_residual(fine);
  const double zc_ratio = zero_curvature_residual(coarse, z) / zero_curvature_residual(fine, z);
  out.require(dnls_ratio >= 3.5 && dnls_ratio <= 4.5, "dNLS refinement ratio");
  out.require(zc_ratio >= 3.5 && zc_ratio <= 4.5, "zero-curvature refinement ratio");

  // 2 v_t has magnitude 2 omega |q|; a 10% frequency error leaves 0.1 of it.
  const auto off = ExactField::plane_wave(scalar(pw.q), pw.k, 1.1 * pw.field.omega());
  const double scale = 2.0 * pw.field.omega() * pw.q;
  double min_off = std::numeric_limits<double>::infinity();
  for (int refine : {1, 2, 4, 8}) min_off = std::min(min_off, dnls_residual(sample(off, refine)) / scale);
  out.require(min_off > 0.05, "non-solution residual > 0.05 scale");
  out.detail << " dnls_ratio=" << dnls_ratio << " zc_ratio=" << zc_ratio << " non_solution_min=" << min_off;
  return out;
}

Outcome criterion_9() {
  Outcome out;
  const PlaneWaveSetup pw;
  const double omega = pw.field.omega();
  const auto trace = pw.field.boundary_trace(1.0, 40);
  const auto jet = corner_jet(trace, 12);
  double worst = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const cplx ik_pow = std::pow(kI * pw.k, k);
    for (int i = 0; i <= 200; ++i) {
      const double t = i / 200.0;
      const cplx exact = ik_pow * pw.q * std::exp(-kI * omega * t);
      worst = std::max(worst, std::abs(jet.w[static_cast<std::size_t>(k)](t)(0, 0) - exact) / std::abs(exact));
    }
  }
  out.require(worst <= 1e-8, "w_k relative error <= 1e-8 for k <= 8");

  std::vector<double> xs;
  for (int i = 0; i <= 50; ++i) xs.push_back(0.01 * i);
  const auto taylor = taylor_reconstruct(jet, xs, 12);
  // |d^13/dx^13 v| = |k|^13 |q|; the allowance covers rounding of the O(|q|) sum.
  const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * pw.q;
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double bound = pw.q * std::pow(pw.k * xs[i], 13) / std::tgamma(14.0);
    const double err = std::abs(taylor.values[i](0, 0) - pw.field.value(xs[i], 0.0)(0, 0));
    worst_excess = std::max(worst_excess, err - bound - rounding);
  }
  out.require(worst_excess <= 0.0, "Taylor error within remainder bound");
  out.detail << " max_w_rel_err=" << worst << " taylor_excess_over_bound=" << worst_excess;
  return out;
}

Outcome criterion_10() {
  Outcome out;
  const auto field = ExactField::plane_wave(scalar(0.2), 1.0);
  const auto trace = field.boundary_trace(20.0, 80);
  const SpectralParameter z(-1.0, 1.0);
  QuarterPlaneOptions qopts;
  qopts.integrator.tol = 1e-11;
  const auto qp = quarterplane_weyl(trace, z, 20.0, qopts);
  WeylOptions wopts;
  wopts.stop_below = 1e-10;
  wopts.integrator.tol = 1e-11;
  const auto direct = record(weyl_estimate(field.profile_at(0.0), z, 400.0, wopts));
  const double diff = linalg::op_norm(qp.phi0 - direct.phi);
  out.require(diff <= 1e-3, "matches direct estimate to 1e-3");
  out.require(qp.t_used <= 20.0, "within t_max = 20");
  out.require(qp.r22_min_sv >= 1.0 - 1e-8, "sigma_min(R22) >= 1 - 1e-8");

  const auto zero_trace = ExactField::zero(Signature{1, 1}).boundary_trace(20.0, 16);
  const auto qz = quarterplane_weyl(zero_trace, z, 20.0, qopts);
  out.require((qz.phi0.array() == cplx(0.0, 0.0)).all(), "zero trace gives exactly 0");
  out.detail << " diff=" << diff << " t_used=" << qp.t_used << " min_sv_R22=" << qp.r22_min_sv
             << " converged=" << qp.converged;
  return out;
}

Outcome criterion_11() {
  Outcome out;
  const int N = 1000;
  std::vector<double> ones(N + 1, 0.0), fact(N + 1), fact2(N + 1);
  for (int k = 0; k <= N; ++k) {
    fact[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);
    fact2[static_cast<std::size_t>(k)] = 2.0 * std::lgamma(k + 1.0);
  }
  const auto r1 = denjoy_carleman_diagnostic(QuasiAnalyticBounds::from_logs(ones), N);
  const double s1 = r1.partial_sums.back();
  out.require(std::abs(s1 - 1000.0) <= 1e-9, "M_k = 1: S(1000) = 1000");

  const auto r2 = denjoy_carleman_diagnostic(QuasiAnalyticBounds::from_logs(fact2), N);
  const double tail = r2.partial_sums.back() - r2.partial_sums[199];
  out.require(tail < 1e-6, "M_k = (k!)^2: partial sums settle beyond N = 200");
  out.require(!r2.divergent_trend, "M_k = (k!)^2: converged flag");

  // Growth over a decade: S(N) - S(N/10) against e ln 10.
  const auto r3 = denjoy_carleman_diagnostic(QuasiAnalyticBounds::from_logs(fact), N);
  const double growth = (r3.partial_sums.back() - r3.partial_sums[99]) / (std::exp(1.0) * std::log(10.0));
  out.require(std::abs(growth - 1.0) <= 0.05, "M_k = k!: e ln N growth within 5%");
  out.require(r3.divergent_trend && r1.divergent_trend, "divergent flags");
  out.detail << " S_1(1000)=" << s1 << " (k!)^2_tail=" << tail << " k!_growth_ratio=" << growth;
  return out;
}

Outcome criterion_4() {
  Outcome out;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& e : g_estimates) {
    const Eigen::JacobiSVD<Mat> svd(e.phi);
    worst = std::max(worst, svd.singularValues()(0) - 1.0 - e.uncertainty);
  }
  out.require(!g_estimates.empty(), "estimates collected");
  out.require(worst <= 1e-10, "sigma_max(phi) <= 1 + uncertainty + 1e-10");
  out.detail << " estimates=" << g_estimates.size() << " max_excess=" << worst;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weylstrip acceptance suite"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "Criterion ids known to fail; see the README");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());

  struct Entry {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  // Criterion 4 inspects estimates gathered by the others, so it runs last.
  const std::vector<Entry> entries{
      {1, "zero potential exactness", criterion_1},
      {2, "constant-potential Weyl oracle", criterion_2},
      {3, "matrix-ball laws", criterion_3},
      {5, "j-structure of u", criterion_5},
      {6, "Weyl function evolution", criterion_6},
      {7, "factorization residual", criterion_7},
      {8, "zero-curvature and dNLS residuals", criterion_8},
      {9, "corner-jet recursion", criterion_9},
      {10, "quarter-plane limit", criterion_10},
      {11, "Denjoy-Carleman diagnostic", criterion_11},
      {4, "non-expansiveness of estimates", criterion_4},
  };

  std::vector<std::string> lines(12);
  int unexpected = 0;
  for (const auto& e : entries) {
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail << " exception: " << ex.what();
    }
    const bool xfail = expected.count(e.id) > 0;
    std::string status = o.pass ? "PASS" : "FAIL";
    if (xfail) status += o.pass ? " (unexpected pass)" : " (expected)";
    if (o.pass == xfail) ++unexpected;
    std::ostringstream line;
    line << status << "  criterion " << e.id << ": " << e.title << " |" << o.detail.str();
    lines[static_cast<std::size_t>(e.id)] = line.str();
  }
  for (int id = 1; id <= 11; ++id) std::cout << lines[static_cast<std::size_t>(id)] << "\n";
  std::cout << (unexpected == 0 ? "acceptance: OK" : "acceptance: FAILED") << "\n";
  return unexpected == 0 ? 0 : 1;
}
