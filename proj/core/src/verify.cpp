#include "weylstrip/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "weylstrip/dirac.hpp"
#include "weylstrip/linalg.hpp"
#include "weylstrip/propagator.hpp"

namespace weylstrip {

namespace {

std::vector<double> uniform(double a, double b, int n) {
  if (n < 3) throw PreconditionError("SolutionField: need at least 3 points per axis");
  if (!(b > a)) throw PreconditionError("SolutionField: empty range");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return out;
}

void require_grid(const SolutionField& f) {
  if (f.nx() < 3 || f.nt() < 3 || f.values.size() != f.nx() * f.nt()) {
    throw PreconditionError("SolutionField: inconsistent or too coarse grid");
  }
}

Mat propagate_to(const Generator& gen, double end, SpectralParameter z, double tol, const char* stage) {
  const auto m = gen(0.0).rows();
  if (end == 0.0) return Mat::Identity(m, m);
  IntegratorOptions opts;
  opts.tol = tol;
  const auto samples = propagate(gen, 0.0, end, z, opts, stage);
  return samples.true_value(samples.size() - 1);
}

}  // namespace

ExactField ExactField::zero(const Signature& sig) {
  return {sig, Mat::Zero(sig.m1(), sig.m2()), 0.0, 0.0, true};
}

ExactField ExactField::plane_wave(const Mat& q, double k) {
  const double gamma = plane_wave_gamma(q);
  return plane_wave(q, k, 0.5 * (k * k + 2.0 * gamma * gamma));
}

ExactField ExactField::plane_wave(const Mat& q, double k, double omega) {
  plane_wave_gamma(q);
  return {Signature{static_cast<int>(q.rows()), static_cast<int>(q.cols())}, q, k, omega, false};
}

Mat ExactField::value(double x, double t) const {
  if (zero_) return q_;
  return std::exp(kI * (k_ * x - omega_ * t)) * q_;
}

Mat ExactField::v_x(double x, double t) const {
  if (zero_) return q_;
  return (kI * k_) * value(x, t);
}

PotentialProfile ExactField::profile_at(double t) const {
  if (zero_) return PotentialProfile::zero(sig_);
  return PotentialProfile::plane_wave(q_, k_, omega_, t);
}

BoundaryTrace ExactField::boundary_trace(double T, int degree) const {
  if (zero_) {
    const auto zero_fn = [m1 = sig_.m1(), m2 = sig_.m2()](long double) -> MatL { return MatL::Zero(m1, m2); };
    return ingest_boundary(zero_fn, zero_fn, sig_, T, degree);
  }
  return plane_wave_trace(q_, k_, omega_, T, degree);
}

SolutionField SolutionField::sample(const ExactField& field, double x0, double x1, int nx, double t0, double t1,
                                    int nt) {
  SolutionField out;
  out.x = uniform(x0, x1, nx);
  out.t = uniform(t0, t1, nt);
  out.values.reserve(out.x.size() * out.t.size());
  for (double t : out.t) {
    for (double x : out.x) out.values.push_back(field.value(x, t));
  }
  return out;
}

double SolutionField::h_x() const { return (x.back() - x.front()) / static_cast<double>(x.size() - 1); }
double SolutionField::h_t() const { return (t.back() - t.front()) / static_cast<double>(t.size() - 1); }

// First and second derivative along one axis at index i of n samples spaced
// h apart; second-order one-sided stencils at both ends.
namespace {

struct Derivs {
  Mat d1;
  Mat d2;
};

Derivs axis_derivs(const std::function<const Mat&(std::size_t)>& f, std::size_t i, std::size_t n, double h) {
  if (i == 0) {
    return {(-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h), (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h)};
  }
  if (i + 1 == n) {
    return {(3.0 * f(i) - 4.0 * f(i - 1) + f(i - 2)) / (2.0 * h),
            (2.0 * f(i) - 5.0 * f(i - 1) + 4.0 * f(i - 2) - f(i - 3)) / (h * h)};
  }
  return {(f(i + 1) - f(i - 1)) / (2.0 * h), (f(i + 1) - 2.0 * f(i) + f(i - 1)) / (h * h)};
}

Derivs x_derivs(const SolutionField& f, std::size_t ix, std::size_t it) {
  return axis_derivs([&](std::size_t k) -> const Mat& { return f.at(k, it); }, ix, f.nx(), f.h_x());
}

Mat t_derivative(const SolutionField& f, std::size_t ix, std::size_t it) {
  return axis_derivs([&](std::size_t k) -> const Mat& { return f.at(ix, k); }, it, f.nt(), f.h_t()).d1;
}

}  // namespace

double dnls_residual(const SolutionField& f) {
  require_grid(f);
  double worst = 0.0;
  for (std::size_t it = 0; it < f.nt(); ++it) {
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
      const Mat& v = f.at(ix, it);
      const Mat r = 2.0 * t_derivative(f, ix, it) - kI * (x_derivs(f, ix, it).d2 - 2.0 * v * v.adjoint() * v);
      worst = std::max(worst, linalg::op_norm(r));
    }
  }
  return worst;
}

double zero_curvature_residual(const SolutionField& f, cplx z) {
  require_grid(f);
  const Signature sig{static_cast<int>(f.values[0].rows()), static_cast<int>(f.values[0].cols())};
  const Mat j = sig.j();
  double worst = 0.0;
  for (std::size_t it = 0; it < f.nt(); ++it) {
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
      const Mat& v = f.at(ix, it);
      const Derivs dx = x_derivs(f, ix, it);
      const Mat V = assemble_V(v, sig);
      const Mat Vx = assemble_V(dx.d1, sig);
      const Mat Vxx = assemble_V(dx.d2, sig);
      const Mat G = build_G(z, v, sig);
      const Mat F = build_F(z, v, dx.d1, sig);
      // G is affine in V, so G_t = i j V_t.
      const Mat Gt = kI * (j * assemble_V(t_derivative(f, ix, it), sig));
      const Mat Fx = -kI * (z * j * Vx - 0.5 * (kI * Vxx - j * (Vx * V + V * Vx)));
      const Mat r = Gt - Fx + G * F - F * G;
      worst = std::max(worst, linalg::op_norm(r));
    }
  }
  return worst;
}

double factorization_residual(const ExactField& field, SpectralParameter z, double x, double t, double tol) {
  if (x < 0.0 || t < 0.0) throw PreconditionError("factorization_residual: x and t must be nonnegative");
  const Signature sig = field.signature();
  const cplx zv = z.value();

  const Generator u_t = [&](double s) { return build_G(zv, field.value(s, t), sig); };
  const Generator u_0 = [&](double s) { return build_G(zv, field.value(s, 0.0), sig); };
  const Generator R_0 = [&](double s) { return build_F(zv, field.value(0.0, s), field.v_x(0.0, s), sig); };
  const Generator R_x = [&](double s) { return build_F(zv, field.value(x, s), field.v_x(x, s), sig); };

  const Mat lhs = propagate_to(u_t, x, z, tol, "factorization u(x,t)") *
                  propagate_to(R_0, t, z, tol, "factorization R(t)");
  const Mat rhs = propagate_to(R_x, t, z, tol, "factorization R(x,t)") *
                  propagate_to(u_0, x, z, tol, "factorization u(x,0)");
  return linalg::op_norm(lhs - rhs) / linalg::op_norm(lhs);
}

}  // namespace weylstrip
