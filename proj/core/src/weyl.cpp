#include "weylstrip/weyl.hpp"

#include <algorithm>
#include <cmath>

#include "weylstrip/dirac.hpp"
#include "weylstrip/linalg.hpp"

namespace weylstrip {

namespace {

constexpr double kSchurClip = 1e-10;

ScaledCoefficient identity_coefficient(int m) { return {Mat::Identity(m, m), 0.0}; }

Mat inverse_sqrt_hpd(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(linalg::hermitian_part(a));
  const Eigen::VectorXd d = es.eigenvalues().cwiseInverse().cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

// Walks the depth axis in segments with Im(z) * dx <= segment_width, composing
// the segment propagators and their inverses.
class Sweep {
 public:
  Sweep(const PotentialProfile& profile, SpectralParameter z, const WeylOptions& options)
      : sig_(profile.signature()),
        z_(z),
        options_(options),
        generator_([&profile, zv = z.value(), sig = profile.signature()](double x) {
          return build_G(zv, profile.value(x), sig);
        }),
        u_(identity_coefficient(sig_.m())),
        u_inv_(identity_coefficient(sig_.m())) {
    options_.integrator.sample_at.clear();
    options_.integrator.record_every_step = false;
    if (!(options_.segment_width > 0.0)) throw PreconditionError("weyl: segment_width must be positive");
  }

  double x() const { return x_; }
  const ScaledCoefficient& u() const { return u_; }
  const ScaledCoefficient& u_inv() const { return u_inv_; }

  double segment_length() const { return options_.segment_width / z_.im(); }

  void advance_to(double target) {
    while (x_ < target) {
      const double next = std::min(target, x_ + segment_length());
      step(next);
    }
  }

  void step(double next) {
    const auto seg = propagate(generator_, x_, next, z_, options_.integrator, "weyl_estimate");
    u_ = lft_compose(u_, {seg.values.back(), seg.scale_log.back()});
    u_inv_ = lft_compose({seg.inverse_values.back(), seg.inverse_scale_log.back()}, u_inv_);
    x_ = next;
  }

  MatrixBall ball() const { return ball_from_propagator(u_, u_inv_, x_, z_, sig_); }
  double uncertainty() const { return std::exp(log_uncertainty(u_, u_inv_, sig_)); }

 private:
  Signature sig_;
  SpectralParameter z_;
  WeylOptions options_;
  Generator generator_;
  ScaledCoefficient u_;
  ScaledCoefficient u_inv_;
  double x_ = 0.0;
};

}  // namespace

double MatrixBall::left_radius() const { return 1.0 / std::sqrt(linalg::min_eigenvalue(left_weight)); }

double MatrixBall::right_radius() const { return std::sqrt(std::max(0.0, linalg::max_eigenvalue(right_schur))); }

Mat MatrixBall::point(const Mat& K) const {
  return center + inverse_sqrt_hpd(left_weight) * K * linalg::psd_sqrt(right_schur);
}

bool MatrixBall::contains(const Mat& phi, double tol) const {
  const Mat d = phi - center;
  const Mat gap = right_schur - d.adjoint() * left_weight * d;
  return linalg::min_eigenvalue(gap) >= -tol * std::max(linalg::op_norm(right_schur), 1e-300);
}

Mat moebius_apply(const Mat& coeff, const Mat& P) {
  if (coeff.rows() != coeff.cols() || coeff.cols() != P.rows() || P.cols() >= P.rows()) {
    throw DimensionError("moebius_apply: coeff must be m x m and P m x m1 with m1 < m");
  }
  const Mat cp = coeff * P;
  const auto m1 = P.cols();
  return linalg::right_divide(cp.bottomRows(cp.rows() - m1), cp.topRows(m1), "moebius_apply");
}

bool property_j_check(const Mat& P, const Signature& sig) {
  if (P.rows() != sig.m() || P.cols() != sig.m1()) throw DimensionError("property_j_check: P must be m x m1");
  constexpr double tol = 1e-12;
  return linalg::min_eigenvalue(P.adjoint() * P) > tol &&
         linalg::min_eigenvalue(P.adjoint() * sig.j() * P) >= -tol;
}

MatrixBall ball_from_H(const Mat& H, const Signature& sig) {
  if (H.rows() != sig.m() || H.cols() != sig.m()) throw DimensionError("ball_from_H: H must be m x m");
  const int m1 = sig.m1(), m2 = sig.m2();
  const Mat h11 = H.topLeftCorner(m1, m1);
  const Mat h12 = H.topRightCorner(m1, m2);
  const Mat h21 = H.bottomLeftCorner(m2, m1);
  const Mat h22 = H.bottomRightCorner(m2, m2);
  if (linalg::max_eigenvalue(h22) >= 0.0) throw PreconditionError("ball_from_H: H22 is not negative definite");

  Eigen::LDLT<Mat> neg(-linalg::hermitian_part(h22));
  const Mat h22_inv_h21 = -neg.solve(h21);  // H22^{-1} H21
  MatrixBall ball;
  ball.center = -h22_inv_h21;
  ball.left_weight = -linalg::hermitian_part(h22);
  Mat schur = linalg::hermitian_part(h11 - h12 * h22_inv_h21);
  Eigen::SelfAdjointEigenSolver<Mat> es(schur);
  if (es.eigenvalues()(0) < -kSchurClip) {
    throw NumericalError("ball_from_H", "Schur complement has eigenvalue " + std::to_string(es.eigenvalues()(0)));
  }
  ball.right_schur =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().adjoint();
  return ball;
}

bool ball_membership(const Mat& phi, const Mat& H, const Signature& sig, double tol) {
  if (phi.rows() != sig.m2() || phi.cols() != sig.m1()) throw DimensionError("ball_membership: phi must be m2 x m1");
  Mat p(sig.m(), sig.m1());
  p << Mat::Identity(sig.m1(), sig.m1()), phi;
  return linalg::min_eigenvalue(p.adjoint() * H * p) >= -tol;
}

ScaledCoefficient lft_compose(const ScaledCoefficient& first, const ScaledCoefficient& second) {
  Mat product = second.coeff * first.coeff;
  const double m = linalg::max_abs(product);
  if (!(m > 0.0) || !std::isfinite(m)) throw NumericalError("lft_compose", "degenerate product");
  product /= m;
  return {std::move(product), first.log_scale + second.log_scale + std::log(m)};
}

double log_uncertainty(const ScaledCoefficient& u, const ScaledCoefficient& u_inv, const Signature& sig) {
  const Mat j = sig.j();
  const Mat h = u.coeff.adjoint() * j * u.coeff;
  const Mat k = u_inv.coeff * j * u_inv.coeff.adjoint();
  const double w_min = linalg::min_eigenvalue(-h.bottomRightCorner(sig.m2(), sig.m2()));
  const double k_min = linalg::min_eigenvalue(k.topLeftCorner(sig.m1(), sig.m1()));
  if (!(w_min > 0.0) || !(k_min > 0.0)) {
    throw NumericalError("weyl_estimate", "ball parameters lost definiteness");
  }
  return -0.5 * std::log(w_min) - 0.5 * std::log(k_min) - u.log_scale - u_inv.log_scale;
}

MatrixBall ball_from_propagator(const ScaledCoefficient& u, const ScaledCoefficient& u_inv, double x,
                                SpectralParameter z, const Signature& sig) {
  const int m1 = sig.m1(), m2 = sig.m2();
  const Mat j = sig.j();
  // H = u* j u is accurate in its growing blocks; its Schur complement is not,
  // so S and the center come from H^{-1} = u^{-1} j u^{-*}.
  const Mat h = u.coeff.adjoint() * j * u.coeff;
  const Mat k = linalg::hermitian_part(u_inv.coeff * j * u_inv.coeff.adjoint());
  const Mat k11 = k.topLeftCorner(m1, m1);
  const double shift = 2.0 * z.im() * x;

  MatrixBall ball;
  ball.center = linalg::right_divide(k.bottomLeftCorner(m2, m1), k11, "ball_from_propagator");
  ball.left_weight = -linalg::hermitian_part(h.bottomRightCorner(m2, m2)) * std::exp(shift + 2.0 * u.log_scale);
  Eigen::SelfAdjointEigenSolver<Mat> es(k11);
  if (!(es.eigenvalues()(0) > 0.0)) throw NumericalError("ball_from_propagator", "K11 is not positive definite");
  ball.right_schur = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                     es.eigenvectors().adjoint() * std::exp(shift - 2.0 * u_inv.log_scale);
  return ball;
}

WeylEstimate weyl_estimate(const PotentialProfile& profile, SpectralParameter z, double x_max,
                           const WeylOptions& options) {
  z.require_upper("weyl_estimate");
  if (!(x_max > 0.0)) throw PreconditionError("weyl_estimate: x_max must be positive");
  Sweep sweep(profile, z, options);
  while (sweep.x() < x_max) {
    sweep.step(std::min(x_max, sweep.x() + sweep.segment_length()));
    if (options.stop_below && sweep.uncertainty() < *options.stop_below) break;
  }
  WeylEstimate est;
  est.z = z;
  est.x_max = sweep.x();
  est.uncertainty = sweep.uncertainty();
  est.ball = sweep.ball();
  est.phi = est.ball.center;
  if (options.uncertainty_cap && !(est.uncertainty <= *options.uncertainty_cap)) {
    throw NumericalError("weyl_estimate", "no convergence: uncertainty " + std::to_string(est.uncertainty) +
                                              " above cap at x=" + std::to_string(est.x_max));
  }
  return est;
}

std::vector<BallSample> ball_trajectory(const PotentialProfile& profile, SpectralParameter z,
                                        const std::vector<double>& depths, const WeylOptions& options) {
  z.require_upper("ball_trajectory");
  Sweep sweep(profile, z, options);
  std::vector<BallSample> out;
  out.reserve(depths.size());
  double last = -1.0;
  for (double d : depths) {
    if (d < 0.0 || d < last) throw PreconditionError("ball_trajectory: depths must be nonnegative and sorted");
    sweep.advance_to(d);
    out.push_back({sweep.x(), sweep.ball(), sweep.uncertainty()});
    last = d;
  }
  return out;
}

Mat weyl_constant_potential(const Mat& v0, SpectralParameter z) {
  z.require_upper("weyl_constant_potential");
  const Signature sig(static_cast<int>(v0.rows()), static_cast<int>(v0.cols()));
  const Mat g = build_G(z.value(), v0, sig);
  Eigen::ComplexEigenSolver<Mat> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("weyl_constant_potential", "eigen-decomposition failed");
  const auto& lambda = es.eigenvalues();
  Mat y(sig.m(), sig.m1());
  int found = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i).real() < 0.0) {
      if (found == sig.m1()) {
        throw NumericalError("weyl_constant_potential", "stable subspace dimension exceeds m1");
      }
      y.col(found++) = es.eigenvectors().col(i);
    }
    if (std::abs(lambda(i).real()) < 1e-12) {
      throw PreconditionError("weyl_constant_potential: eigenvalue on the imaginary axis");
    }
  }
  if (found != sig.m1()) throw NumericalError("weyl_constant_potential", "stable subspace dimension differs from m1");
  Eigen::JacobiSVD<Mat> svd(es.eigenvectors());
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) < 1e-10 * s(0)) {
    throw NumericalError("weyl_constant_potential", "defective eigenstructure");
  }
  return linalg::right_divide(y.bottomRows(sig.m2()), y.topRows(sig.m1()), "weyl_constant_potential");
}

}  // namespace weylstrip
