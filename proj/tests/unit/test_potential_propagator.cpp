#include <gtest/gtest.h>

#include <cmath>

#include "weylstrip/boundary.hpp"
#include "weylstrip/dirac.hpp"
#include "weylstrip/linalg.hpp"
#include "weylstrip/potential.hpp"
#include "weylstrip/propagator.hpp"

using namespace weylstrip;

namespace {

// exp(A s) through the eigen-decomposition; A must be diagonalizable.
Mat expm(const Mat& A, double s) {
  Eigen::ComplexEigenSolver<Mat> es(A);
  const Mat P = es.eigenvectors();
  Mat D = Mat::Zero(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) D(i, i) = std::exp(es.eigenvalues()(i) * s);
  return P * D * P.inverse();
}

}  // namespace

TEST(Potential, PlaneWaveValueAndDerivative) {
  Mat q(2, 1);
  q << cplx(0.3, 0.0), cplx(0.0, 0.4);
  const auto p = PotentialProfile::plane_wave(q, 1.5, 0.7, 0.25);
  const double x = 0.8;
  const cplx phase = std::exp(kI * (1.5 * x - 0.7 * 0.25));
  EXPECT_LT(linalg::max_abs(p.value(x) - phase * q), 1e-15);
  EXPECT_LT(linalg::max_abs(p.derivative(x) - kI * 1.5 * phase * q), 1e-15);
  EXPECT_NEAR(p.sup_norm(), 0.5, 1e-15);
}

TEST(Potential, PlaneWaveGammaNeedsEqualSingularValues) {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 0.3;
  q(1, 1) = cplx(0.0, 0.3);
  EXPECT_NEAR(plane_wave_gamma(q), 0.3, 1e-15);
  q(1, 1) = 0.5;
  EXPECT_THROW(plane_wave_gamma(q), PreconditionError);
}

TEST(Potential, SplineReproducesQuadratics) {
  std::vector<double> x;
  std::vector<Mat> v;
  auto f = [](double s) { return cplx(1.0 + 2.0 * s - s * s, 0.5 * s * s); };
  for (int i = 0; i <= 10; ++i) {
    x.push_back(0.3 * i);
    v.push_back(Mat::Constant(1, 1, f(0.3 * i)));
  }
  const auto p = PotentialProfile::sampled(x, v);
  for (double s : {0.05, 0.71, 1.49, 2.95}) {
    EXPECT_LT(std::abs(p.value(s)(0, 0) - f(s)), 1e-13) << s;
    EXPECT_LT(std::abs(p.derivative(s)(0, 0) - cplx(2.0 - 2.0 * s, s)), 1e-12) << s;
  }
  // Held constant past the last sample.
  EXPECT_LT(std::abs(p.value(5.0)(0, 0) - f(3.0)), 1e-15);
}

TEST(Potential, SampledRejectsUnsortedGrid) {
  std::vector<Mat> v(3, Mat::Zero(1, 1));
  EXPECT_THROW(PotentialProfile::sampled({0.0, 0.5, 0.4}, v), PreconditionError);
}

TEST(Propagator, ConstantGeneratorMatchesExponential) {
  const Signature sig{2, 1};
  Mat v(2, 1);
  v << cplx(0.4, 0.1), cplx(-0.2, 0.3);
  const cplx z(0.3, 0.6);
  const Mat G = build_G(z, v, sig);
  IntegratorOptions opts;
  opts.tol = 1e-12;
  opts.sample_at = {0.5, 1.5};
  const auto u = propagate_u(PotentialProfile::constant(v), SpectralParameter(z), 3.0, opts);
  ASSERT_EQ(u.size(), 4u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Mat exact = expm(G, u.grid[i]);
    EXPECT_LT(linalg::max_abs(u.true_value(i) - exact) / linalg::max_abs(exact), 1e-10) << u.grid[i];
    EXPECT_LT(linalg::max_abs(u.true_inverse(i) * u.true_value(i) - Mat::Identity(3, 3)), 1e-10);
  }
}

TEST(Propagator, RenormalizationTracksHugeGrowth) {
  // Zero potential: u = diag(exp(izx), exp(-izx)); at z = 10i, x = 30 the
  // entries span exp(-300) .. exp(300).
  const auto u = propagate_u(PotentialProfile::zero(Signature{1, 1}), SpectralParameter(0.0, 10.0), 30.0);
  const std::size_t last = u.size() - 1;
  EXPECT_GT(u.scale_log[last], 200.0);
  const double log_u22 = std::log(std::abs(u.values[last](1, 1))) + u.scale_log[last];
  EXPECT_NEAR(log_u22, 300.0, 1e-6);
  const double log_inv11 = std::log(std::abs(u.inverse_values[last](0, 0))) + u.inverse_scale_log[last];
  EXPECT_NEAR(log_inv11, 300.0, 1e-6);
}

TEST(Propagator, ErrorsNameTheProblem) {
  EXPECT_THROW(propagate_u(PotentialProfile::zero(Signature{1, 1}), SpectralParameter(0.0, -1.0), 1.0),
               PreconditionError);
  const auto trace = plane_wave_trace(Mat::Constant(1, 1, 0.3), 1.0, 0.59, 1.0, 20);
  EXPECT_THROW(propagate_R(trace, SpectralParameter(0.0, 1.0), 2.0), PreconditionError);
  const Generator exploding = [](double s) { return Mat::Constant(1, 1, 1.0 / (0.5 - s)); };
  try {
    propagate(exploding, 0.0, 1.0, SpectralParameter(), IntegratorOptions{}, "blowup");
    FAIL() << "expected a step-size failure";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.stage(), "blowup");
  }
}

TEST(Propagator, ZeroTraceTimePropagatorIsDiagonal) {
  const Signature sig{1, 2};
  const auto f = [&](long double) { return MatL::Zero(1, 2); };
  const auto trace = ingest_boundary(f, f, sig, 2.0, 8);
  const cplx z(0.4, 0.9);
  IntegratorOptions opts;
  opts.tol = 1e-12;
  const auto R = propagate_R(trace, SpectralParameter(z), 2.0, opts);
  const Mat j = sig.j();
  Mat exact = Mat::Zero(3, 3);
  for (int d = 0; d < 3; ++d) exact(d, d) = std::exp(-kI * z * z * j(d, d) * 2.0);
  EXPECT_LT(linalg::max_abs(R.true_value(R.size() - 1) - exact) / linalg::max_abs(exact), 1e-11);
}
