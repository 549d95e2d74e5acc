#include <gtest/gtest.h>

#include "weylstrip/dirac.hpp"
#include "weylstrip/linalg.hpp"

using namespace weylstrip;

namespace {

Mat random_matrix(int rows, int cols, unsigned seed) {
  std::srand(seed);
  return Mat::Random(rows, cols);
}

}  // namespace

TEST(Signature, JIsDiagonalSign) {
  const Signature sig{2, 1};
  const Mat j = sig.j();
  EXPECT_EQ(sig.m(), 3);
  EXPECT_EQ(j(0, 0), cplx(1.0));
  EXPECT_EQ(j(1, 1), cplx(1.0));
  EXPECT_EQ(j(2, 2), cplx(-1.0));
  EXPECT_EQ(linalg::max_abs(j - Mat(j.diagonal().asDiagonal())), 0.0);
}

TEST(Signature, RejectsEmptyBlocks) {
  EXPECT_THROW(Signature(0, 1), DimensionError);
  EXPECT_THROW(Signature(1, -2), DimensionError);
}

TEST(SpectralParameter, RequireUpper) {
  EXPECT_NO_THROW(SpectralParameter(0.0, 1.0).require_upper("test"));
  EXPECT_THROW(SpectralParameter(1.0, 0.0).require_upper("test"), PreconditionError);
}

TEST(Dirac, ScalarGMatchesHandExpansion) {
  const Signature sig{1, 1};
  const cplx z(0.3, 0.8), v(0.4, -0.2);
  const Mat G = build_G(z, Mat::Constant(1, 1, v), sig);
  // i(zj + jV) with V = [[0, v], [conj v, 0]]
  Mat expected(2, 2);
  expected << kI * z, kI * v, -kI * std::conj(v), -kI * z;
  EXPECT_LT(linalg::max_abs(G - expected), 1e-15);
}

TEST(Dirac, ScalarFMatchesHandExpansion) {
  const Signature sig{1, 1};
  const cplx z(-0.5, 1.2), v(0.7, 0.1), vx(-0.3, 0.9);
  const Mat F = build_F(z, Mat::Constant(1, 1, v), Mat::Constant(1, 1, vx), sig);
  const double vv = std::norm(v);
  // -i(z^2 j + z jV - (i V_x - j V^2)/2), with V^2 = |v|^2 I
  Mat expected(2, 2);
  expected << -kI * (z * z + 0.5 * vv), -kI * (z * v - 0.5 * kI * vx),
      -kI * (-z * std::conj(v) - 0.5 * kI * std::conj(vx)), -kI * (-z * z - 0.5 * vv);
  EXPECT_LT(linalg::max_abs(F - expected), 1e-15);
}

TEST(Dirac, JDissipationIdentity) {
  // G* j + j G = -2 Im(z) I for every potential.
  const Signature sig{2, 3};
  const Mat v = random_matrix(2, 3, 11u);
  for (cplx z : {cplx(0.0, 1.0), cplx(-2.0, 0.25), cplx(1.5, 0.0)}) {
    const Mat G = build_G(z, v, sig);
    const Mat lhs = G.adjoint() * sig.j() + sig.j() * G;
    EXPECT_LT(linalg::max_abs(lhs + 2.0 * z.imag() * Mat::Identity(5, 5)), 1e-14);
  }
}

TEST(Dirac, DimensionChecks) {
  const Signature sig{2, 1};
  EXPECT_THROW(build_G(cplx(0, 1), Mat::Zero(1, 2), sig), DimensionError);
  EXPECT_THROW(build_F(cplx(0, 1), Mat::Zero(2, 1), Mat::Zero(1, 1), sig), DimensionError);
}

TEST(Linalg, PsdSqrtSquaresBack) {
  const Mat a = random_matrix(3, 3, 5u);
  const Mat h = a * a.adjoint();
  const Mat r = linalg::psd_sqrt(h);
  EXPECT_LT(linalg::max_abs(r * r - h), 1e-13);
  EXPECT_LT(linalg::max_abs(r - r.adjoint()), 1e-14);
}

TEST(Linalg, RightDivideSolvesAndRejectsSingular) {
  const Mat a = random_matrix(3, 3, 3u) + 3.0 * Mat::Identity(3, 3);
  const Mat b = random_matrix(2, 3, 4u);
  const Mat x = linalg::right_divide(b, a, "test");
  EXPECT_LT(linalg::max_abs(x * a - b), 1e-14);
  Mat singular = Mat::Zero(2, 2);
  singular(0, 0) = 1.0;
  EXPECT_THROW(linalg::right_divide(Mat::Identity(2, 2), singular, "test"), NumericalError);
}

TEST(Linalg, NormsAgreeOnDiagonal) {
  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = cplx(0.0, -0.5);
  d(2, 2) = 2.0;
  EXPECT_DOUBLE_EQ(linalg::op_norm(d), 3.0);
  EXPECT_DOUBLE_EQ(linalg::min_singular_value(d), 0.5);
  EXPECT_DOUBLE_EQ(linalg::max_abs(d), 3.0);
}
