#include "weylstrip/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace weylstrip {

Signature::Signature(int m1, int m2) : m1_(m1), m2_(m2) {
  if (m1 <= 0 || m2 <= 0) {
    throw DimensionError("signature blocks must be positive, got m1=" + std::to_string(m1) +
                         " m2=" + std::to_string(m2));
  }
}

Mat Signature::j() const {
  Mat j = Mat::Identity(m(), m());
  j.bottomRightCorner(m2_, m2_) *= -1.0;
  return j;
}

const SpectralParameter& SpectralParameter::require_upper(const char* where) const {
  if (!in_upper_half_plane()) {
    throw PreconditionError(std::string(where) + ": spectral parameter must satisfy Im(z) > 0");
  }
  return *this;
}

namespace linalg {

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double min_singular_value(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

double min_eigenvalue(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

Mat psd_sqrt(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat right_divide(const Mat& b, const Mat& a, const char* stage) {
  Eigen::FullPivLU<Mat> lu(a.adjoint());
  // rcond estimate; reject exact and near-exact singularity.
  if (!lu.isInvertible() || lu.rcond() < 1e-15) {
    throw NumericalError(stage, "singular denominator (rcond=" + std::to_string(lu.rcond()) + ")");
  }
  return lu.solve(b.adjoint()).adjoint();
}

}  // namespace linalg
}  // namespace weylstrip
