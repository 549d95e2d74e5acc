#pragma once

#include <functional>
#include <string>
#include <vector>

#include "weylstrip/chebyshev.hpp"
#include "weylstrip/types.hpp"

namespace weylstrip {

/// Boundary data v(0, t) and v_x(0, t) on [0, T] as Chebyshev series.
class BoundaryTrace {
 public:
  BoundaryTrace(MatrixSeries v0, MatrixSeries v1, double T, int degree, double fit_residual);

  Signature signature() const { return {v0_.rows(), v0_.cols()}; }
  double T() const { return T_; }
  int degree() const { return degree_; }
  double fit_residual() const { return fit_residual_; }

  const MatrixSeries& v0_series() const { return v0_; }
  const MatrixSeries& v1_series() const { return v1_; }
  Mat v0(double t) const { return v0_(t); }
  Mat v1(double t) const { return v1_(t); }

  /// sup ||v(0, t)|| and sup ||v_x(0, t)|| on a check grid.
  double sup_v0() const { return sup_v0_; }
  double sup_v1() const { return sup_v1_; }

 private:
  MatrixSeries v0_;
  MatrixSeries v1_;
  double T_;
  int degree_;
  double fit_residual_;
  double sup_v0_;
  double sup_v1_;
};

using BoundaryFunction = std::function<MatL(long double)>;

/// Tabulated boundary data: t strictly increasing, one v0/v1 matrix per t.
struct BoundarySamples {
  std::vector<double> t;
  std::vector<Mat> v0;
  std::vector<Mat> v1;
};

/// Interpolation at the degree+1 Chebyshev-Lobatto points of [0, T]. The
/// reported fit residual is measured between the interpolation nodes.
BoundaryTrace ingest_boundary(const BoundaryFunction& v0, const BoundaryFunction& v1, const Signature& sig, double T,
                              int degree);

/// Least-squares Chebyshev fit of degree `degree` on [0, T]; the fit residual
/// is the largest deviation at the samples.
BoundaryTrace ingest_boundary(const BoundarySamples& samples, double T, int degree);

/// v(0, t) = q exp(-i omega t), v_x(0, t) = i k q exp(-i omega t).
BoundaryTrace plane_wave_trace(const Mat& q, double k, double omega, double T, int degree);

/// Boundary CSV: header row, then t followed by Re/Im pairs of v(0,t) and
/// v_x(0,t) entries in row-major order.
BoundarySamples read_boundary_csv(const std::string& path, const Signature& sig);
void write_boundary_csv(const std::string& path, const BoundarySamples& samples);

}  // namespace weylstrip
