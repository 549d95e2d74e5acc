#pragma once

#include <vector>

#include "weylstrip/boundary.hpp"
#include "weylstrip/potential.hpp"
#include "weylstrip/types.hpp"

namespace weylstrip {

/// Closed-form field v(x, t): zero or a plane wave q exp(i(kx - omega t)).
class ExactField {
 public:
  static ExactField zero(const Signature& sig);
  /// Plane wave with omega fixed by the dNLS dispersion relation
  /// omega = (k^2 + 2 gamma^2) / 2.
  static ExactField plane_wave(const Mat& q, double k);
  /// Plane wave with an arbitrary frequency; solves dNLS only on the
  /// dispersion relation.
  static ExactField plane_wave(const Mat& q, double k, double omega);

  const Signature& signature() const { return sig_; }
  double k() const { return k_; }
  double omega() const { return omega_; }
  bool is_zero() const { return zero_; }

  Mat value(double x, double t) const;
  Mat v_x(double x, double t) const;
  PotentialProfile profile_at(double t) const;
  BoundaryTrace boundary_trace(double T, int degree) const;

 private:
  ExactField(Signature sig, Mat q, double k, double omega, bool zero)
      : sig_(sig), q_(std::move(q)), k_(k), omega_(omega), zero_(zero) {}

  Signature sig_;
  Mat q_;
  double k_;
  double omega_;
  bool zero_;
};

/// Samples on a uniform tensor grid; values[it * nx + ix].
struct SolutionField {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<Mat> values;

  static SolutionField sample(const ExactField& field, double x0, double x1, int nx, double t0, double t1, int nt);

  std::size_t nx() const { return x.size(); }
  std::size_t nt() const { return t.size(); }
  const Mat& at(std::size_t ix, std::size_t it) const { return values[it * x.size() + ix]; }
  double h_x() const;
  double h_t() const;
};

/// Derivatives come from second-order differences of the samples: central
/// inside, one-sided at the grid edges. Residuals are maxima over all nodes.

/// max ||2 v_t - i(v_xx - 2 v v* v)||
double dnls_residual(const SolutionField& field);

/// max ||G_t - F_x + [G, F]|| at spectral parameter z, with F_x assembled from
/// the differenced v_x and v_xx.
double zero_curvature_residual(const SolutionField& field, cplx z);

/// ||u(x,t) R(t) - R(x,t) u(x,0)|| / ||u(x,t) R(t)|| with all four propagators
/// integrated to tolerance tol from the closed-form field.
double factorization_residual(const ExactField& field, SpectralParameter z, double x, double t, double tol = 1e-12);

}  // namespace weylstrip
