#pragma once

#include <variant>
#include <vector>

#include "weylstrip/types.hpp"

namespace weylstrip {

/// The m1 x m2 potential v(x) of the Dirac system at a fixed time.
///
/// Sampled profiles use a clamped cubic spline per entry (end slopes from
/// one-sided second-order differences) and hold the last sample beyond the
/// grid.
class PotentialProfile {
 public:
  enum class Kind { zero, constant, plane_wave, sampled };

  static PotentialProfile zero(const Signature& sig);
  static PotentialProfile constant(Mat v0);
  /// v(x) = q exp(i(k x - omega t)). Requires q q* q = gamma^2 q.
  static PotentialProfile plane_wave(Mat q, double k, double omega, double t = 0.0);
  static PotentialProfile sampled(std::vector<double> x, std::vector<Mat> samples);

  Kind kind() const;
  const Signature& signature() const { return sig_; }

  Mat value(double x) const;
  Mat derivative(double x) const;

  /// sup ||v(x)|| over the represented range (over the samples for sampled kind).
  double sup_norm() const;

 private:
  struct Zero {};
  struct Constant {
    Mat v0;
  };
  struct PlaneWave {
    Mat q;
    double k;
    double omega;
    double t;
  };
  struct Sampled {
    std::vector<double> x;
    std::vector<Mat> y;
    std::vector<Mat> second;  // spline second derivatives at the knots
  };

  PotentialProfile(Signature sig, std::variant<Zero, Constant, PlaneWave, Sampled> data)
      : sig_(sig), data_(std::move(data)) {}

  Signature sig_;
  std::variant<Zero, Constant, PlaneWave, Sampled> data_;
};

/// gamma such that q q* q = gamma^2 q, or throws PreconditionError when the
/// nonzero singular values of q differ (relative tolerance tol).
double plane_wave_gamma(const Mat& q, double tol = 1e-10);

}  // namespace weylstrip
