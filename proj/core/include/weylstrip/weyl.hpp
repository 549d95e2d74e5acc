#pragma once

#include <optional>
#include <vector>

#include "weylstrip/potential.hpp"
#include "weylstrip/propagator.hpp"
#include "weylstrip/types.hpp"

namespace weylstrip {

/// {phi : (phi - center)* left_weight (phi - center) <= right_schur}, i.e.
/// {center + left_weight^{-1/2} K right_schur^{1/2} : ||K|| <= 1}.
struct MatrixBall {
  Mat center;       // m2 x m1
  Mat left_weight;  // m2 x m2, positive definite
  Mat right_schur;  // m1 x m1, positive semidefinite

  /// ||left_weight^{-1/2}||
  double left_radius() const;
  /// ||right_schur^{1/2}||
  double right_radius() const;

  /// center + left_weight^{-1/2} K right_schur^{1/2}; a contraction K gives a member.
  Mat point(const Mat& K) const;

  /// lambda_min(S - (phi - c)* W (phi - c)) >= -tol * ||S||.
  bool contains(const Mat& phi, double tol) const;
};

struct WeylEstimate {
  Mat phi;
  SpectralParameter z;
  double x_max = 0.0;
  /// ||left_weight^{-1/2}|| * ||right_schur^{1/2}||, computed in log space.
  double uncertainty = 0.0;
  MatrixBall ball;
};

/// A Moebius coefficient stored as coeff * exp(log_scale).
struct ScaledCoefficient {
  Mat coeff;
  double log_scale = 0.0;

  Mat value() const { return coeff * std::exp(log_scale); }
};

/// ([0 I] coeff P) ([I 0] coeff P)^{-1}, with m1 = P.cols().
Mat moebius_apply(const Mat& coeff, const Mat& P);

/// P*P > 0 and P*jP >= 0, with eigenvalue tolerance 1e-12.
bool property_j_check(const Mat& P, const Signature& sig);

/// Ball {phi : [I phi*] H [I; phi] >= 0}. Requires H22 < 0.
MatrixBall ball_from_H(const Mat& H, const Signature& sig);

/// lambda_min([I phi*] H [I; phi]) >= -tol.
bool ball_membership(const Mat& phi, const Mat& H, const Signature& sig, double tol);

/// second * first, rescaled to unit max-entry; moebius_apply of the result
/// equals applying `first` and then `second`.
ScaledCoefficient lft_compose(const ScaledCoefficient& first, const ScaledCoefficient& second);

/// The ball of candidate Weyl values at depth x from the propagator u(x) and
/// its inverse. Uses the normalization H = exp(2 Im(z) x) u* j u, under which
/// the right semi-radius is non-increasing from 1 and the left one carries
/// the shrinking.
MatrixBall ball_from_propagator(const ScaledCoefficient& u, const ScaledCoefficient& u_inv, double x,
                                SpectralParameter z, const Signature& sig);

/// log(||W^{-1/2}|| ||S^{1/2}||) of ball_from_propagator, without forming the ball.
double log_uncertainty(const ScaledCoefficient& u, const ScaledCoefficient& u_inv, const Signature& sig);

struct WeylOptions {
  IntegratorOptions integrator{};
  /// Segment length is limited by Im(z) * dx <= segment_width.
  double segment_width = 20.0;
  /// Stop as soon as the uncertainty drops below this value.
  std::optional<double> stop_below;
  /// Report non-convergence when the final uncertainty exceeds this value.
  std::optional<double> uncertainty_cap;
};

/// Weyl function estimate as the center of the ball at depth x_max.
WeylEstimate weyl_estimate(const PotentialProfile& profile, SpectralParameter z, double x_max,
                           const WeylOptions& options = {});

struct BallSample {
  double x = 0.0;
  MatrixBall ball;
  double uncertainty = 0.0;
};

/// Balls at each requested depth (sorted ascending, all > 0); depth 0 is the unit ball.
std::vector<BallSample> ball_trajectory(const PotentialProfile& profile, SpectralParameter z,
                                        const std::vector<double>& depths, const WeylOptions& options = {});

/// Weyl function of an x-independent potential: Y2 Y1^{-1} for the invariant
/// subspace of the constant G with negative-real-part eigenvalues.
Mat weyl_constant_potential(const Mat& v0, SpectralParameter z);

}  // namespace weylstrip
