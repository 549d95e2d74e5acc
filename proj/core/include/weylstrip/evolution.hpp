#pragma once

#include <optional>

#include "weylstrip/boundary.hpp"
#include "weylstrip/propagator.hpp"
#include "weylstrip/types.hpp"

namespace weylstrip {

struct EvolutionResult {
  Mat phi_t;
  double t = 0.0;
  SpectralParameter z;
  /// Smallest singular value of R11 + R12 phi0 (after rescaling R to unit max entry).
  double denominator_condition = 0.0;
  bool exceptional = false;
};

/// Denominators below this value flag an exceptional spectral point.
inline constexpr double kExceptionalThreshold = 1e-10;

/// phi(t) = (R21 + R22 phi0)(R11 + R12 phi0)^{-1}. Invariant under scaling of R.
/// Throws NumericalError at exceptional points.
EvolutionResult evolve_weyl(const Mat& phi0, const Mat& R, const Signature& sig, double t = 0.0,
                            SpectralParameter z = {});

struct DomainBounds {
  double M = 0.0;       // sup ||v|| over the strip up to t
  double M0 = 0.0;      // max ||v(0, r)|| for r <= t
  double Mhat = 0.0;    // sup ||v(0, t)||
  double Mbreve = 0.0;  // sup ||v_x(0, t)||, recorded only
};

/// Half-plane regions in which R* j R is monotone in t.
struct AdmissibleDomains {
  DomainBounds bounds;
  double t = 0.0;
  double im_floor = 0.5;

  /// Im z > 0 and Re z < -M/2: R* j R <= j.
  bool in_omega_t(SpectralParameter z) const;
  /// Im z > 0 and Re z > M0/2: R* j R >= j.
  bool in_omega_hat_t(SpectralParameter z) const;
  /// Im z >= im_floor and Re z <= -Mhat: quarter-plane limit applies.
  bool in_omega(SpectralParameter z) const;
};

AdmissibleDomains admissible_domains(const DomainBounds& bounds, double t, double im_floor = 0.5);

enum class JSide { below_j, above_j };

struct MonotonicityReport {
  bool ok = true;
  std::optional<std::size_t> offending_index;
  /// Smallest eigenvalue of j - R*jR (below_j) or R*jR - j (above_j) over all samples.
  double worst_eigenvalue = 0.0;

  explicit operator bool() const { return ok; }
};

MonotonicityReport r_monotonicity_check(const PropagatorSamples& samples, const Signature& sig, JSide side,
                                        double tol = 1e-8);

struct QuarterPlaneOptions {
  IntegratorOptions integrator{};
  /// Plateau threshold on successive estimates (operator norm).
  double tol = 1e-8;
  double im_floor = 0.5;
  /// Estimates per persistence window.
  int samples_per_window = 8;
};

struct QuarterPlaneEstimate {
  Mat phi0;
  double t_used = 0.0;
  /// ||R(t_used) [I; phi0]||
  double residual = 0.0;
  /// min over sampled t <= t_used of sigma_min(R22(t))
  double r22_min_sv = 0.0;
  bool converged = false;
  /// Persistence window ln(1.5) / sup ||F(0, ., z)||.
  double window = 0.0;
};

/// phi(0, z) = -lim R22(t)^{-1} R21(t) for z in the quarter-plane domain.
QuarterPlaneEstimate quarterplane_weyl(const BoundaryTrace& trace, SpectralParameter z, double t_max,
                                       const QuarterPlaneOptions& options = {});

}  // namespace weylstrip
