#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "weylstrip/potential.hpp"
#include "weylstrip/types.hpp"

namespace weylstrip {

class BoundaryTrace;

/// Coefficient A(s) of the linear system Y' = A(s) Y.
using Generator = std::function<Mat(double)>;

/// Fundamental solution samples with the inverse propagated alongside.
///
/// Both sequences are stored scalar-renormalized: the true propagator is
/// values[i] * exp(scale_log[i]) and its inverse is
/// inverse_values[i] * exp(inverse_scale_log[i]).
struct PropagatorSamples {
  std::vector<double> grid;
  std::vector<Mat> values;
  std::vector<Mat> inverse_values;
  std::vector<double> scale_log;
  std::vector<double> inverse_scale_log;
  SpectralParameter z;

  std::size_t size() const { return grid.size(); }
  const Mat& back() const { return values.back(); }

  /// Undoes the renormalization. Overflows for very large scale_log.
  Mat true_value(std::size_t i) const;
  Mat true_inverse(std::size_t i) const;
};

struct IntegratorOptions {
  /// Per-step relative tolerance of the embedded 4(5) pair.
  double tol = 1e-8;
  /// Additional sample positions inside (begin, end]; the end point is always sampled.
  std::vector<double> sample_at;
  /// Record every accepted step instead of only the requested positions.
  bool record_every_step = false;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
};

/// Entries above this magnitude trigger scalar renormalization.
inline constexpr double kRenormalizeThreshold = 1e100;

/// Integrates Y' = A(s) Y and W' = -W A(s) from Y(begin) = W(begin) = I with an
/// adaptive Dormand-Prince 5(4) pair. Errors name `stage`.
PropagatorSamples propagate(const Generator& generator, double begin, double end, SpectralParameter z,
                            const IntegratorOptions& options, const std::string& stage);

/// Space propagator u_x = G u, u(0) = I over [0, x_max].
PropagatorSamples propagate_u(const PotentialProfile& profile, SpectralParameter z, double x_max,
                              const IntegratorOptions& options = {});

/// Time propagator R_t = F(0, t, z) R, R(0) = I over [0, t_max], with F built
/// from the boundary traces v(0, t), v_x(0, t).
PropagatorSamples propagate_R(const BoundaryTrace& trace, SpectralParameter z, double t_max,
                              const IntegratorOptions& options = {});

}  // namespace weylstrip
