#include "weylstrip/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "weylstrip/dirac.hpp"
#include "weylstrip/linalg.hpp"

namespace weylstrip {

EvolutionResult evolve_weyl(const Mat& phi0, const Mat& R, const Signature& sig, double t, SpectralParameter z) {
  const int m1 = sig.m1(), m2 = sig.m2();
  if (R.rows() != sig.m() || R.cols() != sig.m()) throw DimensionError("evolve_weyl: R must be m x m");
  if (phi0.rows() != m2 || phi0.cols() != m1) throw DimensionError("evolve_weyl: phi0 must be m2 x m1");
  const double scale = linalg::max_abs(R);
  if (!(scale > 0.0) || !std::isfinite(scale)) throw NumericalError("evolve_weyl", "degenerate R");
  const Mat r = R / scale;
  const Mat den = r.topLeftCorner(m1, m1) + r.topRightCorner(m1, m2) * phi0;
  const Mat num = r.bottomLeftCorner(m2, m1) + r.bottomRightCorner(m2, m2) * phi0;

  EvolutionResult out;
  out.t = t;
  out.z = z;
  out.denominator_condition = linalg::min_singular_value(den);
  out.exceptional = out.denominator_condition < kExceptionalThreshold;
  if (out.exceptional) {
    throw NumericalError("evolve_weyl", "exceptional spectral point: denominator singular value " +
                                            std::to_string(out.denominator_condition));
  }
  out.phi_t = linalg::right_divide(num, den, "evolve_weyl");
  return out;
}

bool AdmissibleDomains::in_omega_t(SpectralParameter z) const { return z.im() > 0.0 && z.re() < -bounds.M / 2.0; }

bool AdmissibleDomains::in_omega_hat_t(SpectralParameter z) const {
  return z.im() > 0.0 && z.re() > bounds.M0 / 2.0;
}

bool AdmissibleDomains::in_omega(SpectralParameter z) const {
  return z.im() >= im_floor && z.re() <= -bounds.Mhat;
}

AdmissibleDomains admissible_domains(const DomainBounds& bounds, double t, double im_floor) {
  if (bounds.M < 0 || bounds.M0 < 0 || bounds.Mhat < 0 || bounds.Mbreve < 0) {
    throw PreconditionError("admissible_domains: bounds must be nonnegative");
  }
  if (!(im_floor > 0.0)) throw PreconditionError("admissible_domains: im_floor must be positive");
  return {bounds, t, im_floor};
}

MonotonicityReport r_monotonicity_check(const PropagatorSamples& samples, const Signature& sig, JSide side,
                                        double tol) {
  MonotonicityReport report;
  report.worst_eigenvalue = std::numeric_limits<double>::infinity();
  const Mat j = sig.j();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Mat h = h_form(samples.true_value(i), sig);
    const Mat gap = side == JSide::below_j ? Mat(j - h) : Mat(h - j);
    const double e = linalg::min_eigenvalue(gap);
    report.worst_eigenvalue = std::min(report.worst_eigenvalue, e);
    if (e < -tol && report.ok) {
      report.ok = false;
      report.offending_index = i;
    }
  }
  return report;
}

QuarterPlaneEstimate quarterplane_weyl(const BoundaryTrace& trace, SpectralParameter z, double t_max,
                                       const QuarterPlaneOptions& options) {
  const Signature sig = trace.signature();
  const int m1 = sig.m1(), m2 = sig.m2();
  DomainBounds bounds;
  bounds.Mhat = trace.sup_v0();
  bounds.Mbreve = trace.sup_v1();
  if (!admissible_domains(bounds, 0.0, options.im_floor).in_omega(z)) {
    throw PreconditionError("quarterplane_weyl: z outside the quarter-plane domain (Re z <= -" +
                            std::to_string(bounds.Mhat) + ", Im z >= " + std::to_string(options.im_floor) + ")");
  }
  if (!(t_max > 0.0) || t_max > trace.T() * (1 + 1e-12)) {
    throw PreconditionError("quarterplane_weyl: t_max must lie in (0, T]");
  }

  // C1 ~ sup ||F(0, t, z)|| bounds how fast ||R f|| can change.
  double c1 = 0.0;
  const int probes = std::max(257, 8 * trace.degree() + 1);
  for (int i = 0; i < probes; ++i) {
    const double t = t_max * i / (probes - 1);
    c1 = std::max(c1, linalg::op_norm(build_F(z.value(), trace.v0(t), trace.v1(t), sig)));
  }
  QuarterPlaneEstimate est;
  est.window = std::log(1.5) / c1;
  const double dt = est.window / std::max(1, options.samples_per_window);

  IntegratorOptions iopt = options.integrator;
  iopt.record_every_step = false;
  iopt.sample_at.clear();
  for (double t = dt; t < t_max; t += dt) iopt.sample_at.push_back(t);
  const auto R = propagate_R(trace, z, t_max, iopt);

  auto estimate = [&](std::size_t i) {
    const Mat& r = R.values[i];
    Eigen::FullPivLU<Mat> lu(r.bottomRightCorner(m2, m2));
    if (!lu.isInvertible()) throw NumericalError("quarterplane_weyl", "R22 singular");
    return Mat(-lu.solve(r.bottomLeftCorner(m2, m1)));
  };
  auto r22_sv = [&](std::size_t i) {
    return linalg::min_singular_value(R.values[i].bottomRightCorner(m2, m2)) * std::exp(R.scale_log[i]);
  };

  Mat prev = estimate(0);
  double min_sv = r22_sv(0);
  std::size_t plateau = 0;
  std::size_t used = R.size() - 1;
  for (std::size_t i = 1; i < R.size(); ++i) {
    Mat cur = estimate(i);
    min_sv = std::min(min_sv, r22_sv(i));
    const bool small = linalg::op_norm(cur - prev) < options.tol;
    plateau = small ? plateau + 1 : 0;
    prev = std::move(cur);
    if (plateau >= static_cast<std::size_t>(std::max(1, options.samples_per_window))) {
      used = i;
      est.converged = true;
      break;
    }
  }
  est.phi0 = prev;
  est.t_used = R.grid[used];
  est.r22_min_sv = min_sv;
  Mat col(sig.m(), m1);
  col << Mat::Identity(m1, m1), est.phi0;
  est.residual = linalg::op_norm(R.values[used] * col) * std::exp(R.scale_log[used]);
  return est;
}

}  // namespace weylstrip
