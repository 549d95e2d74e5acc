#include "weylstrip/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "weylstrip/boundary.hpp"
#include "weylstrip/dirac.hpp"
#include "weylstrip/linalg.hpp"

namespace weylstrip {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Difference between the 5th and 4th order weights.
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

std::string where(double s) {
  std::ostringstream os;
  os.precision(10);
  os << s;
  return os.str();
}

struct State {
  Mat y;
  Mat w;
};

}  // namespace

Mat PropagatorSamples::true_value(std::size_t i) const { return values[i] * std::exp(scale_log[i]); }

Mat PropagatorSamples::true_inverse(std::size_t i) const {
  return inverse_values[i] * std::exp(inverse_scale_log[i]);
}

PropagatorSamples propagate(const Generator& generator, double begin, double end, SpectralParameter z,
                            const IntegratorOptions& options, const std::string& stage) {
  if (!(end > begin)) throw PreconditionError(stage + ": invalid span [" + where(begin) + ", " + where(end) + "]");
  if (!(options.tol > 0.0)) throw PreconditionError(stage + ": tolerance must be positive");

  std::vector<double> targets;
  for (double s : options.sample_at) {
    if (s > begin && s < end) targets.push_back(s);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  targets.push_back(end);

  Mat a0 = generator(begin);
  const auto n = a0.rows();
  if (a0.cols() != n) throw DimensionError(stage + ": generator must be square");

  PropagatorSamples out;
  out.z = z;
  State st{Mat::Identity(n, n), Mat::Identity(n, n)};
  double log_y = 0.0, log_w = 0.0;
  auto record = [&](double s) {
    out.grid.push_back(s);
    out.values.push_back(st.y);
    out.inverse_values.push_back(st.w);
    out.scale_log.push_back(log_y);
    out.inverse_scale_log.push_back(log_w);
  };
  record(begin);

  const double span = end - begin;
  double h = std::min({span, options.max_step,
                       0.5 * std::pow(options.tol, 0.2) / std::max(1.0, linalg::max_abs(a0))});
  double s = begin;
  std::size_t next = 0;
  std::array<Mat, 7> ky, kw;
  std::array<Mat, 7> a;
  a[0] = std::move(a0);
  std::size_t steps = 0;

  while (next < targets.size()) {
    if (++steps > options.max_steps) throw NumericalError(stage, "step budget exhausted at " + where(s));
    const double target = targets[next];
    bool hits_target = false;
    double step = std::min(h, options.max_step);
    if (s + step >= target - 1e-14 * std::max(1.0, std::abs(target))) {
      step = target - s;
      hits_target = true;
    }
    if (step < 1e-13 * std::max(1.0, std::abs(s))) {
      throw NumericalError(stage, "step-size underflow at " + where(s));
    }

    ky[0] = a[0] * st.y;
    kw[0] = -st.w * a[0];
    for (int i = 1; i < 7; ++i) {
      Mat yi = st.y, wi = st.w;
      for (int l = 0; l < i; ++l) {
        if (kA[i][l] == 0.0) continue;
        yi.noalias() += (step * kA[i][l]) * ky[l];
        wi.noalias() += (step * kA[i][l]) * kw[l];
      }
      a[i] = generator(s + kC[i] * step);
      if (i == 6) {
        // FSAL: stage 7 is evaluated at the 5th order solution.
        ky[6] = a[6] * yi;
        kw[6] = -wi * a[6];
        Mat ey = Mat::Zero(n, n), ew = Mat::Zero(n, n);
        for (int l = 0; l < 7; ++l) {
          if (kE[l] == 0.0) continue;
          ey.noalias() += (step * kE[l]) * ky[l];
          ew.noalias() += (step * kE[l]) * kw[l];
        }
        const double sy = std::max(linalg::max_abs(st.y), linalg::max_abs(yi));
        const double sw = std::max(linalg::max_abs(st.w), linalg::max_abs(wi));
        double err = std::max(linalg::max_abs(ey) / (options.tol * sy), linalg::max_abs(ew) / (options.tol * sw));
        if (!std::isfinite(err)) {
          if (!yi.allFinite() || !wi.allFinite()) {
            h = 0.25 * step;
            continue;
          }
          err = 1e10;
        }
        const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 5.0);
        if (err <= 1.0) {
          s = hits_target ? target : s + step;
          st.y = std::move(yi);
          st.w = std::move(wi);
          a[0] = a[6];
          const double my = linalg::max_abs(st.y);
          if (my > kRenormalizeThreshold) {
            st.y /= my;
            log_y += std::log(my);
          }
          const double mw = linalg::max_abs(st.w);
          if (mw > kRenormalizeThreshold) {
            st.w /= mw;
            log_w += std::log(mw);
          }
          if (hits_target) {
            record(s);
            ++next;
          } else if (options.record_every_step) {
            record(s);
          }
          h = (hits_target && factor * step < h) ? h : factor * step;
        } else {
          h = factor * step;
        }
      } else {
        ky[i] = a[i] * yi;
        kw[i] = -wi * a[i];
      }
    }
  }
  return out;
}

PropagatorSamples propagate_u(const PotentialProfile& profile, SpectralParameter z, double x_max,
                              const IntegratorOptions& options) {
  if (z.im() < 0.0) throw PreconditionError("propagate_u: Im(z) must be nonnegative");
  const Signature sig = profile.signature();
  const cplx zv = z.value();
  return propagate([&](double x) { return build_G(zv, profile.value(x), sig); }, 0.0, x_max, z, options,
                   "propagate_u");
}

PropagatorSamples propagate_R(const BoundaryTrace& trace, SpectralParameter z, double t_max,
                              const IntegratorOptions& options) {
  if (t_max > trace.T() * (1 + 1e-12)) {
    throw PreconditionError("propagate_R: t_max exceeds the boundary trace interval");
  }
  const Signature sig = trace.signature();
  const cplx zv = z.value();
  return propagate([&](double t) { return build_F(zv, trace.v0(t), trace.v1(t), sig); }, 0.0, t_max, z, options,
                   "propagate_R");
}

}  // namespace weylstrip
