#include "weylstrip/potential.hpp"

#include <algorithm>
#include <cmath>

#include "weylstrip/linalg.hpp"

namespace weylstrip {

namespace {

// Second derivatives of the clamped cubic spline through (x_i, y_i).
std::vector<Mat> clamped_spline(const std::vector<double>& x, const std::vector<Mat>& y) {
  const std::size_t n = x.size();
  const Mat zero = Mat::Zero(y[0].rows(), y[0].cols());
  if (n == 2) return {zero, zero};

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];

  // End slopes from the quadratic through the three outermost knots.
  const double h0 = h[0], h1 = h[1];
  const Mat s0 = -(2 * h0 + h1) / (h0 * (h0 + h1)) * y[0] + (h0 + h1) / (h0 * h1) * y[1] -
                 h0 / (h1 * (h0 + h1)) * y[2];
  const double ha = h[n - 3], hb = h[n - 2];
  const Mat sn = hb / (ha * (ha + hb)) * y[n - 3] - (ha + hb) / (ha * hb) * y[n - 2] +
                 (2 * hb + ha) / (hb * (ha + hb)) * y[n - 1];

  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0);
  std::vector<Mat> rhs(n, zero);
  diag[0] = 2 * h[0];
  upper[0] = h[0];
  rhs[0] = 6.0 * ((y[1] - y[0]) / h[0] - s0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    lower[i] = h[i - 1];
    diag[i] = 2 * (h[i - 1] + h[i]);
    upper[i] = h[i];
    rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
  }
  lower[n - 1] = h[n - 2];
  diag[n - 1] = 2 * h[n - 2];
  rhs[n - 1] = 6.0 * (sn - (y[n - 1] - y[n - 2]) / h[n - 2]);

  // Thomas algorithm; the system is diagonally dominant.
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<Mat> m(n, zero);
  m[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
  return m;
}

}  // namespace

double plane_wave_gamma(const Mat& q, double tol) {
  Eigen::JacobiSVD<Mat> svd(q);
  const Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  const double gamma = s(0);
  for (Eigen::Index i = 1; i < s.size(); ++i) {
    if (s(i) > tol * gamma && std::abs(s(i) - gamma) > tol * gamma) {
      throw PreconditionError("plane wave amplitude must have equal nonzero singular values");
    }
  }
  return gamma;
}

PotentialProfile PotentialProfile::zero(const Signature& sig) { return {sig, Zero{}}; }

PotentialProfile PotentialProfile::constant(Mat v0) {
  Signature sig(static_cast<int>(v0.rows()), static_cast<int>(v0.cols()));
  return {sig, Constant{std::move(v0)}};
}

PotentialProfile PotentialProfile::plane_wave(Mat q, double k, double omega, double t) {
  plane_wave_gamma(q);
  Signature sig(static_cast<int>(q.rows()), static_cast<int>(q.cols()));
  return {sig, PlaneWave{std::move(q), k, omega, t}};
}

PotentialProfile PotentialProfile::sampled(std::vector<double> x, std::vector<Mat> samples) {
  if (x.size() < 2 || x.size() != samples.size()) {
    throw PreconditionError("sampled potential needs at least two knots and one sample per knot");
  }
  if (x.front() < 0.0) throw PreconditionError("sampled potential grid must be nonnegative");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw PreconditionError("sampled potential grid must be strictly increasing");
  }
  Signature sig(static_cast<int>(samples[0].rows()), static_cast<int>(samples[0].cols()));
  for (const auto& s : samples) {
    if (s.rows() != sig.m1() || s.cols() != sig.m2()) throw DimensionError("sampled potential: ragged samples");
    if (!s.allFinite()) throw PreconditionError("sampled potential: non-finite sample");
  }
  auto second = clamped_spline(x, samples);
  return {sig, Sampled{std::move(x), std::move(samples), std::move(second)}};
}

PotentialProfile::Kind PotentialProfile::kind() const {
  switch (data_.index()) {
    case 0: return Kind::zero;
    case 1: return Kind::constant;
    case 2: return Kind::plane_wave;
    default: return Kind::sampled;
  }
}

Mat PotentialProfile::value(double x) const {
  struct Visitor {
    const Signature& sig;
    double x;
    Mat operator()(const Zero&) const { return Mat::Zero(sig.m1(), sig.m2()); }
    Mat operator()(const Constant& c) const { return c.v0; }
    Mat operator()(const PlaneWave& p) const {
      return p.q * std::exp(kI * (p.k * x - p.omega * p.t));
    }
    Mat operator()(const Sampled& s) const {
      if (x <= s.x.front()) return s.y.front();
      if (x >= s.x.back()) return s.y.back();
      const auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - s.x.begin()) - 1;
      const double h = s.x[i + 1] - s.x[i];
      const double a = s.x[i + 1] - x, b = x - s.x[i];
      return s.second[i] * (a * a * a / (6 * h)) + s.second[i + 1] * (b * b * b / (6 * h)) +
             (s.y[i] / h - s.second[i] * (h / 6)) * a + (s.y[i + 1] / h - s.second[i + 1] * (h / 6)) * b;
    }
  };
  return std::visit(Visitor{sig_, x}, data_);
}

Mat PotentialProfile::derivative(double x) const {
  struct Visitor {
    const Signature& sig;
    double x;
    Mat operator()(const Zero&) const { return Mat::Zero(sig.m1(), sig.m2()); }
    Mat operator()(const Constant&) const { return Mat::Zero(sig.m1(), sig.m2()); }
    Mat operator()(const PlaneWave& p) const {
      return (kI * p.k) * p.q * std::exp(kI * (p.k * x - p.omega * p.t));
    }
    Mat operator()(const Sampled& s) const {
      if (x < s.x.front() || x > s.x.back()) return Mat::Zero(sig.m1(), sig.m2());
      auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
      if (it == s.x.end()) --it;
      const std::size_t i = static_cast<std::size_t>(it - s.x.begin()) - 1;
      const double h = s.x[i + 1] - s.x[i];
      const double a = s.x[i + 1] - x, b = x - s.x[i];
      return -s.second[i] * (a * a / (2 * h)) + s.second[i + 1] * (b * b / (2 * h)) +
             (s.y[i + 1] - s.y[i]) / h - (s.second[i + 1] - s.second[i]) * (h / 6);
    }
  };
  return std::visit(Visitor{sig_, x}, data_);
}

double PotentialProfile::sup_norm() const {
  struct Visitor {
    double operator()(const Zero&) const { return 0.0; }
    double operator()(const Constant& c) const { return linalg::op_norm(c.v0); }
    double operator()(const PlaneWave& p) const { return linalg::op_norm(p.q); }
    double operator()(const Sampled& s) const {
      double m = 0.0;
      for (const auto& y : s.y) m = std::max(m, linalg::op_norm(y));
      return m;
    }
  };
  return std::visit(Visitor{}, data_);
}

}  // namespace weylstrip
