#include "weylstrip/boundary.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace weylstrip {

namespace {

void require_degree(int degree) {
  if (degree < 4) throw PreconditionError("ingest_boundary: degree must be at least 4");
}

MatrixSeries least_squares(const std::vector<double>& t, const std::vector<Mat>& values, double T, int degree) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd basis(n, degree + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = (2.0 * t[static_cast<std::size_t>(i)] - T) / T;
    basis(i, 0) = 1.0;
    if (degree >= 1) basis(i, 1) = x;
    for (int k = 2; k <= degree; ++k) basis(i, k) = 2.0 * x * basis(i, k - 1) - basis(i, k - 2);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  const int rows = static_cast<int>(values[0].rows()), cols = static_cast<int>(values[0].cols());
  std::vector<ChebSeries> entries;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Eigen::VectorXd re(n), im(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        re(i) = values[static_cast<std::size_t>(i)](r, c).real();
        im(i) = values[static_cast<std::size_t>(i)](r, c).imag();
      }
      const Eigen::VectorXd cr = qr.solve(re), ci = qr.solve(im);
      std::vector<lcplx> coeffs(static_cast<std::size_t>(degree) + 1);
      for (int k = 0; k <= degree; ++k) coeffs[static_cast<std::size_t>(k)] = lcplx(cr(k), ci(k));
      entries.push_back(ChebSeries(std::move(coeffs), 0.0, T).chopped(kChopDouble));
    }
  }
  return MatrixSeries(rows, cols, std::move(entries));
}

}  // namespace

BoundaryTrace::BoundaryTrace(MatrixSeries v0, MatrixSeries v1, double T, int degree, double fit_residual)
    : v0_(std::move(v0)), v1_(std::move(v1)), T_(T), degree_(degree), fit_residual_(fit_residual) {
  if (v0_.rows() != v1_.rows() || v0_.cols() != v1_.cols()) throw DimensionError("BoundaryTrace: v0/v1 shapes differ");
  const int check = std::max(257, 8 * degree + 1);
  sup_v0_ = v0_.sup_norm(check);
  sup_v1_ = v1_.sup_norm(check);
  if (!std::isfinite(sup_v0_) || !std::isfinite(sup_v1_)) throw NumericalError("ingest_boundary", "non-finite series");
}

BoundaryTrace ingest_boundary(const BoundaryFunction& v0, const BoundaryFunction& v1, const Signature& sig, double T,
                              int degree) {
  require_degree(degree);
  if (!(T > 0.0)) throw PreconditionError("ingest_boundary: T must be positive");
  auto checked = [&](const BoundaryFunction& f) {
    return [&f, &sig](long double t) {
      MatL v = f(t);
      if (v.rows() != sig.m1() || v.cols() != sig.m2()) throw DimensionError("ingest_boundary: evaluator shape");
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) {
          throw PreconditionError("ingest_boundary: non-finite sample");
        }
      }
      return v;
    };
  };
  MatrixSeries s0 = MatrixSeries::interpolate(checked(v0), sig.m1(), sig.m2(), 0.0, T, degree, kChopExtended);
  MatrixSeries s1 = MatrixSeries::interpolate(checked(v1), sig.m1(), sig.m2(), 0.0, T, degree, kChopExtended);

  double residual = 0.0;
  for (int j = 0; j < degree; ++j) {
    const long double theta = std::numbers::pi_v<long double> * (j + 0.5L) / degree;
    const long double t = 0.5L * T * (1.0L + std::cos(theta));
    residual = std::max(residual, static_cast<double>((s0.at(t) - v0(t)).cwiseAbs().maxCoeff()));
    residual = std::max(residual, static_cast<double>((s1.at(t) - v1(t)).cwiseAbs().maxCoeff()));
  }
  return BoundaryTrace(std::move(s0), std::move(s1), T, degree, residual);
}

BoundaryTrace ingest_boundary(const BoundarySamples& samples, double T, int degree) {
  require_degree(degree);
  if (!(T > 0.0)) throw PreconditionError("ingest_boundary: T must be positive");
  const std::size_t n = samples.t.size();
  if (samples.v0.size() != n || samples.v1.size() != n || n == 0) {
    throw PreconditionError("ingest_boundary: sample arrays must have equal nonzero length");
  }
  if (n < static_cast<std::size_t>(degree) + 1) {
    throw PreconditionError("ingest_boundary: need at least degree+1 samples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(samples.t[i]) || !samples.v0[i].allFinite() || !samples.v1[i].allFinite()) {
      throw PreconditionError("ingest_boundary: non-finite sample at row " + std::to_string(i));
    }
    if (i > 0 && !(samples.t[i] > samples.t[i - 1])) {
      throw PreconditionError("ingest_boundary: sample times must be strictly increasing");
    }
  }
  if (samples.t.front() < 0.0 || samples.t.back() > T * (1 + 1e-12)) {
    throw PreconditionError("ingest_boundary: sample times outside [0, T]");
  }
  MatrixSeries s0 = least_squares(samples.t, samples.v0, T, degree);
  MatrixSeries s1 = least_squares(samples.t, samples.v1, T, degree);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    residual = std::max(residual, (s0(samples.t[i]) - samples.v0[i]).cwiseAbs().maxCoeff());
    residual = std::max(residual, (s1(samples.t[i]) - samples.v1[i]).cwiseAbs().maxCoeff());
  }
  return BoundaryTrace(std::move(s0), std::move(s1), T, degree, residual);
}

BoundaryTrace plane_wave_trace(const Mat& q, double k, double omega, double T, int degree) {
  const Signature sig(static_cast<int>(q.rows()), static_cast<int>(q.cols()));
  const MatL ql = q.cast<lcplx>();
  const lcplx ik(0.0L, static_cast<long double>(k));
  auto v0 = [ql, omega](long double t) -> MatL {
    return ql * std::exp(lcplx(0.0L, -static_cast<long double>(omega) * t));
  };
  auto v1 = [ql, omega, ik](long double t) -> MatL {
    return (ik * std::exp(lcplx(0.0L, -static_cast<long double>(omega) * t))) * ql;
  };
  return ingest_boundary(v0, v1, sig, T, degree);
}

BoundarySamples read_boundary_csv(const std::string& path, const Signature& sig) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open boundary csv '" + path + "'");
  const int entries = sig.m1() * sig.m2();
  const int expected = 1 + 4 * entries;
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError("boundary csv '" + path + "' is empty");
  {
    // Header row is mandatory and must not parse as numbers.
    std::istringstream hs(line);
    std::string first;
    std::getline(hs, first, ',');
    char* end = nullptr;
    std::strtod(first.c_str(), &end);
    if (end != first.c_str()) throw PreconditionError("boundary csv '" + path + "' is missing its header row");
  }
  BoundarySamples out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw PreconditionError("boundary csv row " + std::to_string(row) + ": bad number '" + cell + "'");
      }
    }
    if (static_cast<int>(cells.size()) != expected) {
      throw PreconditionError("boundary csv row " + std::to_string(row) + ": expected " + std::to_string(expected) +
                              " columns, got " + std::to_string(cells.size()));
    }
    Mat a(sig.m1(), sig.m2()), b(sig.m1(), sig.m2());
    for (int e = 0; e < entries; ++e) {
      a(e / sig.m2(), e % sig.m2()) = cplx(cells[1 + 2 * e], cells[2 + 2 * e]);
      b(e / sig.m2(), e % sig.m2()) = cplx(cells[1 + 2 * entries + 2 * e], cells[2 + 2 * entries + 2 * e]);
    }
    out.t.push_back(cells[0]);
    out.v0.push_back(std::move(a));
    out.v1.push_back(std::move(b));
  }
  return out;
}

void write_boundary_csv(const std::string& path, const BoundarySamples& samples) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write boundary csv '" + path + "'");
  if (samples.v0.empty()) {
    out << "t\n";
    return;
  }
  const auto rows = samples.v0[0].rows(), cols = samples.v0[0].cols();
  out << "t";
  for (const char* name : {"v0", "v1"}) {
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) out << ',' << name << '_' << r << c << "_re," << name << '_' << r << c << "_im";
  }
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < samples.t.size(); ++i) {
    out << samples.t[i];
    for (const Mat* m : {&samples.v0[i], &samples.v1[i]}) {
      for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) out << ',' << (*m)(r, c).real() << ',' << (*m)(r, c).imag();
    }
    out << '\n';
  }
}

}  // namespace weylstrip
