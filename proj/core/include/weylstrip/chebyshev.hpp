#pragma once

#include <functional>
#include <span>
#include <vector>

#include "weylstrip/types.hpp"

namespace weylstrip {

// Series arithmetic runs in extended precision: each recursion level of the
// corner jet differentiates once more, and the extra bits keep the endpoint
// derivatives of the boundary data accurate.
using lcplx = std::complex<long double>;
using MatL = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;

/// Relative coefficient cutoff for extended-precision data.
inline constexpr long double kChopExtended = 1e-17L;
/// Relative coefficient cutoff for data that only carries double precision.
inline constexpr long double kChopDouble = 1e-15L;

/// Complex Chebyshev series on [a, b].
class ChebSeries {
 public:
  ChebSeries() : coeffs_{lcplx{}} {}
  ChebSeries(std::vector<lcplx> coeffs, double a, double b);

  /// Interpolates f at the degree+1 Chebyshev-Lobatto points of [a, b].
  static ChebSeries interpolate(const std::function<lcplx(long double)>& f, double a, double b, int degree);
  /// values[j] belongs to lobatto_nodes(degree, a, b)[j].
  static ChebSeries from_lobatto_values(std::span<const lcplx> values, double a, double b);
  static std::vector<long double> lobatto_nodes(int degree, double a, double b);

  lcplx operator()(long double t) const;
  cplx eval(double t) const { return cplx((*this)(t)); }

  ChebSeries derivative() const;
  /// Drops trailing coefficients below rel * max |c_k|.
  ChebSeries chopped(long double rel) const;

  const std::vector<lcplx>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double a() const { return a_; }
  double b() const { return b_; }
  long double max_coeff() const;

 private:
  std::vector<lcplx> coeffs_;
  double a_ = 0.0;
  double b_ = 1.0;
};

/// Matrix of Chebyshev series sharing one interval, stored row-major.
class MatrixSeries {
 public:
  MatrixSeries() = default;
  MatrixSeries(int rows, int cols, std::vector<ChebSeries> entries);

  static MatrixSeries zero(int rows, int cols, double a, double b);
  static MatrixSeries interpolate(const std::function<MatL(long double)>& f, int rows, int cols, double a, double b,
                                  int degree, long double chop);
  static MatrixSeries from_lobatto_values(const std::vector<MatL>& values, double a, double b, long double chop);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double a() const { return entries_.empty() ? 0.0 : entries_.front().a(); }
  double b() const { return entries_.empty() ? 1.0 : entries_.front().b(); }
  const ChebSeries& entry(int r, int c) const { return entries_[static_cast<std::size_t>(r * cols_ + c)]; }

  MatL at(long double t) const;
  Mat operator()(double t) const;
  std::vector<MatL> lobatto_values(int degree) const;

  MatrixSeries derivative() const;
  /// Largest coefficient magnitude over all entries.
  long double max_coeff() const;
  int max_degree() const;
  /// max ||value(t)|| over a uniform check grid of `samples` points.
  double sup_norm(int samples = 257) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<ChebSeries> entries_;
};

}  // namespace weylstrip
