#pragma once

#include <vector>

#include "weylstrip/boundary.hpp"
#include "weylstrip/chebyshev.hpp"
#include "weylstrip/types.hpp"

namespace weylstrip {

/// x-derivatives w_k(t) = d^k v / dx^k (0, t), k = 0..K, recovered from the
/// boundary data through the dNLS recursion.
struct CornerJet {
  std::vector<MatrixSeries> w;
  int K = 0;
  /// Collocation degree used for products and re-fits.
  int degree = 0;
  /// w_k(0)
  std::vector<Mat> jet0;

  /// max over k and collocation nodes of
  /// ||w_{k+2} - 2 d^k(v v* v) + 2i d/dt w_k||.
  double recursion_residual() const;
};

/// sum over a+b+c = k of k!/(a! b! c!) w_a w_b* w_c, formed pointwise on the
/// Chebyshev-Lobatto nodes of the given degree and re-fitted.
MatrixSeries leibniz_cube(const std::vector<MatrixSeries>& w, int k, int degree);

/// Largest order accepted by leibniz_cube.
inline constexpr int kMaxLeibnizOrder = 60;

/// Requires K >= 2 and trace.degree() >= K + 4.
CornerJet corner_jet(const BoundaryTrace& trace, int K);

struct TaylorSynthesis {
  std::vector<double> x;
  std::vector<Mat> values;
  /// |jet0_{K_use}| x^{K_use} / K_use! per grid point.
  std::vector<double> last_term;
};

/// Truncated Taylor series sum_{k <= K_use} jet0_k x^k / k!.
TaylorSynthesis taylor_reconstruct(const CornerJet& jet, const std::vector<double>& x_grid, int K_use);

/// Constants M_k of a Denjoy-Carleman class, stored as logarithms so that
/// sequences such as (k!)^2 stay representable.
struct QuasiAnalyticBounds {
  std::vector<double> log_Mk;  // index k = 0, 1, ...
  double a = 0.0;

  static QuasiAnalyticBounds from_values(const std::vector<double>& Mk, double a = 0.0);
  static QuasiAnalyticBounds from_logs(std::vector<double> log_Mk, double a = 0.0);
};

struct DenjoyCarlemanReport {
  /// L_n = inf_{n <= k <= N} M_k^{1/k}, n = 1..N
  std::vector<double> L;
  /// partial_sums[n-1] = sum_{i <= n} 1 / L_i
  std::vector<double> partial_sums;
  /// Last-octave growth comparable to the previous octave.
  bool divergent_trend = false;
  /// The infimum only sees k <= window_end.
  int window_end = 0;
};

DenjoyCarlemanReport denjoy_carleman_diagnostic(const QuasiAnalyticBounds& bounds, int N);

}  // namespace weylstrip
