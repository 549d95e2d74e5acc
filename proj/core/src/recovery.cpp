#include "weylstrip/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace weylstrip {

namespace {

constexpr long double kBlowUp = 1e150L;

long double multinomial(int k, int a, int b, int c) {
  return std::exp(std::lgamma(k + 1.0L) - std::lgamma(a + 1.0L) - std::lgamma(b + 1.0L) - std::lgamma(c + 1.0L));
}

// Pointwise Leibniz expansion on already-evaluated node values.
std::vector<MatL> cube_at_nodes(const std::vector<std::vector<MatL>>& node_values, int k) {
  const std::size_t nodes = node_values[0].size();
  const auto rows = node_values[0][0].rows(), cols = node_values[0][0].cols();
  std::vector<MatL> out(nodes, MatL::Zero(rows, cols));
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; a + b <= k; ++b) {
      const int c = k - a - b;
      const long double coef = std::round(multinomial(k, a, b, c));
      for (std::size_t i = 0; i < nodes; ++i) {
        out[i] += coef * (node_values[static_cast<std::size_t>(a)][i] *
                          node_values[static_cast<std::size_t>(b)][i].adjoint() *
                          node_values[static_cast<std::size_t>(c)][i]);
      }
    }
  }
  return out;
}

}  // namespace

MatrixSeries leibniz_cube(const std::vector<MatrixSeries>& w, int k, int degree) {
  if (k < 0 || static_cast<std::size_t>(k) >= w.size()) throw PreconditionError("leibniz_cube: order exceeds jet");
  if (k > kMaxLeibnizOrder) throw PreconditionError("leibniz_cube: order above multinomial cap");
  std::vector<std::vector<MatL>> nodes;
  for (int i = 0; i <= k; ++i) nodes.push_back(w[static_cast<std::size_t>(i)].lobatto_values(degree));
  return MatrixSeries::from_lobatto_values(cube_at_nodes(nodes, k), w[0].a(), w[0].b(), kChopExtended);
}

CornerJet corner_jet(const BoundaryTrace& trace, int K) {
  if (K < 2) throw PreconditionError("corner_jet: K must be at least 2");
  if (K > kMaxLeibnizOrder + 2) throw PreconditionError("corner_jet: K above multinomial cap");
  if (trace.degree() < K + 4) {
    throw PreconditionError("corner_jet: trace degree " + std::to_string(trace.degree()) + " < K + 4 = " +
                            std::to_string(K + 4));
  }
  CornerJet jet;
  jet.K = K;
  jet.degree = trace.degree();
  jet.w = {trace.v0_series(), trace.v1_series()};
  const double a = trace.v0_series().a(), b = trace.v0_series().b();
  std::vector<std::vector<MatL>> node_values{jet.w[0].lobatto_values(jet.degree), jet.w[1].lobatto_values(jet.degree)};
  const lcplx two_i(0.0L, 2.0L);

  for (int r = 0; r + 2 <= K; ++r) {
    const auto cube = cube_at_nodes(node_values, r);
    const auto dt = jet.w[static_cast<std::size_t>(r)].derivative().lobatto_values(jet.degree);
    std::vector<MatL> next(cube.size());
    for (std::size_t i = 0; i < cube.size(); ++i) next[i] = 2.0L * cube[i] - two_i * dt[i];
    MatrixSeries wk = MatrixSeries::from_lobatto_values(next, a, b, kChopExtended);
    const long double mag = wk.max_coeff();
    if (!std::isfinite(mag) || mag > kBlowUp) {
      throw NumericalError("corner_jet", "series blow-up at k=" + std::to_string(r + 2));
    }
    node_values.push_back(wk.lobatto_values(jet.degree));
    jet.w.push_back(std::move(wk));
  }
  jet.jet0.reserve(jet.w.size());
  for (const auto& w : jet.w) jet.jet0.push_back(w(0.0));
  return jet;
}

double CornerJet::recursion_residual() const {
  if (w.size() < 3) return 0.0;
  std::vector<std::vector<MatL>> node_values;
  for (const auto& s : w) node_values.push_back(s.lobatto_values(degree));
  const lcplx two_i(0.0L, 2.0L);
  long double worst = 0.0L;
  for (int r = 0; r + 2 <= K; ++r) {
    const auto cube = cube_at_nodes(node_values, r);
    const auto dt = w[static_cast<std::size_t>(r)].derivative().lobatto_values(degree);
    for (std::size_t i = 0; i < cube.size(); ++i) {
      const MatL res = node_values[static_cast<std::size_t>(r) + 2][i] - 2.0L * cube[i] + two_i * dt[i];
      worst = std::max(worst, res.cwiseAbs().maxCoeff());
    }
  }
  return static_cast<double>(worst);
}

TaylorSynthesis taylor_reconstruct(const CornerJet& jet, const std::vector<double>& x_grid, int K_use) {
  if (K_use < 0 || K_use > jet.K) throw PreconditionError("taylor_reconstruct: K_use must lie in [0, K]");
  TaylorSynthesis out;
  out.x = x_grid;
  const auto rows = jet.jet0[0].rows(), cols = jet.jet0[0].cols();
  for (double x : x_grid) {
    Mat sum = Mat::Zero(rows, cols);
    double term_scale = 1.0;  // x^k / k!
    for (int k = 0; k <= K_use; ++k) {
      if (k > 0) term_scale *= x / k;
      sum += term_scale * jet.jet0[static_cast<std::size_t>(k)];
    }
    out.values.push_back(std::move(sum));
    out.last_term.push_back(std::abs(term_scale) * jet.jet0[static_cast<std::size_t>(K_use)].norm());
  }
  return out;
}

QuasiAnalyticBounds QuasiAnalyticBounds::from_values(const std::vector<double>& Mk, double a) {
  std::vector<double> logs;
  logs.reserve(Mk.size());
  for (double m : Mk) {
    if (!(m > 0.0)) throw PreconditionError("QuasiAnalyticBounds: constants must be positive");
    logs.push_back(std::log(m));
  }
  return from_logs(std::move(logs), a);
}

QuasiAnalyticBounds QuasiAnalyticBounds::from_logs(std::vector<double> log_Mk, double a) {
  if (a < 0.0) throw PreconditionError("QuasiAnalyticBounds: a must be nonnegative");
  for (double l : log_Mk) {
    if (!std::isfinite(l)) throw PreconditionError("QuasiAnalyticBounds: constants must be positive and finite");
  }
  return {std::move(log_Mk), a};
}

DenjoyCarlemanReport denjoy_carleman_diagnostic(const QuasiAnalyticBounds& bounds, int N) {
  if (N < 1) throw PreconditionError("denjoy_carleman_diagnostic: N must be positive");
  if (static_cast<std::size_t>(N) >= bounds.log_Mk.size()) {
    throw PreconditionError("denjoy_carleman_diagnostic: need M_k for k = 0..N");
  }
  DenjoyCarlemanReport out;
  out.window_end = N;
  out.L.assign(static_cast<std::size_t>(N), 0.0);
  // Suffix minimum of log(M_k)/k over [n, N].
  double running = std::numeric_limits<double>::infinity();
  for (int n = N; n >= 1; --n) {
    running = std::min(running, bounds.log_Mk[static_cast<std::size_t>(n)] / n);
    out.L[static_cast<std::size_t>(n) - 1] = std::exp(running);
  }
  out.partial_sums.reserve(out.L.size());
  double sum = 0.0;
  for (double l : out.L) {
    sum += 1.0 / l;
    out.partial_sums.push_back(sum);
  }
  if (N >= 4) {
    auto at = [&](int n) { return out.partial_sums[static_cast<std::size_t>(n) - 1]; };
    const double last = at(N) - at(N / 2);
    const double previous = at(N / 2) - at(N / 4);
    // Summable 1/L_n ~ n^{-p} with p > 1 shrinks octave increments by 2^{1-p}.
    out.divergent_trend = previous > 0.0 && last >= 0.9 * previous;
  }
  return out;
}

}  // namespace weylstrip
