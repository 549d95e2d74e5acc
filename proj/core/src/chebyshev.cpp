#include "weylstrip/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weylstrip/linalg.hpp"

namespace weylstrip {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

long double to_unit(long double t, double a, double b) { return (2.0L * t - a - b) / (static_cast<long double>(b) - a); }

}  // namespace

ChebSeries::ChebSeries(std::vector<lcplx> coeffs, double a, double b) : coeffs_(std::move(coeffs)), a_(a), b_(b) {
  if (coeffs_.empty()) coeffs_.push_back(lcplx{});
  if (!(b > a)) throw PreconditionError("ChebSeries: interval must satisfy a < b");
}

std::vector<long double> ChebSeries::lobatto_nodes(int degree, double a, double b) {
  std::vector<long double> t(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j) {
    const long double x = degree == 0 ? 0.0L : std::cos(kPi * j / degree);
    t[static_cast<std::size_t>(j)] = 0.5L * (a + b) + 0.5L * (static_cast<long double>(b) - a) * x;
  }
  return t;
}

ChebSeries ChebSeries::from_lobatto_values(std::span<const lcplx> values, double a, double b) {
  const int n = static_cast<int>(values.size()) - 1;
  if (n < 0) return ChebSeries({}, a, b);
  if (n == 0) return ChebSeries({values[0]}, a, b);
  std::vector<lcplx> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    lcplx sum{};
    for (int j = 0; j <= n; ++j) {
      const long double w = (j == 0 || j == n) ? 0.5L : 1.0L;
      // cos(pi j k / n) with the argument reduced exactly in integers.
      const long double ang = kPi * static_cast<long double>((static_cast<long long>(j) * k) % (2 * n)) / n;
      sum += w * values[static_cast<std::size_t>(j)] * std::cos(ang);
    }
    c[static_cast<std::size_t>(k)] = (2.0L / n) * sum;
  }
  c.front() *= 0.5L;
  c.back() *= 0.5L;
  return ChebSeries(std::move(c), a, b);
}

ChebSeries ChebSeries::interpolate(const std::function<lcplx(long double)>& f, double a, double b, int degree) {
  const auto nodes = lobatto_nodes(degree, a, b);
  std::vector<lcplx> v(nodes.size());
  std::transform(nodes.begin(), nodes.end(), v.begin(), f);
  return from_lobatto_values(v, a, b);
}

lcplx ChebSeries::operator()(long double t) const {
  const long double x = to_unit(t, a_, b_);
  lcplx b1{}, b2{};
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    const lcplx b0 = coeffs_[k] + 2.0L * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + x * b1 - b2;
}

ChebSeries ChebSeries::derivative() const {
  const std::size_t n = coeffs_.size() - 1;
  if (n == 0) return ChebSeries({lcplx{}}, a_, b_);
  std::vector<lcplx> d(n + 2, lcplx{});
  for (std::size_t k = n; k >= 1; --k) d[k - 1] = d[k + 1] + 2.0L * static_cast<long double>(k) * coeffs_[k];
  d[0] *= 0.5L;
  d.resize(n);
  const long double scale = 2.0L / (static_cast<long double>(b_) - a_);
  for (auto& x : d) x *= scale;
  return ChebSeries(std::move(d), a_, b_);
}

long double ChebSeries::max_coeff() const {
  long double m = 0.0L;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

ChebSeries ChebSeries::chopped(long double rel) const {
  const long double cutoff = rel * max_coeff();
  std::size_t keep = coeffs_.size();
  while (keep > 1 && std::abs(coeffs_[keep - 1]) <= cutoff) --keep;
  return ChebSeries(std::vector<lcplx>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(keep)), a_, b_);
}

MatrixSeries::MatrixSeries(int rows, int cols, std::vector<ChebSeries> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (static_cast<int>(entries_.size()) != rows * cols) throw DimensionError("MatrixSeries: entry count mismatch");
}

MatrixSeries MatrixSeries::zero(int rows, int cols, double a, double b) {
  return MatrixSeries(rows, cols, std::vector<ChebSeries>(static_cast<std::size_t>(rows * cols), ChebSeries({}, a, b)));
}

MatrixSeries MatrixSeries::interpolate(const std::function<MatL(long double)>& f, int rows, int cols, double a,
                                       double b, int degree, long double chop) {
  const auto nodes = ChebSeries::lobatto_nodes(degree, a, b);
  std::vector<MatL> values;
  values.reserve(nodes.size());
  for (long double t : nodes) {
    MatL v = f(t);
    if (v.rows() != rows || v.cols() != cols) throw DimensionError("MatrixSeries::interpolate: evaluator shape");
    values.push_back(std::move(v));
  }
  return from_lobatto_values(values, a, b, chop);
}

MatrixSeries MatrixSeries::from_lobatto_values(const std::vector<MatL>& values, double a, double b, long double chop) {
  if (values.empty()) throw PreconditionError("MatrixSeries: no values");
  const int rows = static_cast<int>(values[0].rows()), cols = static_cast<int>(values[0].cols());
  std::vector<ChebSeries> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  std::vector<lcplx> column(values.size());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      for (std::size_t j = 0; j < values.size(); ++j) column[j] = values[j](r, c);
      entries.push_back(ChebSeries::from_lobatto_values(column, a, b).chopped(chop));
    }
  }
  return MatrixSeries(rows, cols, std::move(entries));
}

MatL MatrixSeries::at(long double t) const {
  MatL m(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(r, c) = entry(r, c)(t);
  return m;
}

Mat MatrixSeries::operator()(double t) const { return at(t).cast<cplx>(); }

std::vector<MatL> MatrixSeries::lobatto_values(int degree) const {
  const auto nodes = ChebSeries::lobatto_nodes(degree, a(), b());
  std::vector<MatL> out;
  out.reserve(nodes.size());
  for (long double t : nodes) out.push_back(at(t));
  return out;
}

MatrixSeries MatrixSeries::derivative() const {
  std::vector<ChebSeries> d;
  d.reserve(entries_.size());
  for (const auto& e : entries_) d.push_back(e.derivative());
  return MatrixSeries(rows_, cols_, std::move(d));
}

long double MatrixSeries::max_coeff() const {
  long double m = 0.0L;
  for (const auto& e : entries_) m = std::max(m, e.max_coeff());
  return m;
}

int MatrixSeries::max_degree() const {
  int d = 0;
  for (const auto& e : entries_) d = std::max(d, e.degree());
  return d;
}

double MatrixSeries::sup_norm(int samples) const {
  double m = 0.0;
  const int n = std::max(samples, 2);
  for (int i = 0; i < n; ++i) {
    const double t = a() + (b() - a()) * i / (n - 1);
    m = std::max(m, linalg::op_norm((*this)(t)));
  }
  return m;
}

}  // namespace weylstrip
