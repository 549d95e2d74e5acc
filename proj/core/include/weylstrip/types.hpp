#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace weylstrip {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Block sizes of the Dirac system: v is m1 x m2, all system matrices are m x m.
class Signature {
 public:
  Signature(int m1, int m2);

  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int m() const { return m1_ + m2_; }

  /// diag(I_{m1}, -I_{m2})
  Mat j() const;

  bool operator==(const Signature&) const = default;

 private:
  int m1_;
  int m2_;
};

/// Spectral variable z. Weyl-function operations require Im(z) > 0; real
/// values are only meaningful for j-unitarity diagnostics.
class SpectralParameter {
 public:
  constexpr SpectralParameter() = default;
  constexpr explicit SpectralParameter(cplx z) : z_(z) {}
  constexpr SpectralParameter(double re, double im) : z_(re, im) {}

  constexpr cplx value() const { return z_; }
  constexpr double re() const { return z_.real(); }
  constexpr double im() const { return z_.imag(); }
  constexpr bool in_upper_half_plane() const { return z_.imag() > 0.0; }

  /// Throws PreconditionError when Im(z) <= 0.
  const SpectralParameter& require_upper(const char* where) const;

 private:
  cplx z_{0.0, 1.0};
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Failure of a numerical stage (integration, inversion, convergence).
class NumericalError : public Error {
 public:
  NumericalError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace weylstrip
