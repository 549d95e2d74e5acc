#pragma once

#include "weylstrip/types.hpp"

namespace weylstrip::linalg {

double max_abs(const Mat& a);
double op_norm(const Mat& a);
double min_singular_value(const Mat& a);

/// Extreme eigenvalues of the Hermitian part (a + a*)/2.
double min_eigenvalue(const Mat& hermitian);
double max_eigenvalue(const Mat& hermitian);

Mat hermitian_part(const Mat& a);

/// Principal square root of a Hermitian positive semidefinite matrix;
/// negative eigenvalues are clipped to zero.
Mat psd_sqrt(const Mat& hermitian);

/// Solves x * a = b for x, i.e. returns b * a^{-1}. Throws NumericalError
/// (stage `stage`) when a is numerically singular.
Mat right_divide(const Mat& b, const Mat& a, const char* stage);

}  // namespace weylstrip::linalg
