#pragma once

#include "weylstrip/types.hpp"

namespace weylstrip {

/// V = [[0, v], [v*, 0]]. Hermitian, anticommutes with j.
Mat assemble_V(const Mat& v, const Signature& sig);

/// Coefficient of the space system u_x = G u: G = i(z j + j V).
Mat build_G(cplx z, const Mat& v, const Signature& sig);

/// Coefficient of the time system R_t = F R:
/// F = -i(z^2 j + z j V - (i V_x - j V^2) / 2).
Mat build_F(cplx z, const Mat& v, const Mat& v_x, const Signature& sig);

/// sample* j sample
Mat h_form(const Mat& sample, const Signature& sig);

}  // namespace weylstrip
