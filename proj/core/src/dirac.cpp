#include "weylstrip/dirac.hpp"

namespace weylstrip {

namespace {

void check_block(const Mat& v, const Signature& sig, const char* what) {
  if (v.rows() != sig.m1() || v.cols() != sig.m2()) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(sig.m1()) + "x" +
                         std::to_string(sig.m2()) + ", got " + std::to_string(v.rows()) + "x" +
                         std::to_string(v.cols()));
  }
}

}  // namespace

Mat assemble_V(const Mat& v, const Signature& sig) {
  check_block(v, sig, "assemble_V");
  Mat V = Mat::Zero(sig.m(), sig.m());
  V.topRightCorner(sig.m1(), sig.m2()) = v;
  V.bottomLeftCorner(sig.m2(), sig.m1()) = v.adjoint();
  return V;
}

Mat build_G(cplx z, const Mat& v, const Signature& sig) {
  const Mat j = sig.j();
  return kI * (z * j + j * assemble_V(v, sig));
}

Mat build_F(cplx z, const Mat& v, const Mat& v_x, const Signature& sig) {
  check_block(v_x, sig, "build_F (v_x)");
  const Mat j = sig.j();
  const Mat V = assemble_V(v, sig);
  const Mat Vx = assemble_V(v_x, sig);
  return -kI * (z * z * j + z * j * V - 0.5 * (kI * Vx - j * V * V));
}

Mat h_form(const Mat& sample, const Signature& sig) {
  if (sample.rows() != sig.m() || sample.cols() != sig.m()) {
    throw DimensionError("h_form: sample must be m x m");
  }
  Mat h = sample.adjoint() * sig.j() * sample;
  return 0.5 * (h + h.adjoint());
}

}  // namespace weylstrip
