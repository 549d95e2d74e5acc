#include <benchmark/benchmark.h>

#include "weylstrip/boundary.hpp"
#include "weylstrip/potential.hpp"
#include "weylstrip/propagator.hpp"
#include "weylstrip/recovery.hpp"
#include "weylstrip/verify.hpp"
#include "weylstrip/weyl.hpp"

using namespace weylstrip;

namespace {

Mat amplitude(int m1, int m2) {
  Mat q = Mat::Zero(m1, m2);
  for (int i = 0; i < std::min(m1, m2); ++i) q(i, i) = 0.3;
  return q;
}

// Arg: tolerance exponent.
void BM_PropagateU(benchmark::State& state) {
  const auto profile = PotentialProfile::plane_wave(amplitude(2, 2), 1.0, 0.68);
  IntegratorOptions opts;
  opts.tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_u(profile, SpectralParameter(0.3, 1.0), 20.0, opts));
  }
}
BENCHMARK(BM_PropagateU)->Arg(6)->Arg(9)->Arg(12)->Unit(benchmark::kMillisecond);

// Arg: m1 = m2.
void BM_WeylEstimate(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto profile = PotentialProfile::plane_wave(amplitude(m, m), 1.0, 0.5 + 0.09);
  WeylOptions opts;
  opts.stop_below = 1e-8;
  opts.integrator.tol = 1e-10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(weyl_estimate(profile, SpectralParameter(0.5, 0.5), 200.0, opts));
  }
}
BENCHMARK(BM_WeylEstimate)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// Arg: jet order K.
void BM_CornerJet(benchmark::State& state) {
  const auto trace = plane_wave_trace(amplitude(1, 1), 1.0, 0.59, 1.0, 40);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(corner_jet(trace, K));
}
BENCHMARK(BM_CornerJet)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ZeroCurvatureResidual(benchmark::State& state) {
  const auto field = ExactField::plane_wave(amplitude(2, 1), 1.0);
  const int n = static_cast<int>(state.range(0));
  const auto grid = SolutionField::sample(field, 0.0, 1.0, n + 1, 0.0, 1.0, n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(zero_curvature_residual(grid, cplx(0.5, 0.5)));
}
BENCHMARK(BM_ZeroCurvatureResidual)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
