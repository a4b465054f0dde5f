// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "spdecov/bounds.hpp"
#include "spdecov/elliptic.hpp"
#include "spdecov/lradi.hpp"
#include "spdecov/mc.hpp"

using namespace spdecov;

static void BM_CompleteK(benchmark::State& state) {
  double k = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(elliptic::complete_K(k));
    k = k < 0.9 ? k + 1e-6 : 0.3;
  }
}
BENCHMARK(BM_CompleteK);

static void BM_JacobiDn(benchmark::State& state) {
  const double k = 0.99;
  const double K = elliptic::complete_K(k);
  double u = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(elliptic::jacobi_dn(u, k));
    u = u < K ? u + 1e-6 : 0.1;
  }
}
BENCHMARK(BM_JacobiDn);

static void BM_WachspressShifts(benchmark::State& state) {
  const SpectralInterval iv{-1e6, -1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(wachspress_shifts(iv, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_WachspressShifts)->Arg(8)->Arg(32);

static void BM_ShiftedSolveTridiag(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SymMatrix a = build_laplacian_1d(n, 1.0);
  const TallMatrix w(Eigen::MatrixXd::Ones(n, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(shifted_solve(a, -10.0, w));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ShiftedSolveTridiag)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

static void BM_LrAdi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ProblemSpec spec;
  spec.noise_rank = 2;
  spec.upsilon = 1.0;
  const SymMatrix a = build_laplacian_1d(n, 1.0);
  const TallMatrix b = build_noise_factor(spec, n, Eigen::VectorXd::Zero(n));
  const auto shifts = wachspress_shifts(spectral_interval(a), 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lr_adi_run(a, b, shifts, {12, 0.0}));
  }
}
BENCHMARK(BM_LrAdi)->Arg(256)->Arg(1024);

static void BM_DenseLyapunov(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SymMatrix a = build_laplacian_1d(n, 1.0);
  const TallMatrix b(Eigen::MatrixXd::Ones(n, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dense_lyapunov(a, b));
  }
}
BENCHMARK(BM_DenseLyapunov)->Arg(100)->Arg(200);

static void BM_EulerMaruyama(benchmark::State& state) {
  ProblemSpec spec;
  spec.length = 20.0;
  spec.nonlinearity = Nonlinearity::cubic(1.0);
  spec.upsilon = 0.1;
  spec.noise_rank = 2;
  spec.steady_guess = SteadyGuess::bump;
  const DiscretizedSystem sys = build_system(spec, 50);
  SimConfig cfg;
  cfg.T = 0.5;
  cfg.M = static_cast<int>(state.range(0));
  cfg.seed = 1;
  cfg.output_points = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_nonlinear(sys, cfg));
  }
}
BENCHMARK(BM_EulerMaruyama)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
