#include <benchmark/benchmark.h>

#include <numbers>

#include "nnsr/prox.hpp"
#include "nnsr/rng.hpp"
#include "nnsr/solver.hpp"
#include "nnsr/svd.hpp"
#include "nnsr/svt.hpp"
#include "nnsr/synth.hpp"

using namespace nnsr;

static void BM_prox_how(benchmark::State& state) {
  Rng rng(1);
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-6;
    benchmark::DoNotOptimize(prox_how(2.0 + x, 1.0, std::numbers::sqrt2));
  }
}
BENCHMARK(BM_prox_how);

static void BM_thin_svd(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(2);
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(thin_svd(a));
  }
}
BENCHMARK(BM_thin_svd)->Arg(50)->Arg(100)->Arg(200);

static void BM_sv_shrink(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(3);
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  const ShrinkSpec spec{0.5, 0.7, ShrinkKind::how};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sv_shrink(a, spec));
  }
}
BENCHMARK(BM_sv_shrink)->Arg(50)->Arg(100)->Arg(200);

static void BM_solver_step(benchmark::State& state) {
  const Index n = state.range(0);
  SyntheticSpec spec{n, n, 3, 0.8, 0.2, 100.0, 4};
  const Matrix x =
      project_mask(inject_outliers(gen_lowrank(spec), spec), gen_mask(spec));
  const ObservationMask mask = gen_mask(spec);
  const SolverConfig cfg = SolverConfig::defaults_for(n, n);
  SolveState st;
  st.m = Matrix::Zero(n, n);
  st.s = Matrix::Zero(n, n);
  st.lagrange = Matrix::Zero(n, n);
  st.rho = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(st, x, mask, cfg));
  }
}
BENCHMARK(BM_solver_step)->Arg(50)->Arg(100)->Arg(200);

static void BM_full_solve(benchmark::State& state) {
  const Index n = state.range(0);
  SyntheticSpec spec{n, n, 3, 0.8, 0.2, 100.0, 5};
  const Matrix x = inject_outliers(gen_lowrank(spec), spec);
  const ObservationMask mask = gen_mask(spec);
  const SolverConfig cfg = SolverConfig::defaults_for(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nnsr_solve(x, mask, cfg));
  }
}
BENCHMARK(BM_full_solve)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
