#include <benchmark/benchmark.h>

#include <cmath>

#include "lane_emden/limit_theory.hpp"
#include "lane_emden/profile.hpp"
#include "lane_emden/radial_ode.hpp"
#include "lane_emden/spectral.hpp"
#include "lane_emden/tridiagonal.hpp"

namespace le = lane_emden;

static void BM_SolveNodal(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto sol = le::solve_nodal(p, 2);
    benchmark::DoNotOptimize(sol.u0);
  }
}
BENCHMARK(BM_SolveNodal)->Arg(3)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_SturmCount(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  le::SymTridiagonal t;
  t.diag.assign(n, 2.0);
  t.off.assign(n - 1, -1.0);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] -= 1.5 * std::exp(-double(i) / double(n) * 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(le::sturm_count(t, 0.0).below);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SturmCount)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

static void BM_WeightedEigs(benchmark::State& state) {
  const auto sol = le::solve_nodal(static_cast<double>(state.range(0)), 2);
  const double li = le::annulus_log_inner(sol, {});
  const int M = static_cast<int>(-li / 4e-3);
  const auto prob = le::build_problem_log(sol, li, M, true);
  for (auto _ : state) {
    auto s = le::weighted_radial_eigs(prob, 4);
    benchmark::DoNotOptimize(s.betas.data());
  }
}
BENCHMARK(BM_WeightedEigs)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_MorseIndex(benchmark::State& state) {
  const auto sol = le::solve_nodal(static_cast<double>(state.range(0)), 2);
  for (auto _ : state) {
    auto r = le::morse_index(sol);
    benchmark::DoNotOptimize(r.total);
  }
}
BENCHMARK(BM_MorseIndex)->Arg(400)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_LimitConstants(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(le::limit_constants().H);
}
BENCHMARK(BM_LimitConstants);

static void BM_TestFunctionQuotient(benchmark::State& state) {
  le::TestFunctionSpec spec;
  for (auto _ : state)
    benchmark::DoNotOptimize(le::test_function_quotient(spec, le::QuotientMode::Limit).quotient);
}
BENCHMARK(BM_TestFunctionQuotient)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
