#include <benchmark/benchmark.h>

#include "gaussent/multimode.hpp"
#include "gaussent/phasespace.hpp"
#include "gaussent/sharing.hpp"
#include "gaussent/teleport.hpp"

namespace {

gaussent::CovarianceMatrix ghz(std::size_t n, double r) {
  return gaussent::ghz_type_state({n, r, 1.0});
}

void BM_SymplecticSpectrum(benchmark::State& state) {
  const auto cm = ghz(static_cast<std::size_t>(state.range(0)), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(gaussent::symplectic_spectrum(cm));
}
BENCHMARK(BM_SymplecticSpectrum)->Arg(2)->Arg(8)->Arg(20)->Arg(50);

void BM_Williamson(benchmark::State& state) {
  const auto pure = ghz(static_cast<std::size_t>(state.range(0)), 0.7);
  const auto cm = gaussent::partial_trace(pure, {0, 1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(gaussent::williamson(cm));
}
BENCHMARK(BM_Williamson)->Arg(4)->Arg(8)->Arg(20);

void BM_BlockLogNegativity(benchmark::State& state) {
  const auto cm = ghz(20, 0.9);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gaussent::block_log_negativity(cm, k));
}
BENCHMARK(BM_BlockLogNegativity)->Arg(1)->Arg(5)->Arg(10);

void BM_GaussianContangleTwoMode(benchmark::State& state) {
  const auto pair = gaussent::partial_trace(ghz(3, 0.5), {0, 1});
  for (auto _ : state) benchmark::DoNotOptimize(gaussent::gaussian_contangle_two_mode(pair));
}
BENCHMARK(BM_GaussianContangleTwoMode)->Unit(benchmark::kMillisecond);

void BM_ResidualContangleMixed(benchmark::State& state) {
  const auto cm = gaussent::traced_ghz_state(3, 1, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(gaussent::residual_contangle(cm));
}
BENCHMARK(BM_ResidualContangleMixed)->Unit(benchmark::kMillisecond);

void BM_OptimalFidelity(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gaussent::optimal_fidelity(n, 0.5));
}
BENCHMARK(BM_OptimalFidelity)->Arg(3)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
