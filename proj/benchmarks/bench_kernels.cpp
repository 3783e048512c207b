#include <benchmark/benchmark.h>

#include "flans/integrator.hpp"
#include "flans/operators.hpp"
#include "flans/spectral.hpp"

namespace {

flans::SpectralField sample_field(int dim, int n) {
  flans::InitialData init;
  init.kind = flans::InitKind::RandomSpectrum;
  init.seed = 5;
  return flans::make_initial(init, flans::make_grid(dim, n));
}

// Args: dim, N
void BM_RoundTrip(benchmark::State& state) {
  const auto u = sample_field(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto back = flans::to_spectral(flans::to_physical(u), u.grid());
    benchmark::DoNotOptimize(back);
  }
}

void BM_RhsF(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto u = sample_field(dim, static_cast<int>(state.range(1)));
  const auto p = flans::make_params(dim, 0.5, 0.1, dim / 4.0);
  for (auto _ : state) {
    auto f = flans::rhs_f(u, u, p);
    benchmark::DoNotOptimize(f);
  }
}

void BM_Step(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto u = sample_field(dim, static_cast<int>(state.range(1)));
  const auto p = flans::make_params(dim, 0.5, 0.1, dim / 4.0);
  const flans::StepScheme scheme{};
  for (auto _ : state) {
    auto next = flans::step(u, p, scheme, 1e-3);
    benchmark::DoNotOptimize(next);
  }
}

#define FLANS_SIZES ->Args({2, 64})->Args({2, 128})->Args({3, 32})->Unit(benchmark::kMillisecond)

BENCHMARK(BM_RoundTrip) FLANS_SIZES;
BENCHMARK(BM_RhsF) FLANS_SIZES;
BENCHMARK(BM_Step) FLANS_SIZES;

}  // namespace

BENCHMARK_MAIN();
