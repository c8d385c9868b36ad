#include <random>

#include <benchmark/benchmark.h>

#include "idec/kernel.hpp"
#include "idec/propagator.hpp"
#include "idec/random_instances.hpp"
#include "idec/serial.hpp"

using namespace idec;

namespace {

struct Instance {
  EnergySpectrum spectrum;
  DensityMatrix rho0;
};

Instance make_instance(int dim) {
  std::mt19937_64 rng(17);
  return {random_spectrum(dim, rng, 2.0), random_density(dim, rng)};
}

const KernelParams kParams(0.3, 1.0);

void BM_EvolveClosedParallel(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evolve(inst.rho0, inst.spectrum, kParams, 3.0, EvolutionMethod::of(Method::closed_form)));
  }
}

void BM_EvolveClosedSerial(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::evolve(inst.rho0, inst.spectrum, kParams, 3.0,
                                            EvolutionMethod::of(Method::closed_form)));
  }
}

void BM_MonteCarloTableParallel(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)));
  const auto table = bohr_frequencies(inst.spectrum);
  for (auto _ : state) {
    benchmark::DoNotOptimize(factor_table(table, kParams, 3.0, EvolutionMethod::monte_carlo(1, 20000)));
  }
}

void BM_MonteCarloTableSerial(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)));
  const auto table = bohr_frequencies(inst.spectrum);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        serial::factor_table(table, kParams, 3.0, EvolutionMethod::monte_carlo(1, 20000)));
  }
}

void BM_SampleParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_effective_time(kParams, 5.0, 9, n));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_SampleSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(serial::sample_effective_time(kParams, 5.0, 9, n));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_EvolveClosedParallel)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_EvolveClosedSerial)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_MonteCarloTableParallel)->Arg(8)->Arg(16);
BENCHMARK(BM_MonteCarloTableSerial)->Arg(8)->Arg(16);
BENCHMARK(BM_SampleParallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_SampleSerial)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
