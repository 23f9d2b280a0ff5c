#include <benchmark/benchmark.h>

#include "thetapm/eisenstein.hpp"

using namespace thetapm;

namespace {

void series_mul_rational(benchmark::State& state) {
  const long n = state.range(0);
  const QSeries f = eisenstein_e(4, n, Ring::rationals());
  const QSeries g = eisenstein_e(6, n, Ring::rationals());
  for (auto _ : state) {
    benchmark::DoNotOptimize(mul(f, g));
  }
  state.SetComplexityN(n);
}
BENCHMARK(series_mul_rational)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void series_mul_mod_prime_power(benchmark::State& state) {
  const long n = state.range(0);
  const Ring ring = Ring::mod(PrimePowerModulus(5, 2));
  const QSeries f = eisenstein_e(4, n, ring);
  const QSeries g = eisenstein_e(6, n, ring);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mul(f, g));
  }
  state.SetComplexityN(n);
}
BENCHMARK(series_mul_mod_prime_power)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void hasse_power_mod_p2(benchmark::State& state) {
  const Ring ring = Ring::mod(PrimePowerModulus(7, 2));
  const QSeries hasse = eisenstein_e(6, 128, ring);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pow(hasse, 98));
  }
}
BENCHMARK(hasse_power_mod_p2);

void eisenstein_series_generation(benchmark::State& state) {
  const long weight = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eisenstein_g(weight, 64, Ring::rationals()));
  }
}
BENCHMARK(eisenstein_series_generation)->Arg(12)->Arg(102)->Arg(150);

}  // namespace
