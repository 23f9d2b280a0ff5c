#include <benchmark/benchmark.h>

#include "thetapm/registry.hpp"
#include "thetapm/thetapm.hpp"

using namespace thetapm;

namespace {

void theta_operator_end_to_end(benchmark::State& state) {
  const long p = state.range(0);
  const int m = static_cast<int>(state.range(1));
  const Form delta = resolve_form("delta");
  build_g2_decomposition(p, m, 20);  // cache warm-up, matches library usage
  for (auto _ : state) {
    benchmark::DoNotOptimize(theta_pm(delta, p, m, 20));
  }
}
BENCHMARK(theta_operator_end_to_end)->Args({5, 1})->Args({5, 2})->Args({7, 2});

void hecke_commutation_check(benchmark::State& state) {
  const Form delta = resolve_form("delta");
  build_g2_decomposition(5, 2, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_commutation(delta, 2, 5, 2, 12));
  }
}
BENCHMARK(hecke_commutation_check);

void optimal_weight_check(benchmark::State& state) {
  const Form delta = resolve_form("delta");
  build_g2_decomposition(5, 2, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_optimal_weight(delta, 5, 2));
  }
}
BENCHMARK(optimal_weight_check);

}  // namespace
