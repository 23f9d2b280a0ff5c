#include <benchmark/benchmark.h>

#include "thetapm/forms.hpp"

using namespace thetapm;

namespace {

void miller_basis_construction(benchmark::State& state) {
  const long weight = state.range(0);
  const long precision = 2 * default_precision(weight);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MillerBasis(weight, precision));
  }
}
BENCHMARK(miller_basis_construction)->Arg(54)->Arg(102)->Arg(150);

void congruence_solver(benchmark::State& state) {
  const long weight = state.range(0);
  const PrimePowerModulus mod(5, 2);
  const long n = 2 * default_precision(weight);
  std::vector<Rational> coords;
  for (long j = 0; j < dim_modular_forms(weight); ++j) coords.emplace_back(7 * j + 3);
  const QSeries target = Form(weight, Ring::mod(mod), coords).q_expansion(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_congruent_to_weight(target, weight, mod));
  }
}
BENCHMARK(congruence_solver)->Arg(54)->Arg(122);

void filtration_scan(benchmark::State& state) {
  const PrimePowerModulus mod(5, 1);
  const long n = 2 * default_precision(60);
  std::vector<Rational> coords(static_cast<size_t>(dim_modular_forms(60)), Rational(1));
  const QSeries target = Form(60, Ring::mod(mod), coords).q_expansion(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weight_filtration(target, 60, mod));
  }
}
BENCHMARK(filtration_scan);

}  // namespace
