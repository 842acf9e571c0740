// Copyright 2026 The qconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "qconv/bounds.hpp"
#include "qconv/random.hpp"

namespace qconv {
namespace {

void BM_Eigh(benchmark::State& state) {
  Rng rng(1);
  const auto x = random_hermitian(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eigh(x));
}
BENCHMARK(BM_Eigh)->RangeMultiplier(2)->Range(4, 64);

void BM_MutualInformation(benchmark::State& state) {
  const auto dep = depolarising_channel(2, 0.15);
  const auto mu = DensityMatrix::maximally_mixed(2);
  for (auto _ : state) benchmark::DoNotOptimize(mutual_information(dep, mu));
}
BENCHMARK(BM_MutualInformation);

void BM_BinomialBeta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(binomial_beta(0.8875, 0.25, n, 0.01));
  state.SetComplexityN(n);
}
BENCHMARK(BM_BinomialBeta)->RangeMultiplier(4)->Range(16, 16384)->Complexity(benchmark::oN);

void BM_QuantumNp(benchmark::State& state) {
  Rng rng(2);
  const int d = static_cast<int>(state.range(0));
  const auto a = random_density_matrix(d, rng), b = random_density_matrix(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(quantum_np_beta(a, b, 0.05));
}
BENCHMARK(BM_QuantumNp)->Arg(4)->Arg(16);

void BM_ClassicalConverse(benchmark::State& state) {
  Rng rng(3);
  const int k = static_cast<int>(state.range(0));
  const auto w = random_stochastic_matrix(k, k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(classical_converse(w, 0.1));
}
BENCHMARK(BM_ClassicalConverse)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EaBoundDepolarising(benchmark::State& state) {
  const auto power = tensor_power(depolarising_channel(2, 0.15), static_cast<int>(state.range(0)));
  const auto mu = DensityMatrix::maximally_mixed(power.dim_in());
  for (auto _ : state) benchmark::DoNotOptimize(ea_bound(power, mu, 0.05, TestClass::All));
}
BENCHMARK(BM_EaBoundDepolarising)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_EaBoundPpt(benchmark::State& state) {
  const auto power = tensor_power(depolarising_channel(2, 0.15), static_cast<int>(state.range(0)));
  const auto mu = DensityMatrix::maximally_mixed(power.dim_in());
  for (auto _ : state) benchmark::DoNotOptimize(ea_bound(power, mu, 0.05, TestClass::Ppt));
}
BENCHMARK(BM_EaBoundPpt)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_EaBoundOptRho(benchmark::State& state) {
  const auto power = tensor_power(depolarising_channel(2, 0.15), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ea_bound_opt_rho(power, 0.05, TestClass::All));
}
BENCHMARK(BM_EaBoundOptRho)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_EaBoundRandomQutrit(benchmark::State& state) {
  Rng rng(4);
  const auto ch = random_channel(3, 3, 3, rng);
  const auto rho = random_density_matrix(3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ea_bound_dual(ch, rho, 0.1));
}
BENCHMARK(BM_EaBoundRandomQutrit)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qconv

BENCHMARK_MAIN();
