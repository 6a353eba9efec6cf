// Copyright 2026 The Envar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference versus OpenMP kernels. Both variants produce identical
// numbers (checked in the unit tests); only wall time differs.

#include <benchmark/benchmark.h>

#include "envar/correlations.hpp"
#include "envar/nogo.hpp"
#include "envar/random.hpp"

namespace {

using namespace envar;

PureState bench_state() {
  Rng rng(42);
  return PureState({4, 4}, random_unit_vector(16, rng));
}

void BM_Nogo(benchmark::State &state, Execution exec) {
  const PureState psi = bench_state();
  NogoOptions opt;
  opt.execution = exec;
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nogo_experiment(psi, trials, 7, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Discord(benchmark::State &state, Execution exec) {
  const DensityMatrix rho = density(bench_state());
  DiscordConfig cfg;
  cfg.execution = exec;
  cfg.restarts = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discord(rho, Direction::SToE, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(BM_Nogo, serial, Execution::Serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Nogo, parallel, Execution::Parallel)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Discord, serial, Execution::Serial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Discord, parallel, Execution::Parallel)
    ->Arg(16)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
