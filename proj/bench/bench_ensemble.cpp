/*
 * Copyright 2026 The rotor-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// Ensemble throughput, serial loop against the OpenMP runner. Both use the
// same per-trajectory streams, so the work is identical.

#include <benchmark/benchmark.h>

#include "rotor_lab/langevin.hpp"

using namespace rotor_lab;

namespace {

void run(benchmark::State& state, Execution execution, NoiseModel model) {
  RotorParams p;
  const BathPair baths{2.0, 5.0, model};
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.n_steps = static_cast<std::uint64_t>(state.range(1));
  cfg.n_traj = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto result = run_ensemble(p, baths, DriveSpec{}, cfg, execution);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

void BM_Serial_Classical(benchmark::State& s) { run(s, Execution::Serial, NoiseModel::ClassicalWhite); }
void BM_OpenMP_Classical(benchmark::State& s) { run(s, Execution::OpenMP, NoiseModel::ClassicalWhite); }
void BM_Serial_Quantum(benchmark::State& s) { run(s, Execution::Serial, NoiseModel::QuantumColored); }
void BM_OpenMP_Quantum(benchmark::State& s) { run(s, Execution::OpenMP, NoiseModel::QuantumColored); }

#define ENSEMBLE_ARGS ->Args({8, 1 << 14})->Args({32, 1 << 14})->Unit(benchmark::kMillisecond)

BENCHMARK(BM_Serial_Classical) ENSEMBLE_ARGS;
BENCHMARK(BM_OpenMP_Classical) ENSEMBLE_ARGS;
BENCHMARK(BM_Serial_Quantum) ENSEMBLE_ARGS;
BENCHMARK(BM_OpenMP_Quantum) ENSEMBLE_ARGS;

}  // namespace

BENCHMARK_MAIN();
