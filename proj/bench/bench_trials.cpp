// Copyright 2026 The spinsq Authors
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

// Serial reference vs OpenMP kernel for the trial-level Monte Carlo.

#include <benchmark/benchmark.h>

#include "spinsq/experiments.hpp"

namespace {

spinsq::ExperimentConfig bench_config(std::size_t trials) {
    spinsq::ExperimentConfig config;
    config.mc.trials = trials;
    config.mc.seed = 7;
    return config;
}

void BM_SqueezingSerial(benchmark::State &state) {
    const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(spinsq::run_squeezing_sequence(config, spinsq::Execution::serial));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SqueezingParallel(benchmark::State &state) {
    const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(spinsq::run_squeezing_sequence(config, spinsq::Execution::parallel));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RamseySweepSerial(benchmark::State &state) {
    const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            spinsq::run_trap_loss_sweep(config, spinsq::SweepProtocol::ramsey, spinsq::Execution::serial));
    }
}

void BM_RamseySweepParallel(benchmark::State &state) {
    const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            spinsq::run_trap_loss_sweep(config, spinsq::SweepProtocol::ramsey, spinsq::Execution::parallel));
    }
}

}  // namespace

BENCHMARK(BM_SqueezingSerial)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SqueezingParallel)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RamseySweepSerial)->Arg(1 << 10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RamseySweepParallel)->Arg(1 << 10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
