//
// Copyright 2026 The lcgd Authors
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
//
// Microbenchmarks for the noise path: raw block generation, streaming
// correlated noise at several bandwidths, and the buffered comparator.
// The interesting ratio is (regenerating) streaming vs independent: the
// per-step overhead of bandwidth p is (p-1) extra block generations.

#include <benchmark/benchmark.h>

#include <vector>

#include "lcgd/metrics.hpp"
#include "lcgd/noise.hpp"
#include "lcgd/philox.hpp"
#include "lcgd/sensitivity.hpp"

namespace {

void BM_GaussianBlock(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  lcgd::PrngState gen{42, {0, 0}};
  std::vector<double> block(static_cast<std::size_t>(d));
  for (auto _ : state) {
    lcgd::gaussian_block_fill(gen, block);
    benchmark::DoNotOptimize(block.data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_GaussianBlock)->Arg(1024)->Arg(65536);

void BM_StreamIndependent(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  lcgd::NoiseStream stream(lcgd::NoiseStreamConfig::independent(d, 1.0, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stream.next_noise().data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_StreamIndependent)->Arg(1024)->Arg(65536);

void BM_StreamLambdaCancel(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  lcgd::NoiseStream stream(
      lcgd::NoiseStreamConfig::lambda_cancel(0.9, d, 1.0, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stream.next_noise().data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_StreamLambdaCancel)->Arg(1024)->Arg(65536);

void BM_StreamBanded(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  std::vector<double> coeffs(static_cast<std::size_t>(p), -0.1);
  coeffs[0] = 1.0;
  lcgd::NoiseStream stream(
      lcgd::NoiseStreamConfig::banded_inverse(coeffs, d, 1.0, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stream.next_noise().data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_StreamBanded)->Args({1024, 4})->Args({1024, 16})->Args({65536, 4});

void BM_BufferedReference(benchmark::State& state) {
  const auto config = lcgd::NoiseStreamConfig::lambda_cancel(0.9, 4096, 1.0, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lcgd::buffered_reference(config, 64));
  }
}
BENCHMARK(BM_BufferedReference);

void BM_SensClosedForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lcgd::sens_c_lambda(n, k, n / k, 0.95));
  }
}
BENCHMARK(BM_SensClosedForm)->Args({4096, 1})->Args({4096, 128});

void BM_OptimizeLambda(benchmark::State& state) {
  const lcgd::ParticipationSchema schema(1024, 8, 128);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lcgd::optimize_lambda(lcgd::Metric::kRmse, schema));
  }
}
BENCHMARK(BM_OptimizeLambda);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
