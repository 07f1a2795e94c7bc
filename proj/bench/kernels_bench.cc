//
// Copyright 2026 The SmoothCert Authors
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

// Serial vs OpenMP timings of the hot kernels. Each benchmark takes the
// backend as its first argument (0 = serial, 1 = OpenMP); both backends
// produce identical results, so only the time differs.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "smoothcert/classifiers.h"
#include "smoothcert/distributions.h"
#include "smoothcert/kernels.h"
#include "smoothcert/multi_cert.h"
#include "smoothcert/philox.h"

namespace smoothcert {
namespace {

using kernels::Backend;

Backend BackendOf(const benchmark::State& state) {
  return state.range(0) == 0 ? Backend::kSerial : Backend::kOpenMP;
}

std::vector<double> Image(std::size_t size) {
  const SeededSampler sampler(11, 0);
  std::vector<double> x(size);
  for (std::size_t i = 0; i < size; ++i) x[i] = sampler.Uniform(i);
  return x;
}

void BM_GammaCorrect(benchmark::State& state) {
  const auto x = Image(static_cast<std::size_t>(state.range(1)));
  std::vector<double> out(x.size());
  const bool serial = BackendOf(state) == Backend::kSerial;
  for (auto _ : state) {
    if (serial) {
      kernels::serial::GammaCorrect(x, 1.3, out);
    } else {
      kernels::parallel::GammaCorrect(x, 1.3, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_GammaCorrect)->ArgsProduct({{0, 1}, {3 * 32 * 32, 3 * 224 * 224}});

void BM_SampleRayleigh(benchmark::State& state) {
  const auto dist = SmoothingDistribution::Rayleigh();
  const SeededSampler sampler(3, 0);
  std::vector<double> out(static_cast<std::size_t>(state.range(1)));
  const bool serial = BackendOf(state) == Backend::kSerial;
  for (auto _ : state) {
    if (serial) {
      kernels::serial::Sample(dist, sampler, 0, out);
    } else {
      kernels::parallel::Sample(dist, sampler, 0, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_SampleRayleigh)->ArgsProduct({{0, 1}, {100000}});

void BM_GammaVotes(benchmark::State& state) {
  const auto x = Image(static_cast<std::size_t>(state.range(1)));
  const HashClassifier classifier(10);
  kernels::GammaVoteJob job;
  job.classifier = &classifier;
  job.input = x;
  job.sampler = SeededSampler(5, 0);
  job.count = 1000;
  const Backend backend = BackendOf(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::CountGammaVotes(job, backend));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(job.count));
}
BENCHMARK(BM_GammaVotes)->ArgsProduct({{0, 1}, {3 * 32 * 32}});

void BM_NoiseVotes(benchmark::State& state) {
  const auto x = Image(static_cast<std::size_t>(state.range(1)));
  const HashClassifier classifier(10);
  kernels::NoiseVoteJob job;
  job.classifier = &classifier;
  job.input = x;
  job.sigma = 0.25;
  job.sampler = SeededSampler(6, 0);
  job.count = 200;
  const Backend backend = BackendOf(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::CountNoiseVotes(job, backend));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(job.count));
}
BENCHMARK(BM_NoiseVotes)->ArgsProduct({{0, 1}, {3 * 32 * 32}});

void BM_WeightedExpSumCdf(benchmark::State& state) {
  const std::vector<double> coeffs = {0.2, 0.5, -0.3, 0.8};
  const Backend backend = BackendOf(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        WeightedExpSumCdf(coeffs, 1.0, 1.5, 100000, 9, 0, backend));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_WeightedExpSumCdf)->Arg(0)->Arg(1);

}  // namespace
}  // namespace smoothcert

BENCHMARK_MAIN();
