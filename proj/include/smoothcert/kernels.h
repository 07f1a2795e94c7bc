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

// Data-parallel inner loops.
//
// Every kernel exists twice: `serial::` is the plain reference loop kept for
// testing, `parallel::` is the OpenMP version used by the library. Random
// draws come from counter-based streams indexed by draw number, so both
// produce the same values for any thread count. Integer results (vote
// histograms) and elementwise outputs match bit for bit; floating-point
// reductions in `parallel::` use a fixed block decomposition, so they are
// reproducible across thread counts and agree with `serial::` to rounding.

#ifndef SMOOTHCERT_KERNELS_H_
#define SMOOTHCERT_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include "smoothcert/classifiers.h"
#include "smoothcert/distributions.h"
#include "smoothcert/philox.h"

namespace smoothcert::kernels {

enum class Backend { kSerial, kOpenMP };

// Histogram of predicted labels, indexed by class.
using VoteCounts = std::vector<std::uint64_t>;

// Threads OpenMP will use for parallel regions (1 without OpenMP).
int MaxThreads();

// Inputs for the smoothing vote: `count` factors beta_i are drawn from
// `dist` at indices [first_index, first_index + count) of `sampler`, the
// classifier sees x^beta_i entrywise.
struct GammaVoteJob {
  const BaseClassifier* classifier = nullptr;
  std::span<const double> input;
  SmoothingDistribution dist;
  SeededSampler sampler;
  std::uint64_t first_index = 0;
  std::uint64_t count = 0;
};

// Inputs for the Gaussian vote: the classifier sees clamp(x + sigma * eps_i)
// with eps_i standard normal; coordinate j of draw i uses uniform index
// first_index + i * dim + j.
struct NoiseVoteJob {
  const BaseClassifier* classifier = nullptr;
  std::span<const double> input;
  double sigma = 0.0;
  SeededSampler sampler;
  std::uint64_t first_index = 0;
  std::uint64_t count = 0;
};

// Votes on input^factors[i] for precomputed factors, e.g. common random
// numbers reused across many inputs.
struct FactorVoteJob {
  const BaseClassifier* classifier = nullptr;
  std::span<const double> input;
  std::span<const double> factors;
};

namespace serial {

void GammaCorrect(std::span<const double> in, double gamma,
                  std::span<double> out);
void Quantize8(std::span<const double> in, std::span<double> out);
double SquaredDistance(std::span<const double> a, std::span<const double> b);
void Sample(const SmoothingDistribution& dist, const SeededSampler& sampler,
            std::uint64_t first_index, std::span<double> out);
// out[j] = sum_i coeffs[i] * beta_ij^2 with beta_ij ~ Rayleigh(sigma) drawn at
// index j * coeffs.size() + i.
void WeightedSquareSums(std::span<const double> coeffs, double sigma,
                        const SeededSampler& sampler, std::span<double> out);
VoteCounts CountGammaVotes(const GammaVoteJob& job);
VoteCounts CountNoiseVotes(const NoiseVoteJob& job);
VoteCounts CountFactorVotes(const FactorVoteJob& job);

}  // namespace serial

namespace parallel {

void GammaCorrect(std::span<const double> in, double gamma,
                  std::span<double> out);
void Quantize8(std::span<const double> in, std::span<double> out);
double SquaredDistance(std::span<const double> a, std::span<const double> b);
void Sample(const SmoothingDistribution& dist, const SeededSampler& sampler,
            std::uint64_t first_index, std::span<double> out);
void WeightedSquareSums(std::span<const double> coeffs, double sigma,
                        const SeededSampler& sampler, std::span<double> out);
VoteCounts CountGammaVotes(const GammaVoteJob& job);
VoteCounts CountNoiseVotes(const NoiseVoteJob& job);
VoteCounts CountFactorVotes(const FactorVoteJob& job);

}  // namespace parallel

// Backend dispatch for the vote kernels.
VoteCounts CountGammaVotes(const GammaVoteJob& job, Backend backend);
VoteCounts CountNoiseVotes(const NoiseVoteJob& job, Backend backend);
VoteCounts CountFactorVotes(const FactorVoteJob& job, Backend backend);

// Runs body(i) for i in [0, n), in parallel for kOpenMP. The body must only
// write state owned by index i. The first exception thrown by any body is
// rethrown once the loop has finished.
template <typename Body>
void ForEachIndex(std::size_t n, Backend backend, Body&& body) {
  if (backend == Backend::kSerial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(smoothcert_for_each_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// Index of the largest count, ties to the lowest label.
int ArgMax(const VoteCounts& counts);

}  // namespace smoothcert::kernels

#endif  // SMOOTHCERT_KERNELS_H_
