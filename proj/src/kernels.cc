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

#include "smoothcert/kernels.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "smoothcert/errors.h"
#include "smoothcert/normal.h"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace smoothcert::kernels {
namespace {

// Block size of the reproducible parallel reduction.
constexpr std::size_t kReductionBlock = 2048;

inline double Quantize(double v) { return std::round(255.0 * v) / 255.0; }

// beta^2 for beta ~ Rayleigh(sigma) from uniform u.
inline double RayleighSquare(double sigma, double u) {
  return sigma * sigma * (-2.0 * std::log1p(-u));
}

inline void GammaInto(std::span<const double> in, double gamma,
                      std::span<double> out) {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = std::pow(in[j], gamma);
}

inline void NoiseInto(std::span<const double> in, double sigma,
                      const SeededSampler& sampler, std::uint64_t first,
                      std::span<double> out) {
  for (std::size_t j = 0; j < in.size(); ++j) {
    const double eps = NormalQuantile(sampler.Uniform(first + j));
    out[j] = std::clamp(in[j] + sigma * eps, 0.0, 1.0);
  }
}

void CheckSizes(std::span<const double> in, std::span<const double> out) {
  Require(in.size() == out.size(), "kernel input and output sizes differ");
}

template <typename Job>
int CheckJob(const Job& job) {
  Require(job.classifier != nullptr, "vote job needs a classifier");
  Require(!job.input.empty(), "vote job needs a nonempty input");
  const int k = job.classifier->num_classes();
  Require(k >= 1, "classifier must have at least one class");
  return k;
}

void Tally(VoteCounts& counts, int label, int num_classes) {
  if (label < 0 || label >= num_classes) {
    throw DomainError("classifier returned label " + std::to_string(label) +
                      " outside [0, " + std::to_string(num_classes) + ")");
  }
  ++counts[static_cast<std::size_t>(label)];
}

// Shared body of the two parallel vote kernels: `perturb(i, buffer)` fills
// the classifier input for draw i.
template <typename Perturb>
VoteCounts ParallelVotes(const BaseClassifier& classifier,
                         std::size_t input_size, std::uint64_t count,
                         int num_classes, Perturb perturb) {
  VoteCounts total(static_cast<std::size_t>(num_classes), 0);
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel
  {
    VoteCounts local(static_cast<std::size_t>(num_classes), 0);
    std::vector<double> buffer(input_size);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        perturb(static_cast<std::uint64_t>(i), std::span<double>(buffer));
        Tally(local, classifier.Classify(buffer), num_classes);
      } catch (...) {
#pragma omp critical(smoothcert_vote_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(smoothcert_vote_merge)
    for (std::size_t c = 0; c < total.size(); ++c) total[c] += local[c];
  }
  if (failure) std::rethrow_exception(failure);
  return total;
}

}  // namespace

int MaxThreads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int ArgMax(const VoteCounts& counts) {
  Require(!counts.empty(), "ArgMax of an empty histogram");
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                          counts.begin());
}

namespace serial {

void GammaCorrect(std::span<const double> in, double gamma,
                  std::span<double> out) {
  CheckSizes(in, out);
  GammaInto(in, gamma, out);
}

void Quantize8(std::span<const double> in, std::span<double> out) {
  CheckSizes(in, out);
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = Quantize(in[j]);
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  CheckSizes(a, b);
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sum += d * d;
  }
  return sum;
}

void Sample(const SmoothingDistribution& dist, const SeededSampler& sampler,
            std::uint64_t first_index, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = dist.Quantile(sampler.Uniform(first_index + i));
  }
}

void WeightedSquareSums(std::span<const double> coeffs, double sigma,
                        const SeededSampler& sampler, std::span<double> out) {
  const std::size_t n = coeffs.size();
  for (std::size_t j = 0; j < out.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += coeffs[i] * RayleighSquare(sigma, sampler.Uniform(j * n + i));
    }
    out[j] = sum;
  }
}

VoteCounts CountGammaVotes(const GammaVoteJob& job) {
  const int k = CheckJob(job);
  VoteCounts counts(static_cast<std::size_t>(k), 0);
  std::vector<double> buffer(job.input.size());
  for (std::uint64_t i = 0; i < job.count; ++i) {
    const double beta = job.dist.Quantile(job.sampler.Uniform(job.first_index + i));
    GammaInto(job.input, beta, buffer);
    Tally(counts, job.classifier->Classify(buffer), k);
  }
  return counts;
}

VoteCounts CountNoiseVotes(const NoiseVoteJob& job) {
  const int k = CheckJob(job);
  VoteCounts counts(static_cast<std::size_t>(k), 0);
  const std::uint64_t dim = job.input.size();
  std::vector<double> buffer(job.input.size());
  for (std::uint64_t i = 0; i < job.count; ++i) {
    NoiseInto(job.input, job.sigma, job.sampler, job.first_index + i * dim,
              buffer);
    Tally(counts, job.classifier->Classify(buffer), k);
  }
  return counts;
}

VoteCounts CountFactorVotes(const FactorVoteJob& job) {
  const int k = CheckJob(job);
  VoteCounts counts(static_cast<std::size_t>(k), 0);
  std::vector<double> buffer(job.input.size());
  for (double factor : job.factors) {
    GammaInto(job.input, factor, buffer);
    Tally(counts, job.classifier->Classify(buffer), k);
  }
  return counts;
}

}  // namespace serial

namespace parallel {

void GammaCorrect(std::span<const double> in, double gamma,
                  std::span<double> out) {
  CheckSizes(in, out);
  const auto n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) out[j] = std::pow(in[j], gamma);
}

void Quantize8(std::span<const double> in, std::span<double> out) {
  CheckSizes(in, out);
  const auto n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) out[j] = Quantize(in[j]);
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  CheckSizes(a, b);
  const std::size_t blocks = (a.size() + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < nb; ++blk) {
    const std::size_t begin = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t end = std::min(a.size(), begin + kReductionBlock);
    double sum = 0.0;
    for (std::size_t j = begin; j < end; ++j) {
      const double d = a[j] - b[j];
      sum += d * d;
    }
    partial[static_cast<std::size_t>(blk)] = sum;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void Sample(const SmoothingDistribution& dist, const SeededSampler& sampler,
            std::uint64_t first_index, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = dist.Quantile(
        sampler.Uniform(first_index + static_cast<std::uint64_t>(i)));
  }
}

void WeightedSquareSums(std::span<const double> coeffs, double sigma,
                        const SeededSampler& sampler, std::span<double> out) {
  const std::size_t n = coeffs.size();
  const auto m = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < m; ++j) {
    const auto row = static_cast<std::size_t>(j);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += coeffs[i] * RayleighSquare(sigma, sampler.Uniform(row * n + i));
    }
    out[row] = sum;
  }
}

VoteCounts CountGammaVotes(const GammaVoteJob& job) {
  const int k = CheckJob(job);
  return ParallelVotes(
      *job.classifier, job.input.size(), job.count, k,
      [&job](std::uint64_t i, std::span<double> buffer) {
        const double beta =
            job.dist.Quantile(job.sampler.Uniform(job.first_index + i));
        GammaInto(job.input, beta, buffer);
      });
}

VoteCounts CountNoiseVotes(const NoiseVoteJob& job) {
  const int k = CheckJob(job);
  const std::uint64_t dim = job.input.size();
  return ParallelVotes(*job.classifier, job.input.size(), job.count, k,
                       [&job, dim](std::uint64_t i, std::span<double> buffer) {
                         NoiseInto(job.input, job.sigma, job.sampler,
                                   job.first_index + i * dim, buffer);
                       });
}

VoteCounts CountFactorVotes(const FactorVoteJob& job) {
  const int k = CheckJob(job);
  return ParallelVotes(*job.classifier, job.input.size(), job.factors.size(), k,
                       [&job](std::uint64_t i, std::span<double> buffer) {
                         GammaInto(job.input, job.factors[i], buffer);
                       });
}

}  // namespace parallel

VoteCounts CountGammaVotes(const GammaVoteJob& job, Backend backend) {
  return backend == Backend::kSerial ? serial::CountGammaVotes(job)
                                     : parallel::CountGammaVotes(job);
}

VoteCounts CountNoiseVotes(const NoiseVoteJob& job, Backend backend) {
  return backend == Backend::kSerial ? serial::CountNoiseVotes(job)
                                     : parallel::CountNoiseVotes(job);
}

VoteCounts CountFactorVotes(const FactorVoteJob& job, Backend backend) {
  return backend == Backend::kSerial ? serial::CountFactorVotes(job)
                                     : parallel::CountFactorVotes(job);
}

}  // namespace smoothcert::kernels
