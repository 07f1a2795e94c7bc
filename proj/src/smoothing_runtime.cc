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

#include "smoothcert/smoothing_runtime.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "smoothcert/errors.h"
#include "smoothcert/transforms.h"

namespace smoothcert {
namespace {

constexpr std::uint64_t kSelectionStream = 0;
constexpr std::uint64_t kEstimationStream = 1;
constexpr std::uint64_t kSweepStream = 2;

kernels::VoteCounts Votes(const BaseClassifier& base,
                          std::span<const double> input,
                          const SmoothingDistribution& dist, std::uint64_t seed,
                          std::uint64_t stream, std::uint64_t count,
                          kernels::Backend backend) {
  kernels::GammaVoteJob job;
  job.classifier = &base;
  job.input = input;
  job.dist = dist;
  job.sampler = SeededSampler{seed, stream};
  job.first_index = 0;
  job.count = count;
  return kernels::CountGammaVotes(job, backend);
}

// Largest count among labels other than `top`.
std::uint64_t RunnerUp(const kernels::VoteCounts& votes, int top) {
  std::uint64_t best = 0;
  for (std::size_t c = 0; c < votes.size(); ++c) {
    if (static_cast<int>(c) != top) best = std::max(best, votes[c]);
  }
  return best;
}

}  // namespace

void SmoothingConfig::Validate() const {
  Require(n0 >= 10, "n0 must be at least 10");
  Require(n >= n0, "n must be at least n0");
  Require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
}

PredictionResult SmoothedPredictCertify(const BaseClassifier& base,
                                        const ImageTensor& x,
                                        const SmoothingConfig& config,
                                        kernels::Backend backend) {
  config.Validate();
  PredictionResult result;
  result.selection_votes = Votes(base, x.data(), config.dist, config.seed,
                                 kSelectionStream, config.n0, backend);
  result.selected_label = kernels::ArgMax(result.selection_votes);
  result.estimation_votes = Votes(base, x.data(), config.dist, config.seed,
                                  kEstimationStream, config.n, backend);
  const auto top = static_cast<std::size_t>(result.selected_label);
  result.counts = {result.estimation_votes[top], config.n};

  std::optional<SampleCounts> runner_up;
  double pa_alpha = config.alpha;
  if (!config.trivial_pb) {
    runner_up = SampleCounts{RunnerUp(result.estimation_votes, result.selected_label),
                             config.n};
    pa_alpha = config.alpha / 2.0;
  }
  result.pa_lower = ClopperPearson(result.counts, pa_alpha, BoundSide::kLower);

  const CertOutcome outcome = CertifyFromCounts(
      result.counts, config.alpha, config.trivial_pb, runner_up, config.dist);
  if (const auto* abstain = std::get_if<Abstain>(&outcome)) {
    result.abstain_reason = abstain->reason;
    return result;
  }
  result.label = result.selected_label;
  result.certificate = std::get<Certificate>(outcome);
  return result;
}

void SweepConfig::Validate() const {
  Require(std::isfinite(step) && step > 0.0, "sweep step must be positive");
  Require(std::isfinite(gamma_max) && gamma_max >= 1.0,
          "gamma_max must be at least 1");
  Require(n >= 1, "sweep needs at least one vote per gamma");
}

namespace {

std::vector<double> SweepFactors(const SweepConfig& config) {
  std::vector<double> factors(config.n);
  kernels::parallel::Sample(config.dist, SeededSampler{config.seed, kSweepStream},
                            0, factors);
  return factors;
}

int PredictWithFactors(const BaseClassifier& base, const ImageTensor& x,
                       double gamma, std::span<const double> factors,
                       kernels::Backend backend) {
  const ImageTensor attacked = GammaCorrect(x, GammaFactor(gamma));
  kernels::FactorVoteJob job;
  job.classifier = &base;
  job.input = attacked.data();
  job.factors = factors;
  return kernels::ArgMax(kernels::CountFactorVotes(job, backend));
}

}  // namespace

int SweepPrediction(const BaseClassifier& base, const ImageTensor& x,
                    double gamma, const SweepConfig& config,
                    kernels::Backend backend) {
  config.Validate();
  return PredictWithFactors(base, x, gamma, SweepFactors(config), backend);
}

SweepResult EmpiricalSweep(const BaseClassifier& base, const ImageTensor& x,
                           int expected_label, const SweepConfig& config,
                           kernels::Backend backend) {
  config.Validate();
  SweepResult result;
  // The same factors serve every gamma (common random numbers).
  const std::vector<double> factors = SweepFactors(config);
  const auto correct = [&](double gamma) {
    return PredictWithFactors(base, x, gamma, factors, backend) ==
           expected_label;
  };
  if (!correct(1.0)) return result;
  result.empty = false;

  // Factors are computed as 1 +- k * step rather than accumulated, so long
  // walks do not drift. A relative slack keeps the grid point at gamma_max
  // (or at step) when rounding lands just past it.
  const double slack = 1e-9 * config.step;
  for (std::uint64_t k = 1;; ++k) {
    const double gamma = 1.0 + static_cast<double>(k) * config.step;
    if (gamma > config.gamma_max + slack) {
      if (result.right < config.gamma_max && correct(config.gamma_max)) {
        result.right = config.gamma_max;
      }
      break;
    }
    if (!correct(gamma)) break;
    result.right = std::min(gamma, config.gamma_max);
  }
  if (config.walk_left) {
    for (std::uint64_t k = 1;; ++k) {
      const double gamma = 1.0 - static_cast<double>(k) * config.step;
      if (gamma < config.step - slack || !correct(gamma)) break;
      result.left = gamma;
    }
  }
  return result;
}

}  // namespace smoothcert
