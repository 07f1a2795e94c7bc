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

// The Monte-Carlo smoothed classifier over gamma correction:
//
//   g(x) = argmax_c P_beta(f(x^beta) = c)
//
// predicted and certified with the usual two-phase protocol. Phase 1 draws
// n0 factors and picks the modal label; phase 2 draws n fresh factors and
// bounds the probability of that label from below with Clopper-Pearson. All
// draws come from counter-based streams of the configured seed, so results do
// not depend on the number of threads.

#ifndef SMOOTHCERT_SMOOTHING_RUNTIME_H_
#define SMOOTHCERT_SMOOTHING_RUNTIME_H_

#include <cstdint>
#include <optional>
#include <string>

#include "smoothcert/cert_engine.h"
#include "smoothcert/classifiers.h"
#include "smoothcert/kernels.h"
#include "smoothcert/tensor.h"

namespace smoothcert {

struct SmoothingConfig {
  std::uint64_t n0 = 100;
  std::uint64_t n = 100000;
  double alpha = 0.001;
  SmoothingDistribution dist = SmoothingDistribution::Rayleigh();
  std::uint64_t seed = 0;
  // Bound the runner-up by 1 - pa_lower. Otherwise alpha is split between a
  // lower bound on the top class and an upper bound on the runner-up.
  bool trivial_pb = true;

  // Throws DomainError unless n0 >= 10, n >= n0 and 0 < alpha < 1.
  void Validate() const;
};

struct PredictionResult {
  // nullopt means the smoothed classifier abstains.
  std::optional<int> label;
  double pa_lower = 0.0;
  // Present iff label is.
  std::optional<Certificate> certificate;
  // Phase-2 hits of the phase-1 modal label.
  SampleCounts counts;
  int selected_label = 0;
  kernels::VoteCounts selection_votes;
  kernels::VoteCounts estimation_votes;
  std::string abstain_reason;

  bool abstained() const { return !label.has_value(); }
};

// Runs both phases on `x` (already attacked, if at all).
PredictionResult SmoothedPredictCertify(
    const BaseClassifier& base, const ImageTensor& x,
    const SmoothingConfig& config,
    kernels::Backend backend = kernels::Backend::kOpenMP);

struct SweepConfig {
  double step = 0.01;
  double gamma_max = 3.0;
  // Votes per gamma.
  std::uint64_t n = 100000;
  SmoothingDistribution dist = SmoothingDistribution::Rayleigh();
  std::uint64_t seed = 0;
  // Skip the downward walk (left stays 1) when only the right end matters.
  bool walk_left = true;

  // Throws DomainError unless step > 0, gamma_max >= 1 and n >= 1.
  void Validate() const;
};

struct SweepResult {
  // The smoothed classifier is already wrong at gamma = 1.
  bool empty = true;
  double left = 1.0;
  double right = 1.0;
};

// Empirical robustness interval of the smoothed classifier around x: the
// prediction at gamma is the majority vote over n draws on x^gamma, without
// abstention. Walks gamma_k = 1 + k * step up to gamma_max (included) and
// gamma_k = 1 - k * step down to step, stopping at the first gamma whose
// prediction differs from `expected_label`; the ends are the last correct
// factors. Every gamma reuses the same draws, so for classifiers monotone in
// the exponent the vote is monotone in gamma.
SweepResult EmpiricalSweep(const BaseClassifier& base, const ImageTensor& x,
                           int expected_label, const SweepConfig& config,
                           kernels::Backend backend = kernels::Backend::kOpenMP);

// The majority label over config.n draws on x^gamma (ties to the lowest
// label), with the sweep's common random numbers.
int SweepPrediction(const BaseClassifier& base, const ImageTensor& x,
                    double gamma, const SweepConfig& config,
                    kernels::Backend backend = kernels::Backend::kOpenMP);

}  // namespace smoothcert

#endif  // SMOOTHCERT_SMOOTHING_RUNTIME_H_
