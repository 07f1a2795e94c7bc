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

// Certificates for transformations with n independent multiplicative
// parameters, each smoothed with its own Rayleigh(sigma) factor beta_i.
//
// For an attack gamma = (gamma_1, ..., gamma_n) the prediction is kept when
//
//   P(sum (gamma_i^2 - 1) beta_i^2 <= r) > P(sum (gamma_i^2 - 1) beta_i^2 >= theta)
//
// with r and theta fixed by
//
//   P(sum (1 - gamma_i^-2) beta_i^2 <= r) = pa_lower,
//   P(sum (1 - gamma_i^-2) beta_i^2 >= theta) = pb_upper.
//
// All four probabilities are estimated by Monte-Carlo over common random
// numbers: beta_i^2 is exponential with mean 2 sigma^2 and every estimate for
// a given seed reuses the same draws, so estimated CDFs are monotone in the
// threshold. Membership is only reported when the two 99% confidence
// intervals are disjoint.

#ifndef SMOOTHCERT_MULTI_CERT_H_
#define SMOOTHCERT_MULTI_CERT_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "smoothcert/kernels.h"

namespace smoothcert {

inline constexpr std::uint64_t kMinMonteCarloSamples = 10000;

struct MultiCertProblem {
  int n = 1;
  double sigma = 1.0;
  double pa_lower = 0.0;
  double pb_upper = 0.0;
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 0;

  // Throws DomainError unless n >= 1, sigma > 0,
  // 0 <= pb_upper < pa_lower < 1 and mc_samples >= kMinMonteCarloSamples.
  void Validate() const;
};

// A Monte-Carlo probability with its 99% normal-approximation half-width.
struct ProbabilityEstimate {
  double p = 0.0;
  double half_width = 0.0;

  double lo() const { return p - half_width; }
  double hi() const { return p + half_width; }
};

// 2.5758 * sqrt(p (1 - p) / samples).
ProbabilityEstimate MakeEstimate(std::uint64_t hits, std::uint64_t samples);

// P(sum_i coeffs[i] beta_i^2 <= threshold), beta_i ~ Rayleigh(sigma), from
// `mc_samples` draws of stream `stream` under `seed`. Throws DomainError for
// mc_samples < kMinMonteCarloSamples or sigma <= 0.
ProbabilityEstimate WeightedExpSumCdf(
    std::span<const double> coeffs, double sigma, double threshold,
    std::uint64_t mc_samples, std::uint64_t seed, std::uint64_t stream = 0,
    kernels::Backend backend = kernels::Backend::kOpenMP);

struct RegionThresholds {
  double r = 0.0;
  double theta = 0.0;
  // gamma is the identity; r and theta are meaningless.
  bool identity = false;
};

// Empirical pa_lower-quantile (r) and upper pb_upper-quantile (theta) of
// sum (1 - gamma_i^-2) beta_i^2, rounded so that at most pa_lower * m samples
// lie at or below r and at least pb_upper * m at or above theta. theta is +inf
// only for pb_upper = 0.
// Throws DomainError when gamma has the wrong length or a non-positive entry.
RegionThresholds SolveThresholds(
    const MultiCertProblem& problem, std::span<const double> gamma,
    kernels::Backend backend = kernels::Backend::kOpenMP);

enum class Membership { kInside, kOutside, kIndeterminate };

std::string_view MembershipName(Membership membership);

struct RegionQuery {
  std::vector<double> gamma;
  RegionThresholds thresholds;
  // P(sum (gamma_i^2 - 1) beta_i^2 <= r) and P(... >= theta).
  ProbabilityEstimate accept;
  ProbabilityEstimate reject;
  Membership membership = Membership::kIndeterminate;

  bool in_region() const { return membership == Membership::kInside; }
};

// Evaluates the region inequality at `gamma`. Entries are sorted before
// sampling, so the answer does not depend on their order; the identity point
// is always inside.
RegionQuery InRobustRegion(const MultiCertProblem& problem,
                           std::span<const double> gamma,
                           kernels::Backend backend = kernels::Backend::kOpenMP);

// InRobustRegion at every point, points evaluated concurrently for kOpenMP.
// Each entry equals the corresponding single query.
std::vector<RegionQuery> ScanRegion(
    const MultiCertProblem& problem,
    const std::vector<std::vector<double>>& points,
    kernels::Backend backend = kernels::Backend::kOpenMP);

}  // namespace smoothcert

#endif  // SMOOTHCERT_MULTI_CERT_H_
