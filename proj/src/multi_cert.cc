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

#include "smoothcert/multi_cert.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smoothcert/errors.h"
#include "smoothcert/philox.h"

namespace smoothcert {
namespace {

// Two-sided 99% standard normal quantile.
constexpr double kZ99 = 2.5758293035489004;

// Thresholds and membership use disjoint streams of the problem seed.
constexpr std::uint64_t kThresholdStream = 0;
constexpr std::uint64_t kMembershipStream = 1;

std::vector<double> SortedGamma(std::span<const double> gamma, int n) {
  Require(gamma.size() == static_cast<std::size_t>(n),
          "gamma has " + std::to_string(gamma.size()) + " entries, expected " +
              std::to_string(n));
  std::vector<double> sorted(gamma.begin(), gamma.end());
  for (double g : sorted) {
    Require(std::isfinite(g) && g > 0.0, "gamma entries must be positive");
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

bool IsIdentity(std::span<const double> gamma) {
  return std::all_of(gamma.begin(), gamma.end(),
                     [](double g) { return g == 1.0; });
}

std::vector<double> DrawSums(std::span<const double> coeffs, double sigma,
                             std::uint64_t samples, std::uint64_t seed,
                             std::uint64_t stream, kernels::Backend backend) {
  std::vector<double> sums(samples);
  const SeededSampler sampler{seed, stream};
  if (backend == kernels::Backend::kSerial) {
    kernels::serial::WeightedSquareSums(coeffs, sigma, sampler, sums);
  } else {
    kernels::parallel::WeightedSquareSums(coeffs, sigma, sampler, sums);
  }
  return sums;
}

RegionThresholds ThresholdsForSorted(const MultiCertProblem& problem,
                                     std::span<const double> sorted,
                                     kernels::Backend backend) {
  if (IsIdentity(sorted)) return {0.0, 0.0, true};
  std::vector<double> coeffs(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    coeffs[i] = 1.0 - 1.0 / (sorted[i] * sorted[i]);
  }
  std::vector<double> sums =
      DrawSums(coeffs, problem.sigma, problem.mc_samples, problem.seed,
               kThresholdStream, backend);
  std::sort(sums.begin(), sums.end());
  const double m = static_cast<double>(problem.mc_samples);
  // Rounded so that the empirical mass of {S <= r} stays <= pa_lower and the
  // mass of {S >= theta} stays >= pb_upper.
  const auto below = static_cast<std::size_t>(std::floor(problem.pa_lower * m));
  const auto above = static_cast<std::size_t>(std::ceil(problem.pb_upper * m));
  RegionThresholds out;
  out.r = below == 0 ? -std::numeric_limits<double>::infinity()
                     : sums[below - 1];
  out.theta = above == 0 ? std::numeric_limits<double>::infinity()
                         : sums[sums.size() - above];
  return out;
}

}  // namespace

void MultiCertProblem::Validate() const {
  Require(n >= 1, "parameter count must be at least 1");
  Require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  Require(pb_upper >= 0.0 && pa_lower < 1.0,
          "probability bounds must satisfy 0 <= pb_upper and pa_lower < 1");
  Require(pa_lower > pb_upper, "pa_lower must exceed pb_upper");
  Require(mc_samples >= kMinMonteCarloSamples,
          "at least " + std::to_string(kMinMonteCarloSamples) +
              " Monte-Carlo samples are required");
}

ProbabilityEstimate MakeEstimate(std::uint64_t hits, std::uint64_t samples) {
  Require(samples > 0 && hits <= samples, "invalid Monte-Carlo counts");
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

ProbabilityEstimate WeightedExpSumCdf(std::span<const double> coeffs,
                                      double sigma, double threshold,
                                      std::uint64_t mc_samples,
                                      std::uint64_t seed, std::uint64_t stream,
                                      kernels::Backend backend) {
  Require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  Require(mc_samples >= kMinMonteCarloSamples,
          "at least " + std::to_string(kMinMonteCarloSamples) +
              " Monte-Carlo samples are required");
  const std::vector<double> sums =
      DrawSums(coeffs, sigma, mc_samples, seed, stream, backend);
  const auto hits = static_cast<std::uint64_t>(
      std::count_if(sums.begin(), sums.end(),
                    [threshold](double s) { return s <= threshold; }));
  return MakeEstimate(hits, mc_samples);
}

RegionThresholds SolveThresholds(const MultiCertProblem& problem,
                                 std::span<const double> gamma,
                                 kernels::Backend backend) {
  problem.Validate();
  const std::vector<double> sorted = SortedGamma(gamma, problem.n);
  return ThresholdsForSorted(problem, sorted, backend);
}

std::string_view MembershipName(Membership membership) {
  switch (membership) {
    case Membership::kInside:
      return "inside";
    case Membership::kOutside:
      return "outside";
    case Membership::kIndeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

RegionQuery InRobustRegion(const MultiCertProblem& problem,
                           std::span<const double> gamma,
                           kernels::Backend backend) {
  problem.Validate();
  const std::vector<double> sorted = SortedGamma(gamma, problem.n);
  RegionQuery query;
  query.gamma.assign(gamma.begin(), gamma.end());
  query.thresholds = ThresholdsForSorted(problem, sorted, backend);
  if (query.thresholds.identity) {
    query.accept = {1.0, 0.0};
    query.reject = {0.0, 0.0};
    query.membership = Membership::kInside;
    return query;
  }
  std::vector<double> coeffs(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    coeffs[i] = sorted[i] * sorted[i] - 1.0;
  }
  const std::vector<double> sums =
      DrawSums(coeffs, problem.sigma, problem.mc_samples, problem.seed,
               kMembershipStream, backend);
  std::uint64_t accept = 0;
  std::uint64_t reject = 0;
  for (double s : sums) {
    accept += s <= query.thresholds.r ? 1 : 0;
    reject += s >= query.thresholds.theta ? 1 : 0;
  }
  query.accept = MakeEstimate(accept, problem.mc_samples);
  query.reject = MakeEstimate(reject, problem.mc_samples);
  if (query.accept.lo() > query.reject.hi()) {
    query.membership = Membership::kInside;
  } else if (query.accept.hi() < query.reject.lo()) {
    query.membership = Membership::kOutside;
  } else {
    query.membership = Membership::kIndeterminate;
  }
  return query;
}

std::vector<RegionQuery> ScanRegion(
    const MultiCertProblem& problem,
    const std::vector<std::vector<double>>& points, kernels::Backend backend) {
  problem.Validate();
  std::vector<RegionQuery> results(points.size());
  // Points are the unit of parallelism; each query runs the serial kernels.
  kernels::ForEachIndex(points.size(), backend, [&](std::size_t i) {
    results[i] = InRobustRegion(problem, points[i], kernels::Backend::kSerial);
  });
  return results;
}

}  // namespace smoothcert
