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

// Single-parameter multiplicative robustness certificates.
//
// A classifier smoothed over a multiplicatively composable transform with a
// Rayleigh distributed factor beta keeps its prediction under any attack
// factor gamma in (gamma1, gamma2), where the endpoints solve
//
//   F(F^-1(pb) / gamma1) + F(F^-1(1 - pa) / gamma1) = 1,   gamma1 <= 1,
//   F(F^-1(pa) / gamma2) + F(F^-1(1 - pb) / gamma2) = 1,   gamma2 >= 1,
//
// F being the Rayleigh CDF. The composite F(F^-1(q) / gamma) equals
// 1 - (1 - q)^(1 / gamma^2) for every scale sigma, which is what the solver
// works with (see ReducedCdfMap).

#ifndef SMOOTHCERT_CERT_ENGINE_H_
#define SMOOTHCERT_CERT_ENGINE_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "smoothcert/distributions.h"

namespace smoothcert {

// Lower bound on the top-class probability and upper bound on the runner-up
// probability. `confidence` is 1 - alpha of the estimate (1 for exact values).
struct ProbBounds {
  double pa_lower = 0.0;
  double pb_upper = 0.0;
  double confidence = 1.0;

  // pb_upper = 1 - pa_lower.
  static ProbBounds Trivial(double pa_lower, double confidence = 1.0) {
    return {pa_lower, 1.0 - pa_lower, confidence};
  }
};

enum class CertMethod { kBisection, kClosedForm, kReciprocal, kLogSpace };

std::string_view MethodName(CertMethod method);

// A certified multiplicative interval. The prediction is guaranteed for every
// gamma with gamma1 < gamma < gamma2. gamma2 is +inf when the upper bracket
// exceeded the search cap.
struct Certificate {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  CertMethod method = CertMethod::kBisection;
  SmoothingDistribution distribution;
  double confidence = 1.0;

  bool upper_unbounded() const { return std::isinf(gamma2); }
  bool StrictlyContains(double gamma) const {
    return gamma1 < gamma && gamma < gamma2;
  }
};

struct Abstain {
  std::string reason;
};

using CertOutcome = std::variant<Certificate, Abstain>;

inline bool IsAbstain(const CertOutcome& outcome) {
  return std::holds_alternative<Abstain>(outcome);
}

struct SampleCounts {
  std::uint64_t successes = 0;
  std::uint64_t trials = 1;
};

enum class BoundSide { kLower, kUpper };

// 1 - (1 - q)^(1 / gamma^2) == F(F^-1(q) / gamma) for any Rayleigh scale.
// Throws DomainError unless gamma > 0 and 0 <= q < 1.
double ReducedCdfMap(double gamma, double q);

// Solves the two endpoint equations by bracketed bisection on the reduced
// map. Abstains when pa_lower <= pb_upper. Throws DomainError unless
// 0 < pb_upper and pa_lower < 1.
CertOutcome CertifyRayleigh(const ProbBounds& bounds);

// The same equations written with an explicit Rayleigh CDF and quantile at
// scale `params.sigma`. Kept as an independent route to CertifyRayleigh.
CertOutcome CertifyRayleighExplicit(const ProbBounds& bounds,
                                    const RayleighParams& params);

// Closed form for pb_upper = 1 - pa_lower:
//   gamma1 = sqrt(ln pa / ln 1/2), gamma2 = sqrt(ln(1 - pa) / ln 1/2).
// Abstains for pa_lower <= 1/2; throws DomainError for pa_lower >= 1.
CertOutcome CertifyRayleighClosedForm(double pa_lower, double confidence = 1.0);

// Certificate for smoothing with 1/beta: the reciprocal (1/gamma2, 1/gamma1)
// of the Rayleigh certificate.
CertOutcome CertifyInverseRayleigh(const ProbBounds& bounds);

// P(X >= k) and P(X <= k) for X ~ Binomial(n, p).
double BinomialUpperTail(std::uint64_t n, std::uint64_t k, double p);
double BinomialLowerTail(std::uint64_t n, std::uint64_t k, double p);

// One-sided exact Clopper-Pearson bound at level 1 - alpha, by bisection on
// the binomial tail to 1e-12.
double ClopperPearson(const SampleCounts& counts, double alpha, BoundSide side);

// Turns estimation-phase counts into a certificate for `dist`. With
// `use_trivial_pb` the whole alpha goes to pa_lower and pb_upper = 1 - pa;
// otherwise `runner_up` is required and alpha is split evenly.
CertOutcome CertifyFromCounts(
    const SampleCounts& top_class, double alpha, bool use_trivial_pb,
    const std::optional<SampleCounts>& runner_up = std::nullopt,
    const SmoothingDistribution& dist = SmoothingDistribution::Rayleigh());

// Additive radius R of 1-D smoothing in the exponent:
//   Gaussian  R = scale / 2 * (Phi^-1(pa) - Phi^-1(pb))
//   Laplace   R = -scale * ln(2 (1 - pa))          (runner-up bound unused)
//   Uniform   R = scale * (pa - pb)
// Returns nullopt when the bounds do not certify.
std::optional<double> LogSpaceAdditiveRadius(DistributionKind kind, double scale,
                                             double pa_lower, double pb_upper);

// (base^-R, base^R) for the radius above.
CertOutcome LogSpaceRadius(DistributionKind kind, double scale, double pa_lower,
                           double pb_upper, double log_base = std::numbers::e);

enum class ScaleTarget { kUnitMedian, kUnitMean };

RayleighParams RayleighScaleFor(ScaleTarget target);

}  // namespace smoothcert

#endif  // SMOOTHCERT_CERT_ENGINE_H_
