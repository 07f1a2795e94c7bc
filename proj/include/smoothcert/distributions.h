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

// Positive-support smoothing laws for multiplicative parameters: Rayleigh,
// inverse Rayleigh (1/Rayleigh), and exp-transformed symmetric laws
// (log-Gaussian, log-Laplace, log-uniform) used as comparison baselines.

#ifndef SMOOTHCERT_DISTRIBUTIONS_H_
#define SMOOTHCERT_DISTRIBUTIONS_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothcert/philox.h"

namespace smoothcert {

// Rayleigh scale placing the median at 1: sigma * sqrt(2 ln 2) = 1.
inline constexpr double kUnitMedianSigma = 0.8493218002880191;
// Rayleigh scale placing the mean at 1: sigma * sqrt(pi / 2) = 1.
inline constexpr double kUnitMeanSigma = 0.7978845608028654;

struct RayleighParams {
  double sigma = kUnitMedianSigma;

  static RayleighParams UnitMedian() { return {kUnitMedianSigma}; }
  static RayleighParams UnitMean() { return {kUnitMeanSigma}; }
  // Throws DomainError unless sigma > 0 and finite.
  static RayleighParams WithSigma(double sigma);
};

// 1 - exp(-z^2 / (2 sigma^2)). Throws DomainError for z < 0.
double RayleighCdf(const RayleighParams& params, double z);

// sigma * sqrt(-2 ln(1 - p)). Throws DomainError unless 0 <= p < 1.
double RayleighQuantile(const RayleighParams& params, double p);

double RayleighPdf(const RayleighParams& params, double z);

// P(1/beta <= z) = exp(-1 / (2 sigma^2 z^2)) for beta ~ Rayleigh(sigma).
// Throws DomainError for z <= 0. Returns 1 for z = +inf.
double InverseRayleighCdf(const RayleighParams& params, double z);

enum class DistributionKind {
  kRayleigh,
  kInverseRayleigh,
  kLogGaussian,
  kLogLaplace,
  kLogUniform,
};

std::string_view KindName(DistributionKind kind);
// Accepts the CLI spellings: rayleigh, inv-rayleigh, log-gaussian,
// log-laplace, log-uniform. Throws DomainError otherwise.
DistributionKind ParseKind(std::string_view name);

bool IsLogSpace(DistributionKind kind);

// A one-parameter law on (0, inf). For the Rayleigh kinds `scale` is sigma;
// for the log-space kinds it is the standard deviation (Gaussian), the scale b
// (Laplace) or the half-width lambda (uniform on [-lambda, lambda]) of the
// exponent, taken in base `log_base`.
class SmoothingDistribution {
 public:
  SmoothingDistribution() = default;
  // Throws DomainError for a non-positive scale or an invalid base.
  SmoothingDistribution(DistributionKind kind, double scale,
                        double log_base = std::numbers::e);

  static SmoothingDistribution Rayleigh(double sigma = kUnitMedianSigma) {
    return {DistributionKind::kRayleigh, sigma};
  }
  static SmoothingDistribution InverseRayleigh(double sigma = kUnitMedianSigma) {
    return {DistributionKind::kInverseRayleigh, sigma};
  }

  DistributionKind kind() const { return kind_; }
  double scale() const { return scale_; }
  double log_base() const { return log_base_; }

  double Cdf(double z) const;
  // Inverse of Cdf. Domain is [0, 1) for the Rayleigh kinds and (0, 1) for
  // the log-space kinds (log-uniform also accepts the closed interval).
  double Quantile(double p) const;
  double Pdf(double z) const;

  // e.g. "rayleigh(scale=0.849322)" or "log-gaussian(scale=1,base=e)".
  std::string Describe() const;

  friend bool operator==(const SmoothingDistribution&,
                         const SmoothingDistribution&) = default;

 private:
  // Exponent CDF / quantile / density of the symmetric law behind the
  // log-space kinds.
  double ExponentCdf(double a) const;
  double ExponentQuantile(double p) const;
  double ExponentPdf(double a) const;

  DistributionKind kind_ = DistributionKind::kRayleigh;
  double scale_ = kUnitMedianSigma;
  double log_base_ = std::numbers::e;
};

// Draws `out.size()` i.i.d. samples by inverse-CDF transform of the sampler's
// uniforms at indices first_index, first_index + 1, ...
void SampleInto(const SmoothingDistribution& dist, const SeededSampler& sampler,
                std::uint64_t first_index, std::span<double> out);

// Throws DomainError for count == 0.
std::vector<double> Sample(const SmoothingDistribution& dist,
                           const SeededSampler& sampler, std::size_t count);

}  // namespace smoothcert

#endif  // SMOOTHCERT_DISTRIBUTIONS_H_
