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

#include "smoothcert/distributions.h"

#include <cmath>
#include <cstdio>
#include <limits>

#include "smoothcert/errors.h"
#include "smoothcert/normal.h"

namespace smoothcert {

RayleighParams RayleighParams::WithSigma(double sigma) {
  Require(std::isfinite(sigma) && sigma > 0.0,
          "Rayleigh scale sigma must be positive");
  return {sigma};
}

double RayleighCdf(const RayleighParams& params, double z) {
  Require(z >= 0.0, "RayleighCdf: z must be nonnegative");
  const double s = params.sigma;
  return -std::expm1(-(z * z) / (2.0 * s * s));
}

double RayleighQuantile(const RayleighParams& params, double p) {
  Require(p >= 0.0 && p < 1.0, "RayleighQuantile: p must lie in [0, 1)");
  return params.sigma * std::sqrt(-2.0 * std::log1p(-p));
}

double RayleighPdf(const RayleighParams& params, double z) {
  if (z < 0.0) return 0.0;
  const double s2 = params.sigma * params.sigma;
  return z / s2 * std::exp(-(z * z) / (2.0 * s2));
}

double InverseRayleighCdf(const RayleighParams& params, double z) {
  Require(z > 0.0, "InverseRayleighCdf: z must be positive");
  if (std::isinf(z)) return 1.0;
  const double s = params.sigma;
  return std::exp(-1.0 / (2.0 * s * s * z * z));
}

std::string_view KindName(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kRayleigh:
      return "rayleigh";
    case DistributionKind::kInverseRayleigh:
      return "inv-rayleigh";
    case DistributionKind::kLogGaussian:
      return "log-gaussian";
    case DistributionKind::kLogLaplace:
      return "log-laplace";
    case DistributionKind::kLogUniform:
      return "log-uniform";
  }
  return "unknown";
}

DistributionKind ParseKind(std::string_view name) {
  for (auto kind :
       {DistributionKind::kRayleigh, DistributionKind::kInverseRayleigh,
        DistributionKind::kLogGaussian, DistributionKind::kLogLaplace,
        DistributionKind::kLogUniform}) {
    if (KindName(kind) == name) return kind;
  }
  throw DomainError("unknown distribution '" + std::string(name) + "'");
}

bool IsLogSpace(DistributionKind kind) {
  return kind == DistributionKind::kLogGaussian ||
         kind == DistributionKind::kLogLaplace ||
         kind == DistributionKind::kLogUniform;
}

SmoothingDistribution::SmoothingDistribution(DistributionKind kind,
                                             double scale, double log_base)
    : kind_(kind), scale_(scale), log_base_(log_base) {
  Require(std::isfinite(scale) && scale > 0.0,
          "distribution scale must be positive");
  Require(std::isfinite(log_base) && log_base > 0.0 && log_base != 1.0,
          "log base must be positive and different from 1");
}

double SmoothingDistribution::ExponentCdf(double a) const {
  switch (kind_) {
    case DistributionKind::kLogGaussian:
      return NormalCdf(a / scale_);
    case DistributionKind::kLogLaplace:
      return a < 0.0 ? 0.5 * std::exp(a / scale_)
                     : 1.0 - 0.5 * std::exp(-a / scale_);
    case DistributionKind::kLogUniform:
      if (a <= -scale_) return 0.0;
      if (a >= scale_) return 1.0;
      return (a + scale_) / (2.0 * scale_);
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

double SmoothingDistribution::ExponentQuantile(double p) const {
  switch (kind_) {
    case DistributionKind::kLogGaussian:
      return scale_ * NormalQuantile(p);
    case DistributionKind::kLogLaplace:
      return p < 0.5 ? scale_ * std::log(2.0 * p)
                     : -scale_ * std::log(2.0 * (1.0 - p));
    case DistributionKind::kLogUniform:
      return -scale_ + 2.0 * scale_ * p;
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

double SmoothingDistribution::ExponentPdf(double a) const {
  switch (kind_) {
    case DistributionKind::kLogGaussian: {
      const double t = a / scale_;
      return std::exp(-0.5 * t * t) / (scale_ * std::sqrt(2.0 * std::numbers::pi));
    }
    case DistributionKind::kLogLaplace:
      return std::exp(-std::fabs(a) / scale_) / (2.0 * scale_);
    case DistributionKind::kLogUniform:
      return (a >= -scale_ && a <= scale_) ? 1.0 / (2.0 * scale_) : 0.0;
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

double SmoothingDistribution::Cdf(double z) const {
  switch (kind_) {
    case DistributionKind::kRayleigh:
      return RayleighCdf({scale_}, z);
    case DistributionKind::kInverseRayleigh:
      if (z == 0.0) return 0.0;
      return InverseRayleighCdf({scale_}, z);
    default: {
      Require(z >= 0.0, "Cdf: z must be nonnegative");
      if (z == 0.0) return 0.0;
      if (std::isinf(z)) return 1.0;
      const double a = std::log(z) / std::log(log_base_);
      // A base below 1 reverses the order of the exponent.
      return log_base_ > 1.0 ? ExponentCdf(a) : 1.0 - ExponentCdf(a);
    }
  }
}

double SmoothingDistribution::Quantile(double p) const {
  switch (kind_) {
    case DistributionKind::kRayleigh:
      return RayleighQuantile({scale_}, p);
    case DistributionKind::kInverseRayleigh:
      Require(p >= 0.0 && p < 1.0, "Quantile: p must lie in [0, 1)");
      if (p == 0.0) return 0.0;
      return 1.0 / RayleighQuantile({scale_}, 1.0 - p);
    case DistributionKind::kLogUniform:
      Require(p >= 0.0 && p <= 1.0, "Quantile: p must lie in [0, 1]");
      break;
    default:
      Require(p > 0.0 && p < 1.0, "Quantile: p must lie in (0, 1)");
      break;
  }
  const double a = ExponentQuantile(log_base_ > 1.0 ? p : 1.0 - p);
  return std::pow(log_base_, a);
}

double SmoothingDistribution::Pdf(double z) const {
  if (z <= 0.0) return 0.0;
  switch (kind_) {
    case DistributionKind::kRayleigh:
      return RayleighPdf({scale_}, z);
    case DistributionKind::kInverseRayleigh:
      // Density of 1/beta: p_beta(1/z) / z^2.
      return RayleighPdf({scale_}, 1.0 / z) / (z * z);
    default: {
      const double ln_base = std::log(log_base_);
      return ExponentPdf(std::log(z) / ln_base) / (z * std::fabs(ln_base));
    }
  }
}

std::string SmoothingDistribution::Describe() const {
  char buffer[96];
  if (IsLogSpace(kind_)) {
    if (log_base_ == std::numbers::e) {
      std::snprintf(buffer, sizeof(buffer), "%s(scale=%.17g,base=e)",
                    KindName(kind_).data(), scale_);
    } else {
      std::snprintf(buffer, sizeof(buffer), "%s(scale=%.17g,base=%.17g)",
                    KindName(kind_).data(), scale_, log_base_);
    }
  } else {
    std::snprintf(buffer, sizeof(buffer), "%s(scale=%.17g)",
                  KindName(kind_).data(), scale_);
  }
  return buffer;
}

void SampleInto(const SmoothingDistribution& dist, const SeededSampler& sampler,
                std::uint64_t first_index, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = dist.Quantile(sampler.Uniform(first_index + i));
  }
}

std::vector<double> Sample(const SmoothingDistribution& dist,
                           const SeededSampler& sampler, std::size_t count) {
  Require(count >= 1, "Sample: count must be positive");
  std::vector<double> out(count);
  SampleInto(dist, sampler, 0, out);
  return out;
}

}  // namespace smoothcert
