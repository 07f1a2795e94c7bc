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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "oracles.h"
#include "smoothcert/errors.h"

namespace smoothcert {
namespace {

const RayleighParams kMedian = RayleighParams::UnitMedian();

TEST(RayleighParamsTest, ScaleConstantsMatchTheirDefinitions) {
  EXPECT_NEAR(kUnitMedianSigma, 1.0 / std::sqrt(2.0 * std::numbers::ln2), 1e-12);
  EXPECT_NEAR(kUnitMeanSigma, std::sqrt(2.0 / std::numbers::pi), 1e-12);
  EXPECT_NEAR(RayleighQuantile(kMedian, 0.5), 1.0, 1e-12);
  // Mean sigma * sqrt(pi / 2) is 1 at the unit-mean scale.
  EXPECT_NEAR(RayleighParams::UnitMean().sigma * std::sqrt(std::numbers::pi / 2),
              1.0, 1e-12);
  EXPECT_THROW(RayleighParams::WithSigma(0.0), DomainError);
  EXPECT_THROW(RayleighParams::WithSigma(-1.0), DomainError);
}

TEST(RayleighTest, CdfExamples) {
  EXPECT_EQ(RayleighCdf(kMedian, 0.0), 0.0);
  EXPECT_NEAR(RayleighCdf(kMedian, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(RayleighCdf(kMedian, 2.0), 0.9375, 1e-15);
  EXPECT_THROW(RayleighCdf(kMedian, -0.1), DomainError);
}

TEST(RayleighTest, QuantileExamples) {
  EXPECT_NEAR(RayleighQuantile(kMedian, 0.5), 1.0, 1e-15);
  EXPECT_EQ(RayleighQuantile(kMedian, 0.0), 0.0);
  EXPECT_NEAR(RayleighQuantile(kMedian, 0.9375), 2.0, 1e-14);
  EXPECT_THROW(RayleighQuantile(kMedian, 1.0), DomainError);
  EXPECT_THROW(RayleighQuantile(kMedian, -1e-9), DomainError);
}

TEST(RayleighTest, QuantileInvertsCdf) {
  for (double sigma : {0.3, kUnitMedianSigma, 2.0}) {
    const RayleighParams params{sigma};
    for (int i = 1; i < 1000; ++i) {
      const double p = i / 1000.0;
      ASSERT_NEAR(RayleighCdf(params, RayleighQuantile(params, p)), p, 1e-9);
    }
  }
}

TEST(RayleighTest, CdfMatchesQuadratureOfDensity) {
  for (double sigma : {0.5, kUnitMedianSigma, 1.7}) {
    for (double z : {0.05, 0.3, 0.9, 1.5, 2.5, 4.0}) {
      EXPECT_NEAR(RayleighCdf({sigma}, z),
                  oracle::RayleighCdfByQuadrature(sigma, z), 1e-12);
      EXPECT_NEAR(RayleighPdf({sigma}, z), oracle::RayleighPdf(sigma, z), 1e-14);
    }
  }
}

TEST(InverseRayleighTest, CdfExamples) {
  EXPECT_NEAR(InverseRayleighCdf(kMedian, 1.0), 0.5, 1e-15);
  EXPECT_EQ(InverseRayleighCdf(kMedian, INFINITY), 1.0);
  EXPECT_NEAR(InverseRayleighCdf(kMedian, 0.5), 0.0625, 1e-15);
  EXPECT_THROW(InverseRayleighCdf(kMedian, 0.0), DomainError);
}

TEST(InverseRayleighTest, IsComplementOfRayleighAtReciprocal) {
  for (double z = 0.05; z < 20.0; z *= 1.3) {
    EXPECT_NEAR(InverseRayleighCdf(kMedian, z), 1.0 - RayleighCdf(kMedian, 1.0 / z),
                1e-12);
  }
}

TEST(DistributionKindTest, NamesRoundTrip) {
  for (auto kind : {DistributionKind::kRayleigh, DistributionKind::kInverseRayleigh,
                    DistributionKind::kLogGaussian, DistributionKind::kLogLaplace,
                    DistributionKind::kLogUniform}) {
    EXPECT_EQ(ParseKind(KindName(kind)), kind);
  }
  EXPECT_THROW(ParseKind("cauchy"), DomainError);
  EXPECT_FALSE(IsLogSpace(DistributionKind::kRayleigh));
  EXPECT_TRUE(IsLogSpace(DistributionKind::kLogUniform));
}

TEST(SmoothingDistributionTest, RejectsInvalidParameters) {
  EXPECT_THROW(SmoothingDistribution(DistributionKind::kRayleigh, 0.0), DomainError);
  EXPECT_THROW(SmoothingDistribution(DistributionKind::kLogGaussian, 1.0, 1.0),
               DomainError);
  EXPECT_THROW(SmoothingDistribution(DistributionKind::kLogGaussian, 1.0, -2.0),
               DomainError);
}

std::vector<SmoothingDistribution> AllKinds() {
  return {SmoothingDistribution::Rayleigh(),
          SmoothingDistribution::InverseRayleigh(),
          SmoothingDistribution(DistributionKind::kLogGaussian, 0.64),
          SmoothingDistribution(DistributionKind::kLogLaplace, 0.5),
          SmoothingDistribution(DistributionKind::kLogUniform, 0.8),
          SmoothingDistribution(DistributionKind::kLogGaussian, 0.4, 2.0),
          SmoothingDistribution(DistributionKind::kLogLaplace, 0.3, 0.5)};
}

TEST(SmoothingDistributionTest, CdfIsMonotoneWithCorrectLimits) {
  for (const auto& dist : AllKinds()) {
    SCOPED_TRACE(dist.Describe());
    EXPECT_EQ(dist.Cdf(0.0), 0.0);
    EXPECT_NEAR(dist.Cdf(1e-300), 0.0, 1e-12);
    EXPECT_NEAR(dist.Cdf(1e300), 1.0, 1e-12);
    double previous = 0.0;
    for (double z = 1e-3; z < 1e3; z *= 1.05) {
      const double c = dist.Cdf(z);
      ASSERT_GE(c, previous);
      previous = c;
    }
  }
}

TEST(SmoothingDistributionTest, QuantileInvertsCdfInTheInterior) {
  for (const auto& dist : AllKinds()) {
    SCOPED_TRACE(dist.Describe());
    for (double z = 0.05; z < 20.0; z *= 1.1) {
      const double c = dist.Cdf(z);
      if (c <= 1e-6 || c >= 1 - 1e-6) continue;  // Outside the interior.
      ASSERT_NEAR(dist.Quantile(c), z, 1e-9 * std::max(1.0, z));
    }
  }
}

// Density of the exponent law (natural log), for the quadrature oracle.
double ExponentDensity(DistributionKind kind, double scale, double a) {
  switch (kind) {
    case DistributionKind::kLogGaussian:
      return std::exp(-0.5 * a * a / (scale * scale)) /
             (scale * std::sqrt(2 * std::numbers::pi));
    case DistributionKind::kLogLaplace:
      return std::exp(-std::fabs(a) / scale) / (2 * scale);
    default:
      return std::fabs(a) <= scale ? 1 / (2 * scale) : 0.0;
  }
}

TEST(SmoothingDistributionTest, LogSpaceCdfMatchesQuadratureOfExponentLaw) {
  for (auto kind : {DistributionKind::kLogGaussian, DistributionKind::kLogLaplace,
                    DistributionKind::kLogUniform}) {
    for (double base : {std::numbers::e, 2.0, 10.0}) {
      const double scale = 0.7;
      const SmoothingDistribution dist(kind, scale, base);
      SCOPED_TRACE(dist.Describe());
      for (int i = 0; i < 20; ++i) {
        const double z = std::exp(-2.0 + 4.0 * i / 19.0);
        const double a = std::log(z) / std::log(base);
        const double lower = -40.0 * scale;
        // Split at 0 and +-scale where the Laplace and uniform densities kink.
        double mass = 0.0;
        double from = lower;
        for (double knot : {-scale, 0.0, scale, a}) {
          if (knot <= from || knot > a) continue;
          mass += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
              [&](double t) { return ExponentDensity(kind, scale, t); }, from, knot,
              15, 1e-14);
          from = knot;
        }
        EXPECT_NEAR(dist.Cdf(z), mass, 1e-10) << "z = " << z;
      }
    }
  }
}

// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
template <typename Cdf>
double KolmogorovSmirnov(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

TEST(SampleTest, KolmogorovSmirnovForEveryKind) {
  for (const auto& dist : AllKinds()) {
    SCOPED_TRACE(dist.Describe());
    const auto samples = Sample(dist, SeededSampler{11, 0}, 100000);
    EXPECT_LT(KolmogorovSmirnov(samples, [&](double z) { return dist.Cdf(z); }),
              0.01);
  }
}

TEST(SampleTest, RayleighMedianIsOne) {
  auto samples = Sample(SmoothingDistribution::Rayleigh(), SeededSampler{7, 0}, 1000000);
  std::nth_element(samples.begin(), samples.begin() + 500000, samples.end());
  EXPECT_NEAR(samples[500000], 1.0, 0.005);
}

TEST(SampleTest, LogUniformStaysInSupport) {
  const double lambda = 0.9;
  const SmoothingDistribution dist(DistributionKind::kLogUniform, lambda);
  for (double v : Sample(dist, SeededSampler{3, 1}, 100000)) {
    ASSERT_GE(v, std::exp(-lambda));
    ASSERT_LE(v, std::exp(lambda));
  }
}

TEST(SampleTest, PartitionedStreamsReproduceTheSerialSequence) {
  const auto dist = SmoothingDistribution::Rayleigh();
  const SeededSampler sampler{5, 3};
  const auto whole = Sample(dist, sampler, 4000);
  std::vector<double> parts(4000);
  for (int worker = 3; worker >= 0; --worker) {
    SampleInto(dist, sampler, 1000 * worker,
               std::span<double>(parts).subspan(1000 * worker, 1000));
  }
  EXPECT_EQ(whole, parts);
  EXPECT_THROW(Sample(dist, sampler, 0), DomainError);
}

}  // namespace
}  // namespace smoothcert
