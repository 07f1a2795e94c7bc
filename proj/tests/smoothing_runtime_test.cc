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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "smoothcert/errors.h"
#include "smoothcert/transforms.h"

namespace smoothcert {
namespace {

using kernels::Backend;

SmoothingConfig Config(std::uint64_t n, std::uint64_t seed = 0) {
  SmoothingConfig config;
  config.n = n;
  config.seed = seed;
  return config;
}

TEST(SmoothingConfigTest, Validation) {
  EXPECT_NO_THROW(SmoothingConfig{}.Validate());
  SmoothingConfig bad;
  bad.n0 = 9;
  EXPECT_THROW(bad.Validate(), DomainError);
  bad = SmoothingConfig{};
  bad.n = 50;
  EXPECT_THROW(bad.Validate(), DomainError);
  bad = SmoothingConfig{};
  bad.alpha = 1.0;
  EXPECT_THROW(bad.Validate(), DomainError);
  SweepConfig sweep;
  sweep.step = 0.0;
  EXPECT_THROW(sweep.Validate(), DomainError);
  sweep = SweepConfig{};
  sweep.gamma_max = 0.9;
  EXPECT_THROW(sweep.Validate(), DomainError);
}

TEST(SmoothedPredictCertifyTest, ThresholdOracleExample) {
  const ThresholdOracle oracle{0.5, 0.25};
  const auto result =
      SmoothedPredictCertify(oracle.Classifier(), oracle.Input(), Config(100000));
  ASSERT_FALSE(result.abstained());
  EXPECT_EQ(*result.label, 0);
  ASSERT_TRUE(result.certificate.has_value());
  EXPECT_LE(result.certificate->gamma2, 2.0);
  EXPECT_EQ(result.counts.trials, 100000u);
  // The lower bound sits below 0.9375 and within a few standard errors of it.
  EXPECT_LT(result.pa_lower, 0.9375);
  EXPECT_GT(result.pa_lower, 0.9375 - 6 * std::sqrt(0.9375 * 0.0625 / 1e5));
  EXPECT_NEAR(result.pa_lower,
              oracle::ClopperPearsonLower(result.counts.successes, 100000, 0.001),
              1e-10);
}

TEST(SmoothedPredictCertifyTest, ConstantClassifierNeverAbstains) {
  const ConstantClassifier constant(3, 5);
  const auto x = ImageTensor::FromValues({0.2, 0.7});
  for (std::uint64_t n : {10u, 100u, 1000u}) {
    auto config = Config(n);
    config.n0 = 10;
    const auto result = SmoothedPredictCertify(constant, x, config);
    ASSERT_FALSE(result.abstained()) << n;
    EXPECT_EQ(*result.label, 3);
    EXPECT_NEAR(result.pa_lower, std::pow(config.alpha, 1.0 / n), 1e-10);
  }
}

TEST(SmoothedPredictCertifyTest, HashClassifierAbstains) {
  const HashClassifier hash(10, 3);
  const auto x = ImageTensor::FromValues({0.3, 0.6, 0.9});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto result = SmoothedPredictCertify(hash, x, Config(10000, seed));
    EXPECT_TRUE(result.abstained()) << seed;
    EXPECT_FALSE(result.certificate.has_value());
    EXPECT_FALSE(result.abstain_reason.empty());
  }
}

TEST(SmoothedPredictCertifyTest, DeterministicAcrossRunsAndBackends) {
  const HashClassifier hash(3, 1);
  const auto x = ImageTensor::FromValues({0.4, 0.5});
  auto config = Config(20000, 17);
  const auto a = SmoothedPredictCertify(hash, x, config, Backend::kOpenMP);
  const auto b = SmoothedPredictCertify(hash, x, config, Backend::kOpenMP);
  const auto c = SmoothedPredictCertify(hash, x, config, Backend::kSerial);
  for (const auto& other : {b, c}) {
    EXPECT_EQ(a.label, other.label);
    EXPECT_EQ(a.pa_lower, other.pa_lower);
    EXPECT_EQ(a.selection_votes, other.selection_votes);
    EXPECT_EQ(a.estimation_votes, other.estimation_votes);
  }
}

TEST(SmoothedPredictCertifyTest, LargerAlphaNeverCausesAbstention) {
  // Critical factor 2 under a 1.9 attack: exact class-0 probability
  // F(2 / 1.9) = 0.536, close enough to 1/2 for alpha to matter.
  const ThresholdOracle oracle{0.6, 0.6 * 0.6};
  const auto x = GammaCorrect(oracle.Input(), GammaFactor(1.9));
  bool certified = false;
  for (double alpha : {1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.3}) {
    auto config = Config(2000, 5);
    config.alpha = alpha;
    const auto result = SmoothedPredictCertify(oracle.Classifier(), x, config);
    if (certified) EXPECT_FALSE(result.abstained()) << alpha;
    certified = certified || !result.abstained();
  }
  EXPECT_TRUE(certified);
}

TEST(SmoothedPredictCertifyTest, RunnerUpBoundUsesBothCounts) {
  const ThresholdOracle oracle{0.5, 0.25};
  auto config = Config(20000, 2);
  config.trivial_pb = false;
  const auto result =
      SmoothedPredictCertify(oracle.Classifier(), oracle.Input(), config);
  ASSERT_FALSE(result.abstained());
  const auto k = result.counts.successes;
  EXPECT_NEAR(result.pa_lower, oracle::ClopperPearsonLower(k, 20000, 0.0005), 1e-10);
}

// Every attack strictly inside the certificate keeps the exact smoothed
// probability of the predicted class above one half.
TEST(SmoothedPredictCertifyTest, CertificatesAreSoundForRandomOracles) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto dist = SmoothingDistribution::Rayleigh();
  for (int pair = 0; pair < 20; ++pair) {
    const double v = 0.2 + 0.7 * u(rng);
    const double critical = 1.1 + 2.0 * u(rng);
    const ThresholdOracle oracle{v, std::pow(v, critical)};
    const auto result = SmoothedPredictCertify(oracle.Classifier(), oracle.Input(),
                                               Config(100000, pair));
    ASSERT_FALSE(result.abstained());
    ASSERT_EQ(*result.label, 0);
    const auto& cert = *result.certificate;
    for (int i = 1; i <= 100; ++i) {
      const double g = cert.gamma1 + (cert.gamma2 - cert.gamma1) * i / 101.0;
      ASSERT_GT(ExactOracleProbability(oracle, g, dist), 0.5)
          << v << " " << critical << " " << g;
    }
  }
}

TEST(EmpiricalSweepTest, ThresholdOracleRightEnd) {
  const ThresholdOracle oracle{0.5, 0.25};
  SweepConfig config;
  config.n = 100000;
  config.gamma_max = 2.5;
  const auto sweep = EmpiricalSweep(oracle.Classifier(), oracle.Input(), 0, config);
  ASSERT_FALSE(sweep.empty);
  EXPECT_GE(sweep.right, 1.98 - 1e-9);
  EXPECT_LE(sweep.right, 2.00 + 1e-9);
  // Class 0 only gets likelier for gamma < 1: the left walk reaches the floor.
  EXPECT_NEAR(sweep.left, 0.01, 1e-12);
}

TEST(EmpiricalSweepTest, ConstantClassifierSpansTheWholeRange) {
  const ConstantClassifier constant(1, 2);
  SweepConfig config;
  config.n = 100;
  config.step = 0.05;
  config.gamma_max = 1.5;
  const auto sweep =
      EmpiricalSweep(constant, ImageTensor::FromValues({0.4}), 1, config);
  EXPECT_FALSE(sweep.empty);
  EXPECT_NEAR(sweep.left, 0.05, 1e-12);
  EXPECT_NEAR(sweep.right, 1.5, 1e-12);
  const auto wrong =
      EmpiricalSweep(constant, ImageTensor::FromValues({0.4}), 0, config);
  EXPECT_TRUE(wrong.empty);
}

TEST(EmpiricalSweepTest, ContainsTheCertificateUpToOneStep) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int pair = 0; pair < 5; ++pair) {
    const double v = 0.2 + 0.7 * u(rng);
    const double critical = 1.3 + 1.5 * u(rng);
    const ThresholdOracle oracle{v, std::pow(v, critical)};
    const auto result = SmoothedPredictCertify(oracle.Classifier(), oracle.Input(),
                                               Config(20000, pair));
    ASSERT_FALSE(result.abstained());
    SweepConfig config;
    config.n = 20000;
    config.seed = pair;
    config.gamma_max = 2 * critical;
    const auto sweep = EmpiricalSweep(oracle.Classifier(), oracle.Input(),
                                      *result.label, config);
    EXPECT_LE(sweep.left, result.certificate->gamma1 + config.step);
    EXPECT_GE(sweep.right, result.certificate->gamma2 - config.step);
  }
}

TEST(EmpiricalSweepTest, PredictionMatchesBackends) {
  const HashClassifier hash(4, 2);
  const auto x = ImageTensor::FromValues({0.3, 0.8});
  SweepConfig config;
  config.n = 5000;
  for (double g : {0.5, 1.0, 1.3}) {
    EXPECT_EQ(SweepPrediction(hash, x, g, config, Backend::kSerial),
              SweepPrediction(hash, x, g, config, Backend::kOpenMP));
  }
}

}  // namespace
}  // namespace smoothcert
