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

#include "smoothcert/realistic_pipeline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include <json.hpp>

#include "smoothcert/normal.h"
#include "smoothcert/philox.h"
#include "smoothcert/transforms.h"

namespace smoothcert {
namespace {

using nlohmann::json;

// Streams of the certification seed.
constexpr std::uint64_t kCandidateStream = 0;
constexpr std::uint64_t kGammaStream = 1;
constexpr std::uint64_t kInnerNoiseStream = 2;

// Slack when checking that rho covers the computed budget.
constexpr double kBudgetSlack = 1e-12;

void RequireUnit(double v, const char* name) {
  Require(v >= 0.0 && v <= 1.0, std::string(name) + " must lie in [0, 1]");
}

void RequireOpenUnit(double v, const char* name) {
  Require(v > 0.0 && v < 1.0, std::string(name) + " must lie in (0, 1)");
}

json ParseObject(std::string_view text, const char* what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError(std::string(what) + " must be a JSON object");
  }
  return doc;
}

void CheckKeys(const json& doc, const std::set<std::string>& keys,
               const char* what) {
  for (const auto& [key, value] : doc.items()) {
    if (!keys.contains(key)) {
      throw ConfigError(std::string(what) + ": unknown field \"" + key + "\"");
    }
  }
  for (const auto& key : keys) {
    if (!doc.contains(key)) {
      throw ConfigError(std::string(what) + ": missing field \"" + key + "\"");
    }
  }
}

double Number(const json& doc, const char* key, const char* what) {
  const json& v = doc.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string(what) + ": field \"" + key +
                      "\" must be a number");
  }
  return v.get<double>();
}

std::uint64_t Unsigned(const json& doc, const char* key, const char* what) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(std::string(what) + ": field \"" + key +
                      "\" must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

template <typename T>
T Validated(T value, const char* what) {
  try {
    value.Validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
  return value;
}

}  // namespace

void GammaInterval::Validate() const {
  Require(std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && lo <= hi,
          "gamma interval must satisfy 0 < lo <= hi < inf");
}

void ErrorBudget::Validate() const {
  Require(std::isfinite(E) && E >= 0.0, "E must be nonnegative");
  RequireOpenUnit(q_E, "q_E");
  RequireOpenUnit(alpha_E, "alpha_E");
  Require(std::isfinite(rho) && rho >= 0.0, "rho must be nonnegative");
  gamma_interval.Validate();
}

void RealisticConfig::Validate() const {
  Require(n_eps >= 1, "n_eps must be positive");
  Require(n_gamma >= 1, "n_gamma must be positive");
  Require(std::isfinite(sigma_gauss) && sigma_gauss >= 0.0,
          "sigma_gauss must be nonnegative");
  RequireOpenUnit(alpha, "alpha");
}

double ErrorBudgetRho(double alpha, double q_E, double alpha_E) {
  RequireUnit(alpha, "alpha");
  RequireUnit(q_E, "q_E");
  RequireUnit(alpha_E, "alpha_E");
  return alpha + (1.0 - q_E) + alpha_E;
}

std::optional<double> GaussianL2Radius(double pa_lower, double sigma_gauss) {
  Require(std::isfinite(sigma_gauss) && sigma_gauss >= 0.0,
          "sigma_gauss must be nonnegative");
  RequireUnit(pa_lower, "pa_lower");
  if (pa_lower <= 0.5) return std::nullopt;
  if (sigma_gauss == 0.0) return 0.0;
  return sigma_gauss * NormalQuantile(pa_lower);
}

std::variant<ProbBounds, Abstain> AdjustProbabilities(double pa_lower,
                                                      double pb_upper,
                                                      double rho) {
  Require(std::isfinite(rho) && rho >= 0.0, "rho must be nonnegative");
  const ProbBounds adjusted{pa_lower - rho, pb_upper + rho, 1.0 - rho};
  if (adjusted.pa_lower <= adjusted.pb_upper) {
    return Abstain{"adjusted bounds cross: pa' <= pb'"};
  }
  if (adjusted.pa_lower <= 0.5) return Abstain{"adjusted pa' <= 1/2"};
  return adjusted;
}

InsufficientSamplesError::InsufficientSamplesError(std::size_t required,
                                                   std::size_t available)
    : DomainError("need >= " + std::to_string(required) +
                  " samples for the requested quantile bound, got " +
                  std::to_string(available)),
      required_(required) {}

std::size_t MinSamplesForQuantileBound(double q, double alpha) {
  RequireOpenUnit(q, "q");
  RequireOpenUnit(alpha, "alpha");
  auto m = static_cast<std::size_t>(std::ceil(std::log(alpha) / std::log(q)));
  // Guard the rounding of the ratio in both directions.
  while (m > 1 && std::pow(q, static_cast<double>(m - 1)) <= alpha) --m;
  while (std::pow(q, static_cast<double>(m)) > alpha) ++m;
  return std::max<std::size_t>(m, 1);
}

std::size_t QuantileBoundOrder(std::size_t m, double q, double alpha) {
  const std::size_t need = MinSamplesForQuantileBound(q, alpha);
  if (m < need) throw InsufficientSamplesError(need, m);
  for (std::uint64_t k = 1; k <= m; ++k) {
    if (BinomialLowerTail(m, k - 1, q) >= 1.0 - alpha) return k;
  }
  throw InsufficientSamplesError(need, m);
}

double QuantileUpperBound(std::span<const double> values, double q,
                          double alpha) {
  const std::size_t k = QuantileBoundOrder(values.size(), q, alpha);
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[k - 1];
}

std::vector<double> GammaGrid(const GammaInterval& interval,
                              std::size_t grid_points) {
  interval.Validate();
  Require(grid_points >= 2, "the gamma grid needs at least 2 points");
  std::vector<double> grid(grid_points);
  const double width = interval.hi - interval.lo;
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid[i] = interval.lo + width * static_cast<double>(i) /
                                static_cast<double>(grid_points - 1);
  }
  grid.back() = interval.hi;
  return grid;
}

ConversionErrorEstimate EstimateConversionError(
    const std::vector<ImageTensor>& dataset,
    const ConversionErrorRequest& request, kernels::Backend backend) {
  const std::vector<double> grid =
      GammaGrid(request.gamma_interval, request.grid_points);
  return EstimateConversionError(dataset, grid, request, backend);
}

ConversionErrorEstimate EstimateConversionError(
    const std::vector<ImageTensor>& dataset, std::span<const double> grid,
    const ConversionErrorRequest& request, kernels::Backend backend) {
  Require(!dataset.empty(), "conversion error needs a nonempty dataset");
  Require(!grid.empty(), "conversion error needs a nonempty gamma grid");
  for (double g : grid) {
    Require(std::isfinite(g) && g > 0.0, "gamma grid entries must be positive");
  }
  const std::size_t samples =
      request.samples == 0 ? dataset.size() : request.samples;
  const std::size_t need = MinSamplesForQuantileBound(request.q_E, request.alpha_E);
  if (samples < need) throw InsufficientSamplesError(need, samples);

  ConversionErrorEstimate estimate;
  estimate.samples = samples;
  estimate.grid.assign(grid.begin(), grid.end());
  estimate.maxima.assign(samples, 0.0);
  const SeededSampler sampler{request.seed, 0};
  kernels::ForEachIndex(samples, backend, [&](std::size_t i) {
    const ImageTensor& x = dataset[i % dataset.size()];
    const GammaFactor beta(request.beta_dist.Quantile(sampler.Uniform(i)));
    double worst = 0.0;
    for (double g : grid) {
      worst = std::max(worst, ConversionError(x, beta, GammaFactor(g)));
    }
    estimate.maxima[i] = worst;
  });
  estimate.E = QuantileUpperBound(estimate.maxima, request.q_E, request.alpha_E);
  estimate.order_index =
      QuantileBoundOrder(estimate.maxima.size(), request.q_E, request.alpha_E);
  return estimate;
}

RealisticResult CertifyRealistic(const BaseClassifier& base,
                                 const ImageTensor& x,
                                 const RealisticConfig& config,
                                 const ErrorBudget& budget,
                                 kernels::Backend backend) {
  config.Validate();
  budget.Validate();
  const double required = ErrorBudgetRho(config.alpha, budget.q_E, budget.alpha_E);
  if (budget.rho + kBudgetSlack < required) {
    throw ConfigError("rho = " + std::to_string(budget.rho) +
                      " does not cover alpha + 1 - q_E + alpha_E = " +
                      std::to_string(required));
  }
  if (!budget.gamma_interval.Contains(1.0)) {
    throw ConfigError("the attack interval must contain gamma = 1");
  }

  RealisticResult result;
  result.rho = budget.rho;
  result.counts = {0, config.n_gamma};
  if (!BudgetFeasible(budget.rho)) {
    result.abstain_reason = "budget infeasible: rho >= 1/2";
    return result;
  }

  kernels::NoiseVoteJob candidate_job;
  candidate_job.classifier = &base;
  candidate_job.input = x.data();
  candidate_job.sigma = config.sigma_gauss;
  candidate_job.sampler = SeededSampler{config.seed, kCandidateStream};
  candidate_job.count = config.n_eps;
  result.candidate =
      kernels::ArgMax(kernels::CountNoiseVotes(candidate_job, backend));

  const SmoothingDistribution rayleigh = SmoothingDistribution::Rayleigh();
  const SeededSampler gamma_sampler{config.seed, kGammaStream};
  const SeededSampler noise_root{config.seed, kInnerNoiseStream};
  std::vector<std::uint8_t> hits(config.n_gamma, 0);
  kernels::ForEachIndex(config.n_gamma, backend, [&](std::size_t j) {
    const GammaFactor beta(rayleigh.Quantile(gamma_sampler.Uniform(j)));
    const ImageTensor stored = Quantize8(GammaCorrect(x, beta));
    kernels::NoiseVoteJob job;
    job.classifier = &base;
    job.input = stored.data();
    job.sigma = config.sigma_gauss;
    job.sampler = noise_root.Derive(j);
    job.count = config.n_eps;
    const kernels::VoteCounts votes =
        kernels::CountNoiseVotes(job, kernels::Backend::kSerial);
    const int label = kernels::ArgMax(votes);
    if (label != result.candidate) return;
    const double inner_pa = ClopperPearson(
        {votes[static_cast<std::size_t>(label)], config.n_eps}, config.alpha,
        BoundSide::kLower);
    const std::optional<double> radius =
        GaussianL2Radius(inner_pa, config.sigma_gauss);
    if (radius && *radius >= budget.E) hits[j] = 1;
  });
  result.counts.successes = static_cast<std::uint64_t>(
      std::count(hits.begin(), hits.end(), std::uint8_t{1}));
  result.pa_lower =
      ClopperPearson(result.counts, config.alpha, BoundSide::kLower);

  const auto adjusted =
      AdjustProbabilities(result.pa_lower, 1.0 - result.pa_lower, budget.rho);
  if (const auto* abstain = std::get_if<Abstain>(&adjusted)) {
    result.abstain_reason = abstain->reason;
    return result;
  }
  result.adjusted = std::get<ProbBounds>(adjusted);
  const CertOutcome outcome = CertifyRayleigh(*result.adjusted);
  if (const auto* abstain = std::get_if<Abstain>(&outcome)) {
    result.abstain_reason = abstain->reason;
    return result;
  }
  Certificate cert = std::get<Certificate>(outcome);
  result.unclipped = cert;
  cert.gamma1 = std::max(cert.gamma1, budget.gamma_interval.lo);
  cert.gamma2 = std::min(cert.gamma2, budget.gamma_interval.hi);
  result.certificate = cert;
  result.label = result.candidate;
  return result;
}

ErrorBudget ParseErrorBudget(std::string_view json_text) {
  constexpr const char* kWhat = "error budget";
  const json doc = ParseObject(json_text, kWhat);
  CheckKeys(doc, {"E", "q_E", "alpha_E", "rho", "gamma_interval"}, kWhat);
  ErrorBudget budget;
  budget.E = Number(doc, "E", kWhat);
  budget.q_E = Number(doc, "q_E", kWhat);
  budget.alpha_E = Number(doc, "alpha_E", kWhat);
  budget.rho = Number(doc, "rho", kWhat);
  const json& interval = doc.at("gamma_interval");
  if (!interval.is_array() || interval.size() != 2 || !interval[0].is_number() ||
      !interval[1].is_number()) {
    throw ConfigError("error budget: gamma_interval must be [lo, hi]");
  }
  budget.gamma_interval = {interval[0].get<double>(), interval[1].get<double>()};
  return Validated(budget, kWhat);
}

RealisticConfig ParseRealisticConfig(std::string_view json_text) {
  constexpr const char* kWhat = "realistic config";
  const json doc = ParseObject(json_text, kWhat);
  CheckKeys(doc, {"n_eps", "n_gamma", "sigma_gauss", "alpha", "seed"}, kWhat);
  RealisticConfig config;
  config.n_eps = Unsigned(doc, "n_eps", kWhat);
  config.n_gamma = Unsigned(doc, "n_gamma", kWhat);
  config.sigma_gauss = Number(doc, "sigma_gauss", kWhat);
  config.alpha = Number(doc, "alpha", kWhat);
  config.seed = Unsigned(doc, "seed", kWhat);
  return Validated(config, kWhat);
}

ErrorBudget LoadErrorBudget(const std::filesystem::path& path) {
  try {
    return ParseErrorBudget(ReadFile(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RealisticConfig LoadRealisticConfig(const std::filesystem::path& path) {
  try {
    return ParseRealisticConfig(ReadFile(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string SerializeErrorBudget(const ErrorBudget& budget) {
  const json doc = {
      {"E", budget.E},
      {"q_E", budget.q_E},
      {"alpha_E", budget.alpha_E},
      {"rho", budget.rho},
      {"gamma_interval", {budget.gamma_interval.lo, budget.gamma_interval.hi}},
  };
  return doc.dump();
}

std::string SerializeRealisticConfig(const RealisticConfig& config) {
  const json doc = {
      {"n_eps", config.n_eps},
      {"n_gamma", config.n_gamma},
      {"sigma_gauss", config.sigma_gauss},
      {"alpha", config.alpha},
      {"seed", config.seed},
  };
  return doc.dump();
}

}  // namespace smoothcert
