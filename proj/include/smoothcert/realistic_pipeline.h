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

// Certification when every gamma-corrected image is stored with 8 bits per
// channel, so composition G_b(G_g(x)) = G_{bg}(x) only holds up to the
// conversion error. The base classifier is first smoothed with Gaussian noise
// so it is robust in an l2 ball covering that error, and the result is then
// smoothed over a Rayleigh gamma factor. Every step that can fail is charged
// to a total mistake budget
//
//   rho = alpha + (1 - q_E) + alpha_E,
//
// by which the outer probability bounds are shifted before certifying.

#ifndef SMOOTHCERT_REALISTIC_PIPELINE_H_
#define SMOOTHCERT_REALISTIC_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smoothcert/cert_engine.h"
#include "smoothcert/classifiers.h"
#include "smoothcert/errors.h"
#include "smoothcert/kernels.h"
#include "smoothcert/tensor.h"

namespace smoothcert {

// The attack interval Gamma = [lo, hi].
struct GammaInterval {
  double lo = 1.0;
  double hi = 1.0;

  // Throws DomainError unless 0 < lo <= hi < inf.
  void Validate() const;
  bool Contains(double gamma) const { return lo <= gamma && gamma <= hi; }
};

struct ErrorBudget {
  // l2 bound on the conversion error, holding with rate q_E over the data
  // and confidence 1 - alpha_E over its estimation.
  double E = 0.0;
  double q_E = 0.9;
  double alpha_E = 0.01;
  // Total mistake budget; must cover alpha + (1 - q_E) + alpha_E.
  double rho = 0.111;
  GammaInterval gamma_interval;

  // Throws DomainError for E < 0, q_E or alpha_E outside (0, 1), rho < 0, or
  // an invalid interval.
  void Validate() const;
};

struct RealisticConfig {
  std::uint64_t n_eps = 1000;
  std::uint64_t n_gamma = 1000;
  double sigma_gauss = 0.25;
  double alpha = 0.001;
  std::uint64_t seed = 0;

  // Throws DomainError unless n_eps, n_gamma >= 1, sigma_gauss >= 0 and
  // 0 < alpha < 1. sigma_gauss = 0 disables the inner noise.
  void Validate() const;
  std::uint64_t total_samples() const { return n_eps * n_gamma; }
};

// alpha + 1 - q_E + alpha_E. Throws DomainError for arguments outside [0, 1].
double ErrorBudgetRho(double alpha, double q_E, double alpha_E);

// Whether any outcome other than abstention is possible under rho.
inline bool BudgetFeasible(double rho) { return rho < 0.5; }

// sigma_gauss * Phi^-1(pa_lower), or nullopt (abstain) for pa_lower <= 1/2.
std::optional<double> GaussianL2Radius(double pa_lower, double sigma_gauss);

// (pa_lower - rho, pb_upper + rho), or Abstain when the shifted bounds cross
// or pa_lower - rho <= 1/2.
std::variant<ProbBounds, Abstain> AdjustProbabilities(double pa_lower,
                                                      double pb_upper,
                                                      double rho);

// Raised when too few samples exist for the requested quantile bound.
class InsufficientSamplesError : public DomainError {
 public:
  InsufficientSamplesError(std::size_t required, std::size_t available);
  std::size_t required() const { return required_; }

 private:
  std::size_t required_;
};

// Smallest m with q^m <= alpha: fewer samples cannot bound the q-quantile
// from above with confidence 1 - alpha.
std::size_t MinSamplesForQuantileBound(double q, double alpha);

// The least k with P(Binomial(m, q) <= k - 1) >= 1 - alpha. Throws
// InsufficientSamplesError when no such k <= m exists.
std::size_t QuantileBoundOrder(std::size_t m, double q, double alpha);

// Distribution-free upper confidence bound on the q-quantile of m values:
// the k-th smallest, k = QuantileBoundOrder(m, q, alpha).
double QuantileUpperBound(std::span<const double> values, double q,
                          double alpha);

struct ConversionErrorRequest {
  GammaInterval gamma_interval;
  double q_E = 0.9;
  double alpha_E = 0.01;
  // (x, beta) pairs; pair i uses dataset[i % size]. 0 means one per tensor.
  std::size_t samples = 0;
  // Evenly spaced attack factors including both ends of the interval.
  std::size_t grid_points = 64;
  std::uint64_t seed = 0;
  // Law of the smoothing factor beta.
  SmoothingDistribution beta_dist = SmoothingDistribution::Rayleigh();
};

struct ConversionErrorEstimate {
  double E = 0.0;
  std::size_t samples = 0;
  // 1-based order statistic returned as E.
  std::size_t order_index = 0;
  std::vector<double> grid;
  // Per-pair max over the grid of the conversion error, in pair order.
  std::vector<double> maxima;
};

// `grid_points` evenly spaced factors over the interval (>= 2).
std::vector<double> GammaGrid(const GammaInterval& interval,
                              std::size_t grid_points);

// For each (x, beta) pair, the max over the grid of
// ConversionError(x, beta, gamma); E is QuantileUpperBound of those maxima.
// The grid maximum approximates the supremum over the interval.
ConversionErrorEstimate EstimateConversionError(
    const std::vector<ImageTensor>& dataset,
    const ConversionErrorRequest& request,
    kernels::Backend backend = kernels::Backend::kOpenMP);

// The same with an explicit attack grid (request.gamma_interval and
// grid_points are ignored).
ConversionErrorEstimate EstimateConversionError(
    const std::vector<ImageTensor>& dataset, std::span<const double> grid,
    const ConversionErrorRequest& request,
    kernels::Backend backend = kernels::Backend::kOpenMP);

struct RealisticResult {
  // nullopt means abstain.
  std::optional<int> label;
  // Gaussian-smoothed prediction on the unperturbed input.
  int candidate = 0;
  // Outer hits: gamma draws whose inner prediction is the candidate with an
  // l2 radius of at least E.
  SampleCounts counts;
  double pa_lower = 0.0;
  double rho = 0.0;
  std::optional<ProbBounds> adjusted;
  // Before and after clipping to the attack interval; present iff label is.
  std::optional<Certificate> unclipped;
  std::optional<Certificate> certificate;
  std::string abstain_reason;

  bool abstained() const { return !label.has_value(); }
};

// Runs the double-smoothing certifier. Throws ConfigError when budget.rho is
// smaller than alpha + 1 - q_E + alpha_E or the interval excludes 1; abstains
// when rho >= 1/2.
RealisticResult CertifyRealistic(
    const BaseClassifier& base, const ImageTensor& x,
    const RealisticConfig& config, const ErrorBudget& budget,
    kernels::Backend backend = kernels::Backend::kOpenMP);

// JSON documents with exactly the field names of the structs above;
// gamma_interval is a two-element array. Unknown or missing fields raise
// ConfigError.
ErrorBudget ParseErrorBudget(std::string_view json_text);
RealisticConfig ParseRealisticConfig(std::string_view json_text);
ErrorBudget LoadErrorBudget(const std::filesystem::path& path);
RealisticConfig LoadRealisticConfig(const std::filesystem::path& path);
std::string SerializeErrorBudget(const ErrorBudget& budget);
std::string SerializeRealisticConfig(const RealisticConfig& config);

}  // namespace smoothcert

#endif  // SMOOTHCERT_REALISTIC_PIPELINE_H_
