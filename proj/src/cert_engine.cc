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

#include "smoothcert/cert_engine.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bisection.h"
#include "smoothcert/errors.h"
#include "smoothcert/normal.h"

namespace smoothcert {
namespace {

constexpr double kGammaTolerance = 1e-12;
constexpr int kMaxIterations = 200;
constexpr double kLowerFloor = 1e-9;
constexpr double kUpperCap = 1e9;

void ValidateBounds(const ProbBounds& bounds) {
  Require(std::isfinite(bounds.pa_lower) && std::isfinite(bounds.pb_upper),
          "probability bounds must be finite");
  Require(bounds.pa_lower > 0.0 && bounds.pa_lower < 1.0,
          "pa_lower must lie in the open interval (0, 1)");
  Require(bounds.pb_upper > 0.0 && bounds.pb_upper < 1.0,
          "pb_upper must lie in the open interval (0, 1)");
  Require(bounds.confidence > 0.0 && bounds.confidence <= 1.0,
          "confidence must lie in (0, 1]");
}

// `map(gamma, q)` must equal F(F^-1(q) / gamma) for the smoothing CDF F.
template <typename CompositeMap>
Certificate SolveEndpoints(CompositeMap map, const ProbBounds& bounds) {
  const double pa = bounds.pa_lower;
  const double pb = bounds.pb_upper;

  // Lower endpoint: the residual is positive for gamma below the root.
  const auto lower_residual_positive = [&](double gamma) {
    return map(gamma, pb) + map(gamma, 1.0 - pa) - 1.0 > 0.0;
  };
  double gamma1 = kLowerFloor;
  double lo = 1.0;
  while (lo >= kLowerFloor && !lower_residual_positive(lo)) lo *= 0.5;
  if (lo >= kLowerFloor) {
    const auto bracket = internal::Bisect(lower_residual_positive, lo,
                                          std::min(1.0, 2.0 * lo),
                                          kGammaTolerance, kMaxIterations);
    gamma1 = bracket.hi;
  }

  // Upper endpoint: positive below the root, negative beyond it.
  const auto upper_residual_positive = [&](double gamma) {
    return map(gamma, pa) + map(gamma, 1.0 - pb) - 1.0 > 0.0;
  };
  double gamma2 = std::numeric_limits<double>::infinity();
  double hi = 1.0;
  while (hi <= kUpperCap && upper_residual_positive(hi)) hi *= 2.0;
  if (hi <= kUpperCap) {
    const auto bracket = internal::Bisect(upper_residual_positive,
                                          std::max(1.0, 0.5 * hi), hi,
                                          kGammaTolerance, kMaxIterations);
    gamma2 = bracket.lo;
  }

  Certificate cert;
  cert.gamma1 = gamma1;
  cert.gamma2 = gamma2;
  cert.method = CertMethod::kBisection;
  cert.distribution = SmoothingDistribution::Rayleigh();
  cert.confidence = bounds.confidence;
  return cert;
}

Abstain CrossedBounds(const ProbBounds& bounds) {
  return {"pa_lower " + std::to_string(bounds.pa_lower) +
          " does not exceed pb_upper " + std::to_string(bounds.pb_upper)};
}

double LogBinomialTerm(std::uint64_t n, std::uint64_t j, double log_p,
                       double log_q) {
  const auto log_gamma = [](double x) {
#if defined(__GLIBC__)
    int sign;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
  };
  const double nd = static_cast<double>(n);
  const double jd = static_cast<double>(j);
  double value = log_gamma(nd + 1.0) - log_gamma(jd + 1.0) -
                 log_gamma(nd - jd + 1.0);
  // Guard 0 * -inf at the edges of the support.
  if (j > 0) value += jd * log_p;
  if (j < n) value += (nd - jd) * log_q;
  return value;
}

// Sums binomial pmf terms for j = first, first + step, ... while inside
// [0, n]. Terms are unimodal, so the loop stops once it is past the mode and
// the terms have become negligible.
double SumBinomialTerms(std::uint64_t n, std::uint64_t first, int step,
                        double p) {
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double mode = std::floor((static_cast<double>(n) + 1.0) * p);
  double max_log = -std::numeric_limits<double>::infinity();
  double sum = 0.0;  // scaled by exp(-max_log)
  for (std::int64_t j = static_cast<std::int64_t>(first);
       j >= 0 && j <= static_cast<std::int64_t>(n); j += step) {
    const double log_term =
        LogBinomialTerm(n, static_cast<std::uint64_t>(j), log_p, log_q);
    if (log_term > max_log) {
      sum = sum * std::exp(max_log - log_term) + 1.0;
      max_log = log_term;
    } else {
      sum += std::exp(log_term - max_log);
    }
    const bool past_mode = step > 0 ? static_cast<double>(j) > mode
                                    : static_cast<double>(j) < mode;
    if (past_mode && log_term < max_log - 45.0) break;
  }
  if (sum == 0.0) return 0.0;
  return std::min(1.0, sum * std::exp(max_log));
}

}  // namespace

std::string_view MethodName(CertMethod method) {
  switch (method) {
    case CertMethod::kBisection:
      return "bisection";
    case CertMethod::kClosedForm:
      return "closed-form";
    case CertMethod::kReciprocal:
      return "reciprocal";
    case CertMethod::kLogSpace:
      return "log-space";
  }
  return "unknown";
}

double ReducedCdfMap(double gamma, double q) {
  Require(std::isfinite(gamma) && gamma > 0.0, "gamma must be positive");
  Require(q >= 0.0 && q < 1.0, "q must lie in [0, 1)");
  return -std::expm1(std::log1p(-q) / (gamma * gamma));
}

CertOutcome CertifyRayleigh(const ProbBounds& bounds) {
  ValidateBounds(bounds);
  if (bounds.pa_lower <= bounds.pb_upper) return CrossedBounds(bounds);
  return SolveEndpoints(ReducedCdfMap, bounds);
}

CertOutcome CertifyRayleighExplicit(const ProbBounds& bounds,
                                    const RayleighParams& params) {
  ValidateBounds(bounds);
  const RayleighParams checked = RayleighParams::WithSigma(params.sigma);
  if (bounds.pa_lower <= bounds.pb_upper) return CrossedBounds(bounds);
  const auto map = [&checked](double gamma, double q) {
    return RayleighCdf(checked, RayleighQuantile(checked, q) / gamma);
  };
  Certificate cert = SolveEndpoints(map, bounds);
  cert.distribution = SmoothingDistribution::Rayleigh(checked.sigma);
  return cert;
}

CertOutcome CertifyRayleighClosedForm(double pa_lower, double confidence) {
  Require(std::isfinite(pa_lower) && pa_lower < 1.0,
          "pa_lower must be below 1");
  if (pa_lower <= 0.5) {
    return Abstain{"pa_lower " + std::to_string(pa_lower) +
                   " does not exceed 1/2"};
  }
  const double log_half = -std::numbers::ln2;
  Certificate cert;
  cert.gamma1 = std::sqrt(std::log(pa_lower) / log_half);
  cert.gamma2 = std::sqrt(std::log1p(-pa_lower) / log_half);
  cert.method = CertMethod::kClosedForm;
  cert.distribution = SmoothingDistribution::Rayleigh();
  cert.confidence = confidence;
  return cert;
}

CertOutcome CertifyInverseRayleigh(const ProbBounds& bounds) {
  CertOutcome base = CertifyRayleigh(bounds);
  if (IsAbstain(base)) return base;
  const auto& forward = std::get<Certificate>(base);
  Certificate cert;
  cert.gamma1 = 1.0 / forward.gamma2;
  cert.gamma2 = 1.0 / forward.gamma1;
  cert.method = CertMethod::kReciprocal;
  cert.distribution = SmoothingDistribution::InverseRayleigh();
  cert.confidence = forward.confidence;
  return cert;
}

double BinomialUpperTail(std::uint64_t n, std::uint64_t k, double p) {
  Require(p >= 0.0 && p <= 1.0, "binomial p must lie in [0, 1]");
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return SumBinomialTerms(n, k, +1, p);
}

double BinomialLowerTail(std::uint64_t n, std::uint64_t k, double p) {
  Require(p >= 0.0 && p <= 1.0, "binomial p must lie in [0, 1]");
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  return SumBinomialTerms(n, k, -1, p);
}

double ClopperPearson(const SampleCounts& counts, double alpha,
                      BoundSide side) {
  Require(counts.trials >= 1, "Clopper-Pearson needs at least one trial");
  Require(counts.successes <= counts.trials,
          "successes cannot exceed trials");
  Require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  const std::uint64_t n = counts.trials;
  const std::uint64_t k = counts.successes;

  if (side == BoundSide::kLower) {
    if (k == 0) return 0.0;
    // Largest p with P(X >= k; p) <= alpha; the tail increases with p.
    const auto bracket = internal::Bisect(
        [&](double p) { return BinomialUpperTail(n, k, p) <= alpha; }, 0.0, 1.0,
        1e-12, kMaxIterations);
    return bracket.lo;
  }
  if (k == n) return 1.0;
  // Smallest p with P(X <= k; p) <= alpha; the tail decreases with p.
  const auto bracket = internal::Bisect(
      [&](double p) { return BinomialLowerTail(n, k, p) > alpha; }, 0.0, 1.0,
      1e-12, kMaxIterations);
  return bracket.hi;
}

CertOutcome CertifyFromCounts(const SampleCounts& top_class, double alpha,
                              bool use_trivial_pb,
                              const std::optional<SampleCounts>& runner_up,
                              const SmoothingDistribution& dist) {
  Require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  ProbBounds bounds;
  bounds.confidence = 1.0 - alpha;
  if (use_trivial_pb) {
    bounds.pa_lower = ClopperPearson(top_class, alpha, BoundSide::kLower);
    bounds.pb_upper = 1.0 - bounds.pa_lower;
  } else {
    Require(runner_up.has_value(),
            "runner-up counts are required without the trivial bound");
    bounds.pa_lower = ClopperPearson(top_class, alpha / 2, BoundSide::kLower);
    bounds.pb_upper = ClopperPearson(*runner_up, alpha / 2, BoundSide::kUpper);
  }
  if (bounds.pa_lower <= 0.5) {
    return Abstain{"pa_lower " + std::to_string(bounds.pa_lower) +
                   " does not exceed 1/2"};
  }
  if (bounds.pa_lower <= bounds.pb_upper) return CrossedBounds(bounds);

  switch (dist.kind()) {
    case DistributionKind::kRayleigh: {
      CertOutcome out =
          use_trivial_pb
              ? CertifyRayleighClosedForm(bounds.pa_lower, bounds.confidence)
              : CertifyRayleigh(bounds);
      if (auto* cert = std::get_if<Certificate>(&out)) cert->distribution = dist;
      return out;
    }
    case DistributionKind::kInverseRayleigh: {
      CertOutcome out = CertifyInverseRayleigh(bounds);
      if (auto* cert = std::get_if<Certificate>(&out)) cert->distribution = dist;
      return out;
    }
    default: {
      CertOutcome out = LogSpaceRadius(dist.kind(), dist.scale(),
                                       bounds.pa_lower, bounds.pb_upper,
                                       dist.log_base());
      if (auto* cert = std::get_if<Certificate>(&out)) {
        cert->confidence = bounds.confidence;
      }
      return out;
    }
  }
}

std::optional<double> LogSpaceAdditiveRadius(DistributionKind kind,
                                             double scale, double pa_lower,
                                             double pb_upper) {
  Require(IsLogSpace(kind), "log-space radius needs a log-space distribution");
  Require(std::isfinite(scale) && scale > 0.0, "scale must be positive");
  Require(pa_lower > 0.0 && pa_lower < 1.0,
          "pa_lower must lie in the open interval (0, 1)");
  Require(pb_upper >= 0.0 && pb_upper < 1.0, "pb_upper must lie in [0, 1)");
  if (pa_lower <= pb_upper) return std::nullopt;
  switch (kind) {
    case DistributionKind::kLogGaussian:
      return 0.5 * scale *
             (NormalQuantile(pa_lower) - NormalQuantile(pb_upper));
    case DistributionKind::kLogLaplace:
      if (pa_lower < 0.5) return std::nullopt;
      return -scale * std::log(2.0 * (1.0 - pa_lower));
    case DistributionKind::kLogUniform:
      return scale * (pa_lower - pb_upper);
    default:
      return std::nullopt;
  }
}

CertOutcome LogSpaceRadius(DistributionKind kind, double scale,
                           double pa_lower, double pb_upper, double log_base) {
  const SmoothingDistribution dist(kind, scale, log_base);
  const auto radius = LogSpaceAdditiveRadius(kind, scale, pa_lower, pb_upper);
  if (!radius) {
    return Abstain{"bounds do not certify under " + dist.Describe()};
  }
  // For a base below 1 the exponent map is decreasing; the interval is the
  // same set of factors.
  const double a = std::pow(log_base, -*radius);
  const double b = std::pow(log_base, *radius);
  Certificate cert;
  cert.gamma1 = std::min(a, b);
  cert.gamma2 = std::max(a, b);
  cert.method = CertMethod::kLogSpace;
  cert.distribution = dist;
  cert.confidence = 1.0;
  return cert;
}

RayleighParams RayleighScaleFor(ScaleTarget target) {
  switch (target) {
    case ScaleTarget::kUnitMedian:
      return RayleighParams::UnitMedian();
    case ScaleTarget::kUnitMean:
      return RayleighParams::UnitMean();
  }
  return RayleighParams::UnitMedian();
}

}  // namespace smoothcert
