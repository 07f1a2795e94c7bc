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

#include "smoothcert/cli.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoothcert/cert_engine.h"
#include "smoothcert/classifiers.h"
#include "smoothcert/errors.h"
#include "smoothcert/realistic_pipeline.h"
#include "smoothcert/smoothing_runtime.h"
#include "smoothcert/tensor_io.h"
#include "smoothcert/transforms.h"
#include "smoothcert/version.h"

namespace smoothcert::cli {
namespace {

// Insertion-ordered keys keep the serialized reports stable.
using Json = nlohmann::ordered_json;

// Standard deviation of ln(beta) for beta ~ Rayleigh, whatever sigma: the
// log-space baselines are compared at this matched spread.
constexpr double kMatchedLogScale = 0.641274915080932;

// Table rows (pa_lower, pb_upper).
constexpr std::pair<double, double> kTableRows[] = {
    {0.600, 0.400}, {0.600, 0.200}, {0.700, 0.300}, {0.700, 0.100},
    {0.800, 0.200}, {0.900, 0.100}, {0.990, 0.010}, {0.999, 0.001},
};

// What a subcommand produced.
struct Outcome {
  Json config = Json::object();
  Json result = Json::object();
  bool abstained = false;
  // Written verbatim instead of a JSON report when set.
  std::optional<std::string> text;
};

std::string Format(const char* fmt, double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), fmt, v);
  return buffer;
}

std::string Fixed(double v, int digits) {
  const std::string fmt = "%." + std::to_string(digits) + "f";
  return Format(fmt.c_str(), v);
}

// Shortest representation that reads back as the same double.
std::string Full(double v) {
  for (int digits = 15; digits < 17; ++digits) {
    const std::string fmt = "%." + std::to_string(digits) + "g";
    const std::string text = Format(fmt.c_str(), v);
    if (std::isinf(v) || std::strtod(text.c_str(), nullptr) == v) return text;
  }
  return Format("%.17g", v);
}

// Non-finite values have no JSON spelling; they become null.
Json Number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json CertificateJson(const Certificate& cert) {
  Json out;
  out["gamma1"] = Number(cert.gamma1);
  out["gamma2"] = Number(cert.gamma2);
  out["upper_unbounded"] = cert.upper_unbounded();
  out["method"] = std::string(MethodName(cert.method));
  out["distribution"] = cert.distribution.Describe();
  out["confidence"] = cert.confidence;
  return out;
}

Json VotesJson(const kernels::VoteCounts& votes) {
  Json out = Json::array();
  for (std::uint64_t v : votes) out.push_back(v);
  return out;
}

double DefaultScale(DistributionKind kind) {
  return IsLogSpace(kind) ? kMatchedLogScale : kUnitMedianSigma;
}

SmoothingDistribution MakeDistribution(const std::string& name,
                                       std::optional<double> scale,
                                       double log_base) {
  const DistributionKind kind = ParseKind(name);
  return SmoothingDistribution(kind, scale.value_or(DefaultScale(kind)),
                               log_base);
}

std::uint64_t ParseSeed(const std::string& text, const std::string& origin) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    if (text.empty() || text.front() == '-') throw std::invalid_argument(text);
    value = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError(origin + " must be an unsigned 64-bit integer, got \"" +
                      text + "\"");
  }
  return value;
}

std::uint64_t DefaultSeed() {
  const char* env = std::getenv(kSeedEnv);
  return env == nullptr ? 0 : ParseSeed(env, kSeedEnv);
}

// ---- table ---------------------------------------------------------------

struct TableOptions {
  bool json = false;
};

Outcome RunTable(const TableOptions& options) {
  Outcome outcome;
  outcome.config["format"] = options.json ? "json" : "csv";
  std::ostringstream csv;
  csv << "pa,pb,gamma1,gamma2,gamma1_full,gamma2_full\n";
  Json rows = Json::array();
  for (const auto& [pa, pb] : kTableRows) {
    const CertOutcome cert = CertifyRayleigh({pa, pb, 1.0});
    const auto& c = std::get<Certificate>(cert);
    csv << Fixed(pa, 3) << ',' << Fixed(pb, 3) << ',' << Fixed(c.gamma1, 2)
        << ',' << Fixed(c.gamma2, 2) << ',' << Full(c.gamma1) << ','
        << Full(c.gamma2) << '\n';
    Json row;
    row["pa"] = pa;
    row["pb"] = pb;
    row["gamma1"] = Number(c.gamma1);
    row["gamma2"] = Number(c.gamma2);
    rows.push_back(row);
  }
  outcome.result["rows"] = rows;
  if (!options.json) outcome.text = csv.str();
  return outcome;
}

// ---- cert ----------------------------------------------------------------

struct CertOptions {
  double pa = 0.0;
  std::optional<double> pb;
  bool trivial_pb = false;
  std::string dist = "rayleigh";
  std::optional<double> scale;
  double log_base = std::numbers::e;
  bool json = false;
};

Outcome RunCert(const CertOptions& options) {
  if (options.pb.has_value() == options.trivial_pb) {
    throw ConfigError("pass exactly one of --pb and --trivial-pb");
  }
  Require(options.pa > 0.0 && options.pa < 1.0, "--pa must lie in (0, 1)");
  const double pb = options.trivial_pb ? 1.0 - options.pa : *options.pb;
  Require(pb > 0.0 && pb < 1.0, "--pb must lie in (0, 1)");
  if (!options.trivial_pb && pb >= options.pa) {
    throw ConfigError("--pb must be smaller than --pa");
  }
  const SmoothingDistribution dist =
      MakeDistribution(options.dist, options.scale, options.log_base);

  Outcome outcome;
  outcome.config["pa"] = options.pa;
  outcome.config["pb"] = pb;
  outcome.config["trivial_pb"] = options.trivial_pb;
  outcome.config["dist"] = std::string(KindName(dist.kind()));
  outcome.config["scale"] = dist.scale();
  outcome.config["log_base"] = dist.log_base();

  const ProbBounds bounds{options.pa, pb, 1.0};
  CertOutcome cert;
  switch (dist.kind()) {
    case DistributionKind::kRayleigh:
      cert = options.trivial_pb ? CertifyRayleighClosedForm(options.pa)
                                : CertifyRayleigh(bounds);
      break;
    case DistributionKind::kInverseRayleigh:
      cert = CertifyInverseRayleigh(bounds);
      break;
    default:
      cert = LogSpaceRadius(dist.kind(), dist.scale(), options.pa, pb,
                            dist.log_base());
      break;
  }
  if (auto* c = std::get_if<Certificate>(&cert)) c->distribution = dist;

  std::ostringstream text;
  if (const auto* abstain = std::get_if<Abstain>(&cert)) {
    outcome.abstained = true;
    outcome.result["abstain"] = true;
    outcome.result["reason"] = abstain->reason;
    outcome.result["certificate"] = nullptr;
    text << "abstain: " << abstain->reason << '\n';
  } else {
    const auto& c = std::get<Certificate>(cert);
    outcome.result["abstain"] = false;
    outcome.result["reason"] = nullptr;
    outcome.result["certificate"] = CertificateJson(c);
    text << "gamma1: " << Fixed(c.gamma1, 6) << '\n'
         << "gamma2: " << Fixed(c.gamma2, 6) << '\n'
         << "method: " << MethodName(c.method) << '\n'
         << "distribution: " << c.distribution.Describe() << '\n'
         << "confidence: " << Full(c.confidence) << '\n';
  }
  if (!options.json) outcome.text = text.str();
  return outcome;
}

// ---- smooth --------------------------------------------------------------

struct SmoothOptions {
  std::string input;
  std::string classifier;
  std::uint64_t n = 100000;
  std::uint64_t n0 = 100;
  double alpha = 0.001;
  std::uint64_t seed = 0;
  std::string dist = "rayleigh";
  std::optional<double> scale;
  double log_base = std::numbers::e;
  bool runner_up = false;
  double attack_gamma = 1.0;
  bool sweep = false;
  double step = 0.01;
  double gamma_max = 3.0;
  std::optional<std::uint64_t> sweep_n;
};

Outcome RunSmooth(const SmoothOptions& options) {
  const ImageTensor raw = ReadTensor(options.input);
  const auto classifier = LoadClassifier(options.classifier);
  const ImageTensor x = GammaCorrect(raw, GammaFactor(options.attack_gamma));

  SmoothingConfig config;
  config.n0 = options.n0;
  config.n = options.n;
  config.alpha = options.alpha;
  config.seed = options.seed;
  config.dist = MakeDistribution(options.dist, options.scale, options.log_base);
  config.trivial_pb = !options.runner_up;
  config.Validate();

  Outcome outcome;
  outcome.config["input"] = options.input;
  outcome.config["classifier"] = options.classifier;
  outcome.config["n"] = config.n;
  outcome.config["n0"] = config.n0;
  outcome.config["alpha"] = config.alpha;
  outcome.config["dist"] = std::string(KindName(config.dist.kind()));
  outcome.config["scale"] = config.dist.scale();
  outcome.config["log_base"] = config.dist.log_base();
  outcome.config["trivial_pb"] = config.trivial_pb;
  outcome.config["attack_gamma"] = options.attack_gamma;
  outcome.config["sweep"] = options.sweep;
  if (options.sweep) {
    outcome.config["step"] = options.step;
    outcome.config["gamma_max"] = options.gamma_max;
    outcome.config["sweep_n"] = options.sweep_n.value_or(config.n);
  }

  const PredictionResult prediction =
      SmoothedPredictCertify(*classifier, x, config);
  Json& r = outcome.result;
  r["classifier"] = classifier->Describe();
  r["label"] = prediction.label ? Json(*prediction.label) : Json(nullptr);
  r["abstain"] = prediction.abstained();
  r["reason"] = prediction.abstained() ? Json(prediction.abstain_reason)
                                       : Json(nullptr);
  r["selected_label"] = prediction.selected_label;
  r["pa_lower"] = prediction.pa_lower;
  r["counts"] = {{"successes", prediction.counts.successes},
                 {"trials", prediction.counts.trials}};
  r["selection_votes"] = VotesJson(prediction.selection_votes);
  r["estimation_votes"] = VotesJson(prediction.estimation_votes);
  r["certificate"] = prediction.certificate
                         ? CertificateJson(*prediction.certificate)
                         : Json(nullptr);
  if (options.sweep) {
    SweepConfig sweep;
    sweep.step = options.step;
    sweep.gamma_max = options.gamma_max;
    sweep.n = options.sweep_n.value_or(config.n);
    sweep.dist = config.dist;
    sweep.seed = config.seed;
    const SweepResult s =
        EmpiricalSweep(*classifier, x, prediction.selected_label, sweep);
    r["sweep"] = {{"expected_label", prediction.selected_label},
                  {"empty", s.empty},
                  {"left", s.empty ? Json(nullptr) : Json(s.left)},
                  {"right", s.empty ? Json(nullptr) : Json(s.right)}};
  }
  outcome.abstained = prediction.abstained();
  return outcome;
}

// ---- realistic -----------------------------------------------------------

struct RealisticOptions {
  std::string budget;
  std::string config;
  std::string input;
  std::string classifier;
};

Outcome RunRealistic(const RealisticOptions& options) {
  const ErrorBudget budget = LoadErrorBudget(options.budget);
  const RealisticConfig config = LoadRealisticConfig(options.config);
  const ImageTensor x = ReadTensor(options.input);
  const auto classifier = LoadClassifier(options.classifier);

  Outcome outcome;
  outcome.config["budget"] = Json::parse(SerializeErrorBudget(budget));
  outcome.config["config"] = Json::parse(SerializeRealisticConfig(config));
  outcome.config["input"] = options.input;
  outcome.config["classifier"] = options.classifier;

  const RealisticResult res = CertifyRealistic(*classifier, x, config, budget);
  Json& r = outcome.result;
  r["classifier"] = classifier->Describe();
  r["label"] = res.label ? Json(*res.label) : Json(nullptr);
  r["abstain"] = res.abstained();
  r["reason"] = res.abstained() ? Json(res.abstain_reason) : Json(nullptr);
  r["candidate"] = res.candidate;
  r["counts"] = {{"successes", res.counts.successes},
                 {"trials", res.counts.trials}};
  r["pa_lower"] = res.pa_lower;
  r["rho"] = res.rho;
  r["required_rho"] = ErrorBudgetRho(config.alpha, budget.q_E, budget.alpha_E);
  r["adjusted"] = res.adjusted ? Json{{"pa_lower", res.adjusted->pa_lower},
                                      {"pb_upper", res.adjusted->pb_upper}}
                               : Json(nullptr);
  r["unclipped"] = res.unclipped ? CertificateJson(*res.unclipped) : Json(nullptr);
  r["certificate"] =
      res.certificate ? CertificateJson(*res.certificate) : Json(nullptr);
  outcome.abstained = res.abstained();
  return outcome;
}

// ---- estimate-error ------------------------------------------------------

struct EstimateOptions {
  std::string dataset;
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  double q_E = 0.9;
  double alpha_E = 0.01;
  std::size_t grid = 64;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

Outcome RunEstimate(const EstimateOptions& options) {
  Require(options.gamma_min < options.gamma_max,
          "--gamma-min must be smaller than --gamma-max");
  const std::vector<ImageTensor> dataset = ReadTensorDirectory(options.dataset);
  if (dataset.empty()) {
    throw ConfigError("no .mst1 files in " + options.dataset);
  }
  ConversionErrorRequest request;
  request.gamma_interval = {options.gamma_min, options.gamma_max};
  request.q_E = options.q_E;
  request.alpha_E = options.alpha_E;
  request.samples = options.samples;
  request.grid_points = options.grid;
  request.seed = options.seed;

  Outcome outcome;
  outcome.config["dataset"] = options.dataset;
  outcome.config["gamma_interval"] = {options.gamma_min, options.gamma_max};
  outcome.config["q_E"] = options.q_E;
  outcome.config["alpha_E"] = options.alpha_E;
  outcome.config["grid_points"] = options.grid;
  outcome.config["samples"] = options.samples;

  const ConversionErrorEstimate estimate =
      EstimateConversionError(dataset, request);
  Json& r = outcome.result;
  r["E"] = estimate.E;
  r["dataset_size"] = dataset.size();
  r["samples"] = estimate.samples;
  r["order_index"] = estimate.order_index;
  r["grid_points"] = estimate.grid.size();
  r["approximation"] =
      "E maximizes the conversion error over a finite grid of the interval; "
      "the supremum over the interval is approximated";
  return outcome;
}

// ---- compare -------------------------------------------------------------

struct CompareOptions {
  std::vector<std::string> dists = {"rayleigh", "inv-rayleigh", "log-gaussian",
                                    "log-laplace", "log-uniform"};
  std::string pa_grid = "0.55:0.99:0.01";
  std::optional<double> scale;
  double log_base = std::numbers::e;
  bool json = false;
};

std::vector<double> ParseGrid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw ConfigError("--pa-grid must be start:stop:step, got \"" + spec + "\"");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) {
    throw ConfigError("--pa-grid must be start:stop:step, got \"" + spec + "\"");
  }
  const double start = parts[0], stop = parts[1], step = parts[2];
  Require(step > 0.0 && start <= stop, "--pa-grid needs step > 0, start <= stop");
  Require(start > 0.0 && stop < 1.0, "--pa-grid values must lie in (0, 1)");
  const auto count =
      static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  Require(count <= 100000, "--pa-grid has too many points");
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    // Snapped to 1e-12 so that e.g. 0.55 + 35 * 0.01 prints as 0.9.
    grid[k] = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
  }
  return grid;
}

CertOutcome CompareCertificate(const SmoothingDistribution& dist, double pa,
                               double pb) {
  switch (dist.kind()) {
    case DistributionKind::kRayleigh:
      return CertifyRayleighClosedForm(pa);
    case DistributionKind::kInverseRayleigh:
      return CertifyInverseRayleigh(ProbBounds::Trivial(pa));
    default:
      return LogSpaceRadius(dist.kind(), dist.scale(), pa, pb, dist.log_base());
  }
}

Outcome RunCompare(const CompareOptions& options) {
  const std::vector<double> grid = ParseGrid(options.pa_grid);
  std::vector<SmoothingDistribution> dists;
  for (const auto& name : options.dists) {
    dists.push_back(MakeDistribution(name, options.scale, options.log_base));
  }
  Outcome outcome;
  outcome.config["dists"] = options.dists;
  outcome.config["pa_grid"] = options.pa_grid;
  outcome.config["trivial_pb"] = true;
  Json scales = Json::object();
  for (const auto& d : dists) scales[std::string(KindName(d.kind()))] = d.scale();
  outcome.config["scales"] = scales;
  outcome.config["log_base"] = options.log_base;

  std::ostringstream csv;
  csv << "pa,pb,dist,scale,gamma1,gamma2,abstain\n";
  Json rows = Json::array();
  for (double pa : grid) {
    const double pb = std::round((1.0 - pa) * 1e12) / 1e12;
    for (const auto& dist : dists) {
      const CertOutcome cert = CompareCertificate(dist, pa, pb);
      const auto* c = std::get_if<Certificate>(&cert);
      const std::string name(KindName(dist.kind()));
      csv << Full(pa) << ',' << Full(pb) << ',' << name << ','
          << Full(dist.scale()) << ',' << (c ? Full(c->gamma1) : "") << ','
          << (c ? Full(c->gamma2) : "") << ',' << (c ? 0 : 1) << '\n';
      rows.push_back({{"pa", pa},
                      {"pb", pb},
                      {"dist", name},
                      {"scale", dist.scale()},
                      {"gamma1", c ? Number(c->gamma1) : Json(nullptr)},
                      {"gamma2", c ? Number(c->gamma2) : Json(nullptr)},
                      {"abstain", c == nullptr}});
    }
  }
  outcome.result["rows"] = rows;
  if (!options.json) outcome.text = csv.str();
  return outcome;
}

// ---- driver --------------------------------------------------------------

void AddSeed(CLI::App* cmd, std::uint64_t* seed) {
  cmd->add_option("--seed", *seed,
                  std::string("RNG seed (default: $") + kSeedEnv + " or 0)");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  std::uint64_t default_seed = 0;
  try {
    default_seed = DefaultSeed();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  CLI::App app{"Certified robustness of smoothed classifiers against gamma "
               "correction",
               "smoothcert"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string command;
  std::uint64_t seed = default_seed;
  std::function<Outcome()> run;

  TableOptions table;
  auto* table_cmd = app.add_subcommand("table", "Certificates for the reference (pa, pb) grid (CSV)");
  table_cmd->add_flag("--json", table.json, "Emit a JSON report instead of CSV");
  table_cmd->callback([&] { run = [&] { return RunTable(table); }; });

  CertOptions cert;
  auto* cert_cmd = app.add_subcommand("cert", "Certify from probability bounds");
  cert_cmd->add_option("--pa", cert.pa, "Lower bound on the top-class probability")
      ->required();
  cert_cmd->add_option("--pb", cert.pb, "Upper bound on the runner-up probability");
  cert_cmd->add_flag("--trivial-pb", cert.trivial_pb, "Use pb = 1 - pa");
  cert_cmd->add_option("--dist", cert.dist, "Smoothing distribution")
      ->check(CLI::IsMember({"rayleigh", "inv-rayleigh", "log-gaussian",
                             "log-laplace", "log-uniform"}));
  cert_cmd->add_option("--scale", cert.scale,
                       "Distribution scale (default: unit-median sigma for "
                       "Rayleigh kinds, pi/sqrt(24) for log-space kinds)");
  cert_cmd->add_option("--log-base", cert.log_base, "Base of the log-space kinds");
  cert_cmd->add_flag("--json", cert.json, "Emit a JSON report");
  cert_cmd->callback([&] { run = [&] { return RunCert(cert); }; });

  SmoothOptions smooth;
  auto* smooth_cmd = app.add_subcommand("smooth", "Predict and certify one input");
  smooth_cmd->add_option("--input", smooth.input, "MST1 input tensor")->required();
  smooth_cmd->add_option("--classifier", smooth.classifier, "Classifier manifest")
      ->required();
  smooth_cmd->add_option("--n", smooth.n, "Estimation samples")
      ->check(CLI::PositiveNumber);
  smooth_cmd->add_option("--n0", smooth.n0, "Selection samples")
      ->check(CLI::PositiveNumber);
  smooth_cmd->add_option("--alpha", smooth.alpha, "Mistake probability")
      ->check(CLI::Range(0.0, 1.0));
  AddSeed(smooth_cmd, &seed);
  smooth_cmd->add_option("--dist", smooth.dist, "Smoothing distribution")
      ->check(CLI::IsMember({"rayleigh", "inv-rayleigh", "log-gaussian",
                             "log-laplace", "log-uniform"}));
  smooth_cmd->add_option("--scale", smooth.scale, "Distribution scale");
  smooth_cmd->add_option("--log-base", smooth.log_base, "Base of the log-space kinds");
  smooth_cmd->add_flag("--runner-up", smooth.runner_up,
                       "Bound the runner-up from its counts (alpha split evenly)");
  smooth_cmd->add_option("--attack-gamma", smooth.attack_gamma,
                         "Gamma correction applied to the input first");
  smooth_cmd->add_flag("--sweep", smooth.sweep, "Also run the empirical sweep");
  smooth_cmd->add_option("--step", smooth.step, "Sweep step")
      ->check(CLI::PositiveNumber);
  smooth_cmd->add_option("--gamma-max", smooth.gamma_max, "Sweep upper limit");
  smooth_cmd->add_option("--sweep-n", smooth.sweep_n, "Votes per sweep point (default: --n)")
      ->check(CLI::PositiveNumber);
  smooth_cmd->callback([&] {
    run = [&] {
      smooth.seed = seed;
      return RunSmooth(smooth);
    };
  });

  RealisticOptions realistic;
  auto* realistic_cmd =
      app.add_subcommand("realistic", "Certify under 8-bit storage (double smoothing)");
  realistic_cmd->add_option("--budget", realistic.budget, "ErrorBudget JSON")->required();
  realistic_cmd->add_option("--config", realistic.config, "RealisticConfig JSON")->required();
  realistic_cmd->add_option("--input", realistic.input, "MST1 input tensor")->required();
  realistic_cmd->add_option("--classifier", realistic.classifier, "Classifier manifest")
      ->required();
  realistic_cmd->callback([&] { run = [&] { return RunRealistic(realistic); }; });

  EstimateOptions estimate;
  auto* estimate_cmd = app.add_subcommand(
      "estimate-error", "Upper confidence bound E on the conversion error");
  estimate_cmd->add_option("--dataset", estimate.dataset, "Directory of .mst1 files")
      ->required();
  estimate_cmd->add_option("--gamma-min", estimate.gamma_min, "Attack interval start")
      ->required();
  estimate_cmd->add_option("--gamma-max", estimate.gamma_max, "Attack interval end")
      ->required();
  estimate_cmd->add_option("--qe", estimate.q_E, "Guarantee rate q_E");
  estimate_cmd->add_option("--alphae", estimate.alpha_E, "Estimation confidence alpha_E");
  estimate_cmd->add_option("--grid", estimate.grid, "Attack grid points")
      ->check(CLI::Range(2, 1 << 20));
  estimate_cmd->add_option("--samples", estimate.samples,
                           "(x, beta) pairs (default: one per tensor)");
  AddSeed(estimate_cmd, &seed);
  estimate_cmd->callback([&] {
    run = [&] {
      estimate.seed = seed;
      return RunEstimate(estimate);
    };
  });

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand(
      "compare", "Certified intervals of several distributions over a pa grid");
  compare_cmd->add_option("--dists", compare.dists, "Comma-separated distributions")
      ->delimiter(',')
      ->check(CLI::IsMember({"rayleigh", "inv-rayleigh", "log-gaussian",
                             "log-laplace", "log-uniform"}));
  compare_cmd->add_option("--pa-grid", compare.pa_grid, "start:stop:step");
  compare_cmd->add_option("--scale", compare.scale,
                          "Scale of every listed distribution (default: "
                          "unit-median sigma / pi/sqrt(24))");
  compare_cmd->add_option("--log-base", compare.log_base, "Base of the log-space kinds");
  compare_cmd->add_flag("--json", compare.json, "Emit a JSON report instead of CSV");
  compare_cmd->callback([&] { run = [&] { return RunCompare(compare); }; });

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("smoothcert");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = run();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;

  if (outcome.text) {
    out << *outcome.text;
  } else {
    Json report;
    report["manifest"] = {{"command", command},
                          {"config", outcome.config},
                          {"seed", seed},
                          {"version", kVersion},
                          {"duration_seconds", elapsed.count()}};
    report["result"] = outcome.result;
    out << report.dump(2) << '\n';
  }
  return outcome.abstained ? kExitAbstain : kExitOk;
}

}  // namespace smoothcert::cli
