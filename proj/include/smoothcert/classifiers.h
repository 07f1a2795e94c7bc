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

#ifndef SMOOTHCERT_CLASSIFIERS_H_
#define SMOOTHCERT_CLASSIFIERS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smoothcert/distributions.h"
#include "smoothcert/tensor.h"

namespace smoothcert {

// The base classifier f being smoothed. Implementations must be
// deterministic and safe to call concurrently from several threads.
class BaseClassifier {
 public:
  virtual ~BaseClassifier() = default;

  // Label in [0, num_classes()) for a flat row-major input.
  virtual int Classify(std::span<const double> input) const = 0;
  virtual int num_classes() const = 0;
  virtual std::string Describe() const = 0;
};

// Class 0 iff input[pixel_index] >= threshold, else class 1.
class ThresholdClassifier : public BaseClassifier {
 public:
  ThresholdClassifier(double threshold, std::size_t pixel_index = 0);

  int Classify(std::span<const double> input) const override;
  int num_classes() const override { return 2; }
  std::string Describe() const override;

  double threshold() const { return threshold_; }

 private:
  double threshold_;
  std::size_t pixel_index_;
};

// A single pixel of value v fed to a ThresholdClassifier with threshold t.
// Under gamma correction v^(beta * attack) >= t iff
// beta <= ln t / ln v / attack, so the smoothed class-0 probability is the
// smoothing CDF at that point.
struct ThresholdOracle {
  double pixel_value;
  double threshold;

  ImageTensor Input() const { return ImageTensor::FromValues({pixel_value}); }
  ThresholdClassifier Classifier() const { return ThresholdClassifier(threshold); }
  // ln t / ln v.
  double CriticalFactor() const;
};

// Exact P_beta(v^(beta * attack_gamma) >= t) = dist.Cdf(beta* / attack_gamma).
// Throws DomainError unless v and t lie in (0, 1) and attack_gamma > 0.
double ExactOracleProbability(const ThresholdOracle& oracle,
                              double attack_gamma,
                              const SmoothingDistribution& dist);

class ConstantClassifier : public BaseClassifier {
 public:
  ConstantClassifier(int label, int num_classes);

  int Classify(std::span<const double>) const override { return label_; }
  int num_classes() const override { return num_classes_; }
  std::string Describe() const override;

 private:
  int label_;
  int num_classes_;
};

// Label from a hash of the input bits: any perturbation reshuffles the label,
// so the smoothed class probabilities are all close to 1 / num_classes.
class HashClassifier : public BaseClassifier {
 public:
  explicit HashClassifier(int num_classes = 10, std::uint64_t salt = 0);

  int Classify(std::span<const double> input) const override;
  int num_classes() const override { return num_classes_; }
  std::string Describe() const override;

 private:
  int num_classes_;
  std::uint64_t salt_;
};

// argmax_c (W x + b)_c, ties to the lowest class. W is classes x dim.
class LinearClassifier : public BaseClassifier {
 public:
  LinearClassifier(std::vector<double> weights, std::vector<double> bias,
                   std::size_t input_dim);

  int Classify(std::span<const double> input) const override;
  int num_classes() const override { return static_cast<int>(bias_.size()); }
  std::string Describe() const override;

 private:
  std::vector<double> weights_;
  std::vector<double> bias_;
  std::size_t input_dim_;
};

// Loads a classifier manifest (JSON). Paths inside are relative to the
// manifest's directory. Accepted documents:
//   {"weights": "w.mst1", "bias": "b.mst1", "classes": k}          linear
//       optional "offset" o and "scale" s: parameters are o + s * stored,
//       since MST1 entries are confined to [0, 1]
//   {"type": "threshold", "threshold": t, "pixel_index": i}
//   {"type": "constant", "label": c, "classes": k}
//   {"type": "hash", "classes": k, "salt": s}
// Throws ConfigError for malformed manifests.
std::unique_ptr<BaseClassifier> LoadClassifier(
    const std::filesystem::path& manifest);

}  // namespace smoothcert

#endif  // SMOOTHCERT_CLASSIFIERS_H_
