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

#include "smoothcert/classifiers.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smoothcert/errors.h"
#include "smoothcert/tensor_io.h"

namespace smoothcert {
namespace {

constexpr std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void RequireClasses(int num_classes) {
  Require(num_classes >= 1, "a classifier needs at least one class");
}

template <typename T>
T Field(const nlohmann::json& doc, const char* key,
        const std::filesystem::path& manifest) {
  if (!doc.contains(key)) {
    throw ConfigError(manifest.string() + ": missing field \"" + key + "\"");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(manifest.string() + ": field \"" + key +
                      "\" has the wrong type");
  }
}

}  // namespace

ThresholdClassifier::ThresholdClassifier(double threshold,
                                         std::size_t pixel_index)
    : threshold_(threshold), pixel_index_(pixel_index) {
  Require(std::isfinite(threshold), "threshold must be finite");
}

int ThresholdClassifier::Classify(std::span<const double> input) const {
  Require(pixel_index_ < input.size(), "threshold pixel index out of range");
  return input[pixel_index_] >= threshold_ ? 0 : 1;
}

std::string ThresholdClassifier::Describe() const {
  std::ostringstream out;
  out << "threshold(t=" << threshold_ << ", pixel=" << pixel_index_ << ")";
  return out.str();
}

double ThresholdOracle::CriticalFactor() const {
  Require(pixel_value > 0.0 && pixel_value < 1.0,
          "oracle pixel value must lie in (0, 1)");
  Require(threshold > 0.0 && threshold < 1.0,
          "oracle threshold must lie in (0, 1)");
  return std::log(threshold) / std::log(pixel_value);
}

double ExactOracleProbability(const ThresholdOracle& oracle,
                              double attack_gamma,
                              const SmoothingDistribution& dist) {
  Require(std::isfinite(attack_gamma) && attack_gamma > 0.0,
          "attack gamma must be positive and finite");
  return dist.Cdf(oracle.CriticalFactor() / attack_gamma);
}

ConstantClassifier::ConstantClassifier(int label, int num_classes)
    : label_(label), num_classes_(num_classes) {
  RequireClasses(num_classes);
  Require(label >= 0 && label < num_classes, "constant label out of range");
}

std::string ConstantClassifier::Describe() const {
  return "constant(label=" + std::to_string(label_) +
         ", classes=" + std::to_string(num_classes_) + ")";
}

HashClassifier::HashClassifier(int num_classes, std::uint64_t salt)
    : num_classes_(num_classes), salt_(salt) {
  RequireClasses(num_classes);
}

int HashClassifier::Classify(std::span<const double> input) const {
  std::uint64_t h = Mix(salt_ ^ input.size());
  for (double v : input) h = Mix(h ^ std::bit_cast<std::uint64_t>(v));
  return static_cast<int>(h % static_cast<std::uint64_t>(num_classes_));
}

std::string HashClassifier::Describe() const {
  return "hash(classes=" + std::to_string(num_classes_) +
         ", salt=" + std::to_string(salt_) + ")";
}

LinearClassifier::LinearClassifier(std::vector<double> weights,
                                   std::vector<double> bias,
                                   std::size_t input_dim)
    : weights_(std::move(weights)), bias_(std::move(bias)),
      input_dim_(input_dim) {
  Require(!bias_.empty(), "a linear classifier needs at least one class");
  Require(input_dim_ > 0, "a linear classifier needs a positive input dim");
  Require(weights_.size() == bias_.size() * input_dim_,
          "linear weights must have classes x input_dim entries");
}

int LinearClassifier::Classify(std::span<const double> input) const {
  Require(input.size() == input_dim_,
          "linear classifier expects " + std::to_string(input_dim_) +
              " inputs, got " + std::to_string(input.size()));
  int best = 0;
  double best_score = 0.0;
  for (std::size_t c = 0; c < bias_.size(); ++c) {
    const double* row = weights_.data() + c * input_dim_;
    double score = bias_[c];
    for (std::size_t j = 0; j < input_dim_; ++j) score += row[j] * input[j];
    if (c == 0 || score > best_score) {
      best = static_cast<int>(c);
      best_score = score;
    }
  }
  return best;
}

std::string LinearClassifier::Describe() const {
  return "linear(classes=" + std::to_string(bias_.size()) +
         ", dim=" + std::to_string(input_dim_) + ")";
}

std::unique_ptr<BaseClassifier> LoadClassifier(
    const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw ConfigError("cannot open classifier manifest " + manifest.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError(manifest.string() + ": manifest must be a JSON object");
  }
  const std::string type =
      doc.contains("type") ? Field<std::string>(doc, "type", manifest) : "linear";
  try {
    if (type == "threshold") {
      const auto index = doc.contains("pixel_index")
                             ? Field<std::size_t>(doc, "pixel_index", manifest)
                             : std::size_t{0};
      return std::make_unique<ThresholdClassifier>(
          Field<double>(doc, "threshold", manifest), index);
    }
    if (type == "constant") {
      return std::make_unique<ConstantClassifier>(
          Field<int>(doc, "label", manifest), Field<int>(doc, "classes", manifest));
    }
    if (type == "hash") {
      const auto salt = doc.contains("salt")
                            ? Field<std::uint64_t>(doc, "salt", manifest)
                            : std::uint64_t{0};
      return std::make_unique<HashClassifier>(Field<int>(doc, "classes", manifest),
                                              salt);
    }
    if (type == "linear") {
      const auto dir = manifest.parent_path();
      const ImageTensor w =
          ReadTensor(dir / Field<std::string>(doc, "weights", manifest));
      const ImageTensor b =
          ReadTensor(dir / Field<std::string>(doc, "bias", manifest));
      const int classes = Field<int>(doc, "classes", manifest);
      if (w.dims().size() != 2 || b.dims().size() != 1 ||
          classes < 1 || w.dims()[0] != static_cast<std::size_t>(classes) ||
          b.dims()[0] != static_cast<std::size_t>(classes)) {
        throw ConfigError(manifest.string() +
                          ": linear weights must be [classes, dim] and bias "
                          "[classes]");
      }
      // MST1 stores [0, 1] only; signed parameters are stored affinely.
      const double offset =
          doc.contains("offset") ? Field<double>(doc, "offset", manifest) : 0.0;
      const double scale =
          doc.contains("scale") ? Field<double>(doc, "scale", manifest) : 1.0;
      const auto decode = [offset, scale](std::span<const double> stored) {
        std::vector<double> out(stored.size());
        for (std::size_t i = 0; i < stored.size(); ++i) {
          out[i] = offset + scale * stored[i];
        }
        return out;
      };
      return std::make_unique<LinearClassifier>(decode(w.data()), decode(b.data()),
                                                w.dims()[1]);
    }
  } catch (const DomainError& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  } catch (const TensorFormatError& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
  throw ConfigError(manifest.string() + ": unknown classifier type \"" + type +
                    "\"");
}

}  // namespace smoothcert
