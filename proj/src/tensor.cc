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

#include "smoothcert/tensor.h"

#include <cmath>
#include <string>

#include "smoothcert/errors.h"

namespace smoothcert {

ImageTensor::ImageTensor(std::vector<std::size_t> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  Require(!dims_.empty(), "tensor needs at least one dimension");
  std::size_t expected = 1;
  for (std::size_t d : dims_) {
    Require(d > 0, "tensor dimensions must be positive");
    expected *= d;
  }
  Require(expected == data_.size(),
          "tensor length " + std::to_string(data_.size()) +
              " does not match the product of dims " + std::to_string(expected));
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double v = data_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("tensor entry " + std::to_string(i) + " = " +
                        std::to_string(v) + " lies outside [0, 1]");
    }
  }
}

ImageTensor ImageTensor::FromValues(std::vector<double> values) {
  const std::size_t n = values.size();
  return ImageTensor({n}, std::move(values));
}

GammaFactor::GammaFactor(double value) : value_(value) {
  Require(std::isfinite(value) && value > 0.0,
          "gamma factor must be positive and finite");
}

}  // namespace smoothcert
