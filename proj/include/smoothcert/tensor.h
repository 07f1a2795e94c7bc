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

#ifndef SMOOTHCERT_TENSOR_H_
#define SMOOTHCERT_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace smoothcert {

// A row-major tensor with every entry in [0, 1]: an image or signal. Values
// are immutable once constructed.
class ImageTensor {
 public:
  // Throws DomainError when dims are empty or zero, the length does not match
  // the product of dims, or an entry lies outside [0, 1] (NaN included).
  ImageTensor(std::vector<std::size_t> dims, std::vector<double> data);

  // A rank-1 tensor.
  static ImageTensor FromValues(std::vector<double> values);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::span<const double> data() const { return data_; }
  std::size_t size() const { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> data_;
};

// A multiplicative gamma factor; 1 is the identity.
class GammaFactor {
 public:
  // Throws DomainError unless value > 0 and finite.
  explicit GammaFactor(double value);
  double value() const { return value_; }

 private:
  double value_;
};

}  // namespace smoothcert

#endif  // SMOOTHCERT_TENSOR_H_
