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

#ifndef SMOOTHCERT_ERRORS_H_
#define SMOOTHCERT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace smoothcert {

// Raised when an argument lies outside the mathematical domain of an
// operation (negative CDF argument, probability outside (0, 1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised for malformed configuration documents (JSON manifests, budgets).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws DomainError with `message` unless `condition` holds.
inline void Require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace smoothcert

#endif  // SMOOTHCERT_ERRORS_H_
