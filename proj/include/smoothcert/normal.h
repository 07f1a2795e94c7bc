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

#ifndef SMOOTHCERT_NORMAL_H_
#define SMOOTHCERT_NORMAL_H_

namespace smoothcert {

// Standard normal CDF.
double NormalCdf(double x);

// Standard normal quantile, Wichura's AS241 (PPND16). Absolute error is below
// 1e-15 over (0, 1). Returns -inf / +inf at 0 / 1.
double NormalQuantile(double p);

}  // namespace smoothcert

#endif  // SMOOTHCERT_NORMAL_H_
