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

#ifndef SMOOTHCERT_SRC_BISECTION_H_
#define SMOOTHCERT_SRC_BISECTION_H_

namespace smoothcert::internal {

struct Bracket {
  double lo;
  double hi;
};

// Narrows [lo, hi] around the sign change of `positive_below`, a predicate
// that is true on [lo, root) and false on (root, hi]. Stops when the width
// drops below `tolerance` or after `max_iterations` halvings.
template <typename Predicate>
Bracket Bisect(Predicate positive_below, double lo, double hi,
               double tolerance = 1e-12, int max_iterations = 200) {
  for (int i = 0; i < max_iterations && hi - lo > tolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (positive_below(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace smoothcert::internal

#endif  // SMOOTHCERT_SRC_BISECTION_H_
