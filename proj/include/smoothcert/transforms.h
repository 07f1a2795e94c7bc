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

// Gamma correction and the 8-bit storage channel.
//
// Gamma correction G_g(x) = x^g composes multiplicatively:
// G_b(G_g(x)) = G_{b*g}(x). Storing the result with 8 bits per channel breaks
// that identity; the conversion error measures by how much.

#ifndef SMOOTHCERT_TRANSFORMS_H_
#define SMOOTHCERT_TRANSFORMS_H_

#include <vector>

#include "smoothcert/tensor.h"

namespace smoothcert {

// Entrywise x^gamma.
ImageTensor GammaCorrect(const ImageTensor& x, GammaFactor gamma);

// round(255 v) / 255 with halves rounded away from zero.
double Quantize8Value(double v);
ImageTensor Quantize8(const ImageTensor& x);

// Q(G_beta(Q(G_gamma(x)))) - G_{beta*gamma}(x), entrywise, where Q is
// Quantize8: the stored gamma-corrected image is corrected again and stored
// again, compared against the exact composite.
std::vector<double> ConversionErrorDiff(const ImageTensor& x, GammaFactor beta,
                                        GammaFactor gamma);

// l2 norm of ConversionErrorDiff.
double ConversionError(const ImageTensor& x, GammaFactor beta,
                       GammaFactor gamma);

// Scaling round trip S_r: bilinear resize of the last two dims by `ratio`,
// then back to the original size. Provided as a transform only; there is no
// certificate for it (the interpolation loss is not composable).
ImageTensor RescaleRoundTrip(const ImageTensor& x, double ratio);

}  // namespace smoothcert

#endif  // SMOOTHCERT_TRANSFORMS_H_
