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

#include "smoothcert/transforms.h"

#include <algorithm>
#include <cmath>

#include "smoothcert/errors.h"
#include "smoothcert/kernels.h"

namespace smoothcert {
namespace {

// Bilinear resize of each trailing [h, w] plane to [nh, nw], sampling at
// pixel centres with edge clamping.
std::vector<double> ResizePlanes(std::span<const double> in, std::size_t planes,
                                 std::size_t h, std::size_t w, std::size_t nh,
                                 std::size_t nw) {
  std::vector<double> out(planes * nh * nw);
  const double sy = static_cast<double>(h) / static_cast<double>(nh);
  const double sx = static_cast<double>(w) / static_cast<double>(nw);
  for (std::size_t p = 0; p < planes; ++p) {
    const double* src = in.data() + p * h * w;
    double* dst = out.data() + p * nh * nw;
    for (std::size_t y = 0; y < nh; ++y) {
      const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5,
                                   0.0, static_cast<double>(h - 1));
      const auto y0 = static_cast<std::size_t>(fy);
      const std::size_t y1 = std::min(y0 + 1, h - 1);
      const double ty = fy - static_cast<double>(y0);
      for (std::size_t x = 0; x < nw; ++x) {
        const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5,
                                     0.0, static_cast<double>(w - 1));
        const auto x0 = static_cast<std::size_t>(fx);
        const std::size_t x1 = std::min(x0 + 1, w - 1);
        const double tx = fx - static_cast<double>(x0);
        const double top = src[y0 * w + x0] * (1 - tx) + src[y0 * w + x1] * tx;
        const double bottom = src[y1 * w + x0] * (1 - tx) + src[y1 * w + x1] * tx;
        dst[y * nw + x] = std::clamp(top * (1 - ty) + bottom * ty, 0.0, 1.0);
      }
    }
  }
  return out;
}

}  // namespace

ImageTensor GammaCorrect(const ImageTensor& x, GammaFactor gamma) {
  std::vector<double> out(x.size());
  kernels::parallel::GammaCorrect(x.data(), gamma.value(), out);
  return ImageTensor(x.dims(), std::move(out));
}

double Quantize8Value(double v) { return std::round(255.0 * v) / 255.0; }

ImageTensor Quantize8(const ImageTensor& x) {
  std::vector<double> out(x.size());
  kernels::parallel::Quantize8(x.data(), out);
  return ImageTensor(x.dims(), std::move(out));
}

std::vector<double> ConversionErrorDiff(const ImageTensor& x, GammaFactor beta,
                                        GammaFactor gamma) {
  const ImageTensor stored = Quantize8(GammaCorrect(x, gamma));
  const ImageTensor restored = Quantize8(GammaCorrect(stored, beta));
  const ImageTensor exact =
      GammaCorrect(x, GammaFactor(beta.value() * gamma.value()));
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = restored[i] - exact[i];
  return diff;
}

double ConversionError(const ImageTensor& x, GammaFactor beta,
                       GammaFactor gamma) {
  const ImageTensor stored = Quantize8(GammaCorrect(x, gamma));
  const ImageTensor restored = Quantize8(GammaCorrect(stored, beta));
  const ImageTensor exact =
      GammaCorrect(x, GammaFactor(beta.value() * gamma.value()));
  return std::sqrt(
      kernels::parallel::SquaredDistance(restored.data(), exact.data()));
}

ImageTensor RescaleRoundTrip(const ImageTensor& x, double ratio) {
  Require(std::isfinite(ratio) && ratio > 0.0,
          "rescale ratio must be positive and finite");
  const auto& dims = x.dims();
  Require(dims.size() >= 2, "rescaling needs a tensor of rank at least 2");
  const std::size_t h = dims[dims.size() - 2];
  const std::size_t w = dims[dims.size() - 1];
  const std::size_t planes = x.size() / (h * w);
  const auto scaled = [ratio](std::size_t n) {
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(static_cast<double>(n) * ratio)));
  };
  const std::size_t nh = scaled(h);
  const std::size_t nw = scaled(w);
  const std::vector<double> small = ResizePlanes(x.data(), planes, h, w, nh, nw);
  return ImageTensor(dims, ResizePlanes(small, planes, nh, nw, h, w));
}

}  // namespace smoothcert
