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

// MST1 tensor files, little-endian:
//
//   "MST1"  u32 ndim  ndim x u32 dims  product(dims) x f64 (row-major)
//
// Every entry must lie in [0, 1].

#ifndef SMOOTHCERT_TENSOR_IO_H_
#define SMOOTHCERT_TENSOR_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smoothcert/tensor.h"

namespace smoothcert {

class TensorFormatError : public std::runtime_error {
 public:
  enum class Code {
    kIo,
    kBadMagic,
    kTruncated,
    kBadShape,
    kOutOfRange,
    kTrailingBytes,
  };

  TensorFormatError(Code code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

ImageTensor DecodeTensor(std::string_view bytes);
std::string EncodeTensor(const ImageTensor& x);

ImageTensor ReadTensor(const std::filesystem::path& path);
void WriteTensor(const ImageTensor& x, const std::filesystem::path& path);

// Every *.mst1 file in `dir`, sorted by file name.
std::vector<ImageTensor> ReadTensorDirectory(const std::filesystem::path& dir);

}  // namespace smoothcert

#endif  // SMOOTHCERT_TENSOR_IO_H_
