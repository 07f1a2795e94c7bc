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

#include "smoothcert/tensor_io.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>

namespace smoothcert {
namespace {

using Code = TensorFormatError::Code;

constexpr std::string_view kMagic = "MST1";

template <typename T>
T LoadLittle(const char* p) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return value;
}

template <typename T>
void AppendLittle(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  void Need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw TensorFormatError(Code::kTruncated,
                              std::string("truncated MST1 file: missing ") + what);
    }
  }
  std::uint32_t U32(const char* what) {
    Need(4, what);
    const auto v = LoadLittle<std::uint32_t>(bytes_.data() + pos_);
    pos_ += 4;
    return v;
  }
  double F64(const char* what) {
    Need(8, what);
    const auto bits = LoadLittle<std::uint64_t>(bytes_.data() + pos_);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageTensor DecodeTensor(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    throw TensorFormatError(Code::kBadMagic, "not an MST1 file (bad magic)");
  }
  Reader reader(bytes.substr(kMagic.size()));
  const std::uint32_t ndim = reader.U32("ndim");
  if (ndim == 0) throw TensorFormatError(Code::kBadShape, "MST1 ndim is zero");
  std::vector<std::size_t> dims;
  dims.reserve(std::min<std::uint32_t>(ndim, 64));
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const std::uint32_t d = reader.U32("dims");
    if (d == 0) throw TensorFormatError(Code::kBadShape, "MST1 dim is zero");
    count *= d;
    if (count > (std::uint64_t{1} << 40)) {
      throw TensorFormatError(Code::kBadShape, "MST1 tensor is too large");
    }
    dims.push_back(d);
  }
  if (reader.remaining() / 8 < count) {
    throw TensorFormatError(Code::kTruncated,
                            "truncated MST1 file: payload shorter than " +
                                std::to_string(count) + " entries");
  }
  std::vector<double> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double v = reader.F64("payload");
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream msg;
      msg << "MST1 entry " << i << " = " << v << " lies outside [0, 1]";
      throw TensorFormatError(Code::kOutOfRange, msg.str());
    }
    data[i] = v;
  }
  if (reader.remaining() != 0) {
    throw TensorFormatError(Code::kTrailingBytes,
                            "MST1 file has trailing bytes after the payload");
  }
  return ImageTensor(std::move(dims), std::move(data));
}

std::string EncodeTensor(const ImageTensor& x) {
  std::string out(kMagic);
  out.reserve(8 + 4 * x.dims().size() + 8 * x.size());
  AppendLittle(out, static_cast<std::uint32_t>(x.dims().size()));
  for (std::size_t d : x.dims()) AppendLittle(out, static_cast<std::uint32_t>(d));
  for (double v : x.data()) AppendLittle(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

ImageTensor ReadTensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw TensorFormatError(Code::kIo, "cannot open " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  try {
    return DecodeTensor(bytes);
  } catch (const TensorFormatError& e) {
    throw TensorFormatError(e.code(), path.string() + ": " + e.what());
  }
}

void WriteTensor(const ImageTensor& x, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw TensorFormatError(Code::kIo, "cannot write " + path.string());
  }
  const std::string bytes = EncodeTensor(x);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw TensorFormatError(Code::kIo, "write failed for " + path.string());
  }
}

std::vector<ImageTensor> ReadTensorDirectory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw TensorFormatError(Code::kIo, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".mst1") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ImageTensor> tensors;
  tensors.reserve(files.size());
  for (const auto& file : files) tensors.push_back(ReadTensor(file));
  return tensors;
}

}  // namespace smoothcert
