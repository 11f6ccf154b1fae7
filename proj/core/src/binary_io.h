// Copyright 2026 The SBPlan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SBPLAN_SRC_BINARY_IO_H_
#define SBPLAN_SRC_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sbplan/error.h"

namespace sbplan::internal {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

class ByteWriter {
 public:
  void Raw(std::string_view bytes) { buf_.append(bytes); }
  void U32(uint32_t v) { Pod(v); }
  void U64(uint64_t v) { Pod(v); }
  void F64(double v) { Pod(v); }
  void F64s(const double* data, size_t n) {
    buf_.append(reinterpret_cast<const char*>(data), n * sizeof(double));
  }
  void String(std::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    Raw(s);
  }
  const std::string& bytes() const { return buf_; }

 private:
  template <typename T>
  void Pod(T v) {
    char tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    buf_.append(tmp, sizeof(T));
  }
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string bytes) : buf_(std::move(bytes)) {}

  size_t remaining() const { return buf_.size() - pos_; }
  bool AtEnd() const { return pos_ == buf_.size(); }

  std::string Raw(size_t n) {
    Need(n);
    std::string out = buf_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  uint32_t U32() { return Pod<uint32_t>(); }
  uint64_t U64() { return Pod<uint64_t>(); }
  double F64() { return Pod<double>(); }
  void F64s(double* out, size_t n) {
    Need(n * sizeof(double));
    std::memcpy(out, buf_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
  }
  std::string String() { return Raw(U32()); }

 private:
  void Need(size_t n) const {
    if (remaining() < n) {
      throw Error(ErrorCode::kTruncatedFile,
                  "need " + std::to_string(n) + " bytes, have " +
                      std::to_string(remaining()));
    }
  }
  template <typename T>
  T Pod() {
    Need(sizeof(T));
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string buf_;
  size_t pos_ = 0;
};

// Reads a whole file; throws kIo if it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);

// Writes via a sibling temp file and rename so readers never observe a
// partially written file. Creates missing parent directories.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace sbplan::internal

#endif  // SBPLAN_SRC_BINARY_IO_H_
