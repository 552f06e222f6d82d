// Copyright 2026 The ArchLens Authors.
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

// Little-endian primitives shared by the embeddings and model formats.

#ifndef ARCHLENS_SRC_BINARY_IO_H_
#define ARCHLENS_SRC_BINARY_IO_H_

#include <array>
#include <bit>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "archlens/error.h"

namespace archlens::binary {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <std::unsigned_integral T>
void put(std::ostream &out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

inline void put_f32(std::ostream &out, float value) {
  put(out, std::bit_cast<std::uint32_t>(value));
}

inline void put_f64(std::ostream &out, double value) {
  put(out, std::bit_cast<std::uint64_t>(value));
}

// Sequential reader that tracks the byte offset for error messages.
class Reader {
 public:
  Reader(std::istream &in, std::uint64_t start_offset)
      : in_(in), offset_(start_offset) {}

  std::uint64_t offset() const { return offset_; }

  void read_bytes(char *dst, std::size_t n, const char *what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got != n) {
      throw CorruptionError(offset_ + got, std::string("truncated ") + what);
    }
    offset_ += n;
  }

  template <std::unsigned_integral T>
  T get(const char *what) {
    std::array<unsigned char, sizeof(T)> bytes{};
    read_bytes(reinterpret_cast<char *>(bytes.data()), bytes.size(), what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(bytes[i]) << (8 * i);
    }
    return value;
  }

  float get_f32(const char *what) {
    return std::bit_cast<float>(get<std::uint32_t>(what));
  }
  double get_f64(const char *what) {
    return std::bit_cast<double>(get<std::uint64_t>(what));
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream &in_;
  std::uint64_t offset_ = 0;
};

}  // namespace archlens::binary

#endif  // ARCHLENS_SRC_BINARY_IO_H_
