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

#include "archlens/text.h"

#include <array>
#include <charconv>
#include <cmath>

namespace archlens {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto begin = s.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(kSpace);
  return s.substr(begin, end - begin + 1);
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto byte = static_cast<unsigned char>(out[i]);
    if (byte >= 'A' && byte <= 'Z') {
      out[i] = static_cast<char>(byte + ('a' - 'A'));
      continue;
    }
    if (i + 1 >= out.size()) break;
    auto next = static_cast<unsigned char>(out[i + 1]);
    if (byte == 0xC3 && next >= 0x80 && next <= 0x9E && next != 0x97) {
      // U+00C0..U+00DE except the multiplication sign.
      out[i + 1] = static_cast<char>(next + 0x20);
      ++i;
    } else if (byte == 0xC5 && next == 0x92) {
      out[i + 1] = static_cast<char>(0x93);  // Œ -> œ
      ++i;
    } else if (byte == 0xC5 && next == 0xB8) {
      out[i] = static_cast<char>(0xC3);  // Ÿ -> ÿ
      out[i + 1] = static_cast<char>(0xBF);
      ++i;
    } else if (byte >= 0xC0) {
      ++i;
    }
  }
  return out;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // also folds -0
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

}  // namespace archlens
