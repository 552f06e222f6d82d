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

#ifndef ARCHLENS_TEXT_H_
#define ARCHLENS_TEXT_H_

#include <string>
#include <string_view>

namespace archlens {

// Strips ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

// Lowercases ASCII and the precomposed Latin letters used by French and the
// other western European languages (Latin-1 Supplement, Œ, Ÿ). Other bytes
// pass through unchanged.
std::string lowercase(std::string_view s);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace archlens

#endif  // ARCHLENS_TEXT_H_
