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

#ifndef ARCHLENS_ERROR_H_
#define ARCHLENS_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace archlens {

// Base class for every error raised by the library. Domain failures such as
// single-class training data or an empty corpus are reported as Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A malformed line in a line-oriented text input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Unreadable file, wrong magic/version, or a tabular input whose schema does
// not match what the command expects.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A binary file whose header is valid but whose body is inconsistent.
class CorruptionError : public FormatError {
 public:
  CorruptionError(std::uint64_t offset, const std::string &message)
      : FormatError("corrupt data at byte " + std::to_string(offset) + ": " +
                    message),
        offset_(offset) {}

  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

// Invalid command-line usage (bad flag value, malformed scheme string).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace archlens

#endif  // ARCHLENS_ERROR_H_
