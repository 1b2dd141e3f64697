// Copyright 2026 The mbqc-lab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace mbqc {

/// Exit-code taxonomy shared by the library and the command-line tool.
enum class ErrorKind : int {
  Usage = 1,
  Parse = 2,
  Invariant = 3,
  Parameter = 4,
  BoundViolation = 5,
  CapExceeded = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorKind::Parse, w) {}
};
struct InvariantError : Error {
  explicit InvariantError(const std::string& w)
      : Error(ErrorKind::Invariant, w) {}
};
struct ParameterError : Error {
  explicit ParameterError(const std::string& w)
      : Error(ErrorKind::Parameter, w) {}
};
struct BoundViolation : Error {
  explicit BoundViolation(const std::string& w)
      : Error(ErrorKind::BoundViolation, w) {}
};
struct CapExceeded : Error {
  explicit CapExceeded(const std::string& w)
      : Error(ErrorKind::CapExceeded, w) {}
};

}  // namespace mbqc
