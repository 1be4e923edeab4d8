// Copyright (c) 2026 The mmspk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMSPK_NUMERICS_ERRORS_H_
#define MMSPK_NUMERICS_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmspk {

// Root of every error thrown by the library. Callers that only need to
// distinguish "our" failures from std:: ones catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimensions of two operands do not compose.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input on which the operation is undefined (zero vector, empty batch,
// single-class trial list, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Non-finite value where a finite one is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Value outside its valid range (label >= classes, token id >= vocab).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition (e.g. non-unit embedding).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Object not in the state the call requires (missing encoder, cache from a
// different encoder).
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or unknown key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string &what, int stage, int64_t step)
      : Error(what), stage_(stage), step_(step) {}
  int stage() const { return stage_; }
  int64_t step() const { return step_; }

 private:
  int stage_;
  int64_t step_;
};

}  // namespace mmspk

#endif  // MMSPK_NUMERICS_ERRORS_H_
