// Copyright 2026 The cpm Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpm {

// Base for every error raised by the library. The CLI maps subclasses onto
// stable exit codes (see tools/cli).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition on an argument or a parameter set was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A truncated representation cannot hold the requested state or
// distribution. `required` carries the bound that would satisfy the
// tolerance, when one could be determined.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::size_t required)
      : Error(what), required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

// A statistic is mathematically undefined for the given input (zero mean,
// zero second factorial moment, ...).
class UndefinedStatistic : public Error {
 public:
  using Error::Error;
};

// Numerical evaluation failed (non-finite result, non-convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A scan grid does not resolve the low-bias plateau of the signal-to-noise
// ratio, so no breakdown point can be defined.
class PlateauUndefined : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Monte Carlo run produced no usable samples.
class InsufficientStatistics : public Error {
 public:
  using Error::Error;
};

}  // namespace cpm
