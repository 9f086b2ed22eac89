// Copyright 2026 The dynlearn Authors
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

namespace dynlearn {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad state, mismatched grid, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed: no convergence, drift past its guard, or an
/// adjoint/forward inconsistency.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Training blew up even after the learning-rate backoff was exhausted.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace dynlearn
