/*
 * Copyright 2026 The rotor-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace rotor_lab {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failures. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// u1 <= 0 or u2 <= 0, or another parameter outside its physical domain.
class StabilityViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration; the message carries the line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Exact and simulated tables do not share the same sweep grid.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

class ResidueDegenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergent : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TailTooFat : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoRootInBracket : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IdentityViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The integrator produced Inf/NaN; usually dt is too large.
class NonFiniteState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientSamples : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rotor_lab
