// Copyright 2026 The lambda-fwm Authors
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

namespace lfwm {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (negative intensity, negative
// storage time, mismatched inputs, invalid state).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Integrator step too large for the configured Rabi frequencies.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

// Too few grating/drive phase samples to resolve the Fourier orders present.
class AliasingError : public Error {
 public:
  using Error::Error;
};

// Near-singular linear system in the f/g inversion.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// Quadrature never reached its truncation criterion, or a probe left its
// perturbative window.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Fit input that cannot determine the parameters (constant or empty data).
class IllPosedError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace lfwm
