// Copyright 2026 The specphase Authors.
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

namespace specphase {

// Invalid input data: bad parameters, malformed files, dimension mismatches.
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A partition or vector with no usable two-way structure (empty side,
// constant Fiedler vector, ...).
class DegenerateError : public DataError {
 public:
  using DataError::DataError;
};

// Iterative solver ran out of budget. The best residual reached is kept.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace specphase
