// Copyright 2026 The Qudit Pulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qudit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// GHz (cycles per ns) to angular frequency in rad/ns.
constexpr double from_ghz(double ghz) { return kTwoPi * ghz; }
constexpr double to_ghz(double rad_per_ns) { return rad_per_ns / kTwoPi; }
constexpr double from_mhz(double mhz) { return kTwoPi * mhz * 1e-3; }
constexpr double to_mhz(double rad_per_ns) { return rad_per_ns / kTwoPi * 1e3; }

/// Bad input: dimensions, names, ranges. Maps to CLI exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numeric failure (non-finite values, singular systems). Maps to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RefitError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace qudit
