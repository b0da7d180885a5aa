// SPDX-License-Identifier: Apache-2.0
//
// Shared numeric aliases and the error hierarchy used across the library.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace gcamusic {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// Malformed input (sizes, ranges, duplicates).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Requested source count exceeds what the estimator can identify.
class TooManySources : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Coarray has no usable contiguous center for spatial smoothing.
class DegenerateCoarray : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Request is well-formed but outside what this build supports.
class Unsupported : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace gcamusic
