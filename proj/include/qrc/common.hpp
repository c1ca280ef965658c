// Copyright 2026 The qrc-reservoir Authors
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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qrc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr int kMaxQubits = 12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-10;

/// Raised when an iterative numerical routine fails to converge.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string &what, int iterations)
        : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations_(iterations) {}
    int iterations() const noexcept { return iterations_; }

  private:
    int iterations_;
};

inline std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

// Largest |M^dagger M - I| entry.
inline double unitarity_defect(const CMatrix &m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    CMatrix d = m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const CMatrix &m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace qrc
