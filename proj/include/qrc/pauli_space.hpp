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

// Two-qubit unitaries expanded in the Pauli basis, c_P = Tr(P^dagger U) / 4,
// and a PCA projection for comparing ensemble clouds against Haar samples.
// Cloud rows hold the 16 coefficients as 32 interleaved (re, im) reals. The
// global phase of U is not quotiented out.

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qrc/families.hpp"
#include "qrc/parallel.hpp"
#include "qrc/statevector.hpp"

namespace qrc {

inline constexpr int kPauliDim = 16;
inline constexpr int kCloudColumns = 2 * kPauliDim;
inline constexpr int kDefaultCloudSize = 4000;

using PauliCoefficients = std::array<Complex, kPauliDim>;

/// "II", "IX", ..., "ZZ".
inline std::string two_qubit_pauli_label(int index) {
    static constexpr char names[] = {'I', 'X', 'Y', 'Z'};
    return {names[index / 4], names[index % 4]};
}

inline PauliCoefficients pauli_coefficients(const CMatrix &u) {
    if (u.rows() != 4 || u.cols() != 4) throw std::invalid_argument("pauli_coefficients: expected a 4x4 matrix");
    if (unitarity_defect(u) > 1e-9) throw std::invalid_argument("pauli_coefficients: matrix is not unitary");
    static const auto basis = [] {
        std::array<CMatrix, kPauliDim> b;
        for (int k = 0; k < kPauliDim; ++k)
            b[static_cast<std::size_t>(k)] = pauli_matrix(PauliString::parse(two_qubit_pauli_label(k)));
        return b;
    }();
    PauliCoefficients c{};
    // Pauli strings are Hermitian, so Tr(P^dagger U) = Tr(P U) = sum_ij P_ji U_ij.
    for (int k = 0; k < kPauliDim; ++k)
        c[static_cast<std::size_t>(k)] = basis[static_cast<std::size_t>(k)].transpose().cwiseProduct(u).sum() / 4.0;
    return c;
}

inline std::array<double, kCloudColumns> interleave(const PauliCoefficients &c) {
    std::array<double, kCloudColumns> row{};
    for (int k = 0; k < kPauliDim; ++k) {
        row[static_cast<std::size_t>(2 * k)] = c[static_cast<std::size_t>(k)].real();
        row[static_cast<std::size_t>(2 * k + 1)] = c[static_cast<std::size_t>(k)].imag();
    }
    return row;
}

struct PauliCloud {
    std::string family; // family name or "Haar"
    int n_gates = 0;
    std::vector<std::uint64_t> seeds;
    RMatrix rows; // n x 32
};

/// Row i is circuit seed spec.seed + i.
inline PauliCloud ensemble_cloud(const SampleSpec &spec, int n_circuits = kDefaultCloudSize, int jobs = 1) {
    if (spec.n_qubits != 2) throw std::invalid_argument("ensemble_cloud: Pauli-space study is defined on 2 qubits");
    if (n_circuits < 1) throw std::invalid_argument("ensemble_cloud: n_circuits must be >= 1");
    spec.validate();
    PauliCloud cloud{std::string(to_string(spec.family)), spec.effective_gates(), {}, RMatrix(n_circuits, kCloudColumns)};
    cloud.seeds.resize(static_cast<std::size_t>(n_circuits));
    parallel_for(static_cast<std::size_t>(n_circuits), jobs, [&](std::size_t i) {
        SampleSpec s = spec;
        s.seed = spec.seed + i;
        cloud.seeds[i] = s.seed;
        const auto row = interleave(pauli_coefficients(circuit_unitary(sample_circuit(s))));
        for (int k = 0; k < kCloudColumns; ++k) cloud.rows(static_cast<Eigen::Index>(i), k) = row[static_cast<std::size_t>(k)];
    });
    return cloud;
}

/// Uniform reference: row i is a Haar unitary drawn from stream (seed, i).
inline PauliCloud haar_cloud(int n_circuits, std::uint64_t seed, int jobs = 1) {
    if (n_circuits < 1) throw std::invalid_argument("haar_cloud: n_circuits must be >= 1");
    PauliCloud cloud{"Haar", 0, {}, RMatrix(n_circuits, kCloudColumns)};
    cloud.seeds.resize(static_cast<std::size_t>(n_circuits));
    parallel_for(static_cast<std::size_t>(n_circuits), jobs, [&](std::size_t i) {
        RandomStream rng = RandomStream::derive(seed, i);
        cloud.seeds[i] = seed + i;
        const auto row = interleave(pauli_coefficients(haar_unitary(4, rng)));
        for (int k = 0; k < kCloudColumns; ++k) cloud.rows(static_cast<Eigen::Index>(i), k) = row[static_cast<std::size_t>(k)];
    });
    return cloud;
}

struct Projection {
    RMatrix coords;    // n x dims
    RMatrix axes;      // columns x dims, unit columns (zero where padded)
    RVector variances; // sample variance along each axis
    RVector mean;
};

/// Mean-centered projection onto the leading principal axes. Each axis is
/// signed so its largest-magnitude loading is positive; axes beyond the
/// numerical rank are zero.
inline Projection pca_project(const RMatrix &cloud, int dims = 2) {
    if (dims < 1 || dims > cloud.cols()) throw std::invalid_argument("pca_project: bad dims");
    if (cloud.rows() < dims + 1) throw std::invalid_argument("pca_project: need at least dims + 1 rows");
    if (!cloud.allFinite()) throw std::invalid_argument("pca_project: non-finite input");
    Projection p;
    p.mean = cloud.colwise().mean().transpose();
    const RMatrix centered = cloud.rowwise() - p.mean.transpose();
    const RMatrix cov = centered.transpose() * centered / static_cast<double>(cloud.rows() - 1);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(cov);
    if (es.info() != Eigen::Success) throw std::runtime_error("pca_project: covariance eigensolver failed");

    const double scale = std::max(1.0, cov.diagonal().sum());
    p.axes = RMatrix::Zero(cloud.cols(), dims);
    p.variances = RVector::Zero(dims);
    for (int k = 0; k < dims; ++k) {
        const Eigen::Index col = cloud.cols() - 1 - k; // ascending order
        const double lambda = es.eigenvalues()[col];
        if (lambda <= 1e-13 * scale) break;
        RVector v = es.eigenvectors().col(col);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v[arg] < 0) v = -v;
        p.axes.col(k) = v;
        p.variances[k] = lambda;
    }
    p.coords = centered * p.axes;
    return p;
}

inline std::vector<double> centroid_distances(const RMatrix &cloud) {
    const RVector c = cloud.colwise().mean().transpose();
    std::vector<double> d(static_cast<std::size_t>(cloud.rows()));
    for (Eigen::Index i = 0; i < cloud.rows(); ++i) d[static_cast<std::size_t>(i)] = (cloud.row(i).transpose() - c).norm();
    return d;
}

struct DistanceStats {
    double mean = 0.0;
    double std = 0.0;
    double se = 0.0;
};

inline DistanceStats distance_stats(const std::vector<double> &d) {
    if (d.size() < 2) throw std::invalid_argument("distance_stats: need two or more samples");
    DistanceStats s;
    for (double v : d) s.mean += v;
    s.mean /= static_cast<double>(d.size());
    for (double v : d) s.std += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(s.std / static_cast<double>(d.size() - 1));
    s.se = s.std / std::sqrt(static_cast<double>(d.size()));
    return s;
}

/// Largest deviation of sum_P |c_P|^2 from one over the rows of a cloud.
inline double max_norm_defect(const RMatrix &cloud) {
    return (cloud.rowwise().squaredNorm().array() - 1.0).abs().maxCoeff();
}

inline void write_cloud_csv(std::ostream &os, const PauliCloud &c, bool header = true) {
    if (header) {
        os << "family,n_gates,seed";
        for (int k = 0; k < kPauliDim; ++k) os << ",c" << k << "_re,c" << k << "_im";
        os << '\n';
    }
    for (Eigen::Index i = 0; i < c.rows.rows(); ++i) {
        os << c.family << ',' << c.n_gates << ',' << c.seeds[static_cast<std::size_t>(i)];
        for (int k = 0; k < kCloudColumns; ++k) os << ',' << format_double(c.rows(i, k));
        os << '\n';
    }
}

inline void write_projection_csv(std::ostream &os, const std::vector<std::uint64_t> &seeds, const Projection &p) {
    if (p.coords.cols() != 2 || seeds.size() != static_cast<std::size_t>(p.coords.rows()))
        throw std::invalid_argument("write_projection_csv: expected a 2D projection with one seed per row");
    os << "seed,x,y\n";
    for (Eigen::Index i = 0; i < p.coords.rows(); ++i)
        os << seeds[static_cast<std::size_t>(i)] << ',' << format_double(p.coords(i, 0)) << ',' << format_double(p.coords(i, 1))
           << '\n';
}

} // namespace qrc
