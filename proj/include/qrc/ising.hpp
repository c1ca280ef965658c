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

// Random transverse-field Ising reservoir
//
//   H = sum_{i<j} J_ij Z_i Z_j + sum_i h_i X_i,   U = exp(+i H T)
//
// Each unordered pair contributes once. exact_evolution diagonalizes H;
// trotter_circuit gives the first-order product formula over {H, CNOT, RZ}.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrc/eigensolver.hpp"
#include "qrc/hamiltonian.hpp"
#include "qrc/random.hpp"
#include "qrc/statevector.hpp"

namespace qrc {

/// {H, CNOT, T} gate totals of the Trotterized LiH (8 qubit) and H2O
/// (10 qubit) Ising circuits after Rz synthesis. Quoted for comparison;
/// nothing here performs Rz synthesis.
inline constexpr int kReferenceIsingGatesLiH = 11381;
inline constexpr int kReferenceIsingGatesH2O = 17335;

inline constexpr double kIsingTime = 10.0;
inline constexpr int kDefaultTrotterSteps = 10;

struct IsingParams {
    int n_qubits = 0;
    RMatrix couplings; // symmetric, zero diagonal
    RVector fields;
    double time = kIsingTime;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("IsingParams: bad qubit count");
        if (couplings.rows() != n_qubits || couplings.cols() != n_qubits || fields.size() != n_qubits)
            throw std::invalid_argument("IsingParams: shape mismatch");
        if (!couplings.allFinite() || !fields.allFinite() || !std::isfinite(time))
            throw std::invalid_argument("IsingParams: non-finite entry");
        for (int i = 0; i < n_qubits; ++i) {
            if (couplings(i, i) != 0.0) throw std::invalid_argument("IsingParams: nonzero coupling diagonal");
            for (int j = 0; j < i; ++j)
                if (couplings(i, j) != couplings(j, i)) throw std::invalid_argument("IsingParams: couplings not symmetric");
        }
    }
};

/// J_ij ~ N(0.75, 0.1) for i < j (mirrored), h_i ~ N(1, 0.1), T = 10.
inline IsingParams sample_ising(int n_qubits, std::uint64_t seed) {
    if (n_qubits < 2 || n_qubits > kMaxQubits) throw std::invalid_argument("sample_ising: n_qubits must be in [2, 12]");
    RandomStream rng(seed);
    IsingParams p;
    p.n_qubits = n_qubits;
    p.seed = seed;
    p.couplings = RMatrix::Zero(n_qubits, n_qubits);
    for (int i = 0; i < n_qubits; ++i)
        for (int j = i + 1; j < n_qubits; ++j) p.couplings(i, j) = p.couplings(j, i) = rng.normal(0.75, 0.1);
    p.fields.resize(n_qubits);
    for (int i = 0; i < n_qubits; ++i) p.fields[i] = rng.normal(1.0, 0.1);
    return p;
}

inline PauliSum ising_hamiltonian(const IsingParams &p) {
    p.validate();
    const int n = p.n_qubits;
    PauliSum h(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<Pauli> ops(static_cast<std::size_t>(n), Pauli::I);
            ops[static_cast<std::size_t>(i)] = ops[static_cast<std::size_t>(j)] = Pauli::Z;
            h.add(p.couplings(i, j), PauliString(ops));
        }
    for (int i = 0; i < n; ++i) h.add(p.fields[i], PauliString::single(n, i, Pauli::X));
    return h;
}

/// exp(+i H T) from the eigendecomposition of the dense Hamiltonian.
inline CMatrix exact_evolution(const IsingParams &p) {
    p.validate();
    if (p.n_qubits > 10) throw std::invalid_argument("exact_evolution: dense evolution limited to 10 qubits");
    const auto es = hermitian_eigensystem(pauli_sum_matrix(ising_hamiltonian(p)));
    CVector phases(es.values.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, es.values[k] * p.time);
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

/// Whole-register gate wrapping exact_evolution, for use as a reservoir.
inline Circuit exact_evolution_circuit(const IsingParams &p) {
    std::vector<int> all(static_cast<std::size_t>(p.n_qubits));
    for (int q = 0; q < p.n_qubits; ++q) all[static_cast<std::size_t>(q)] = q;
    CMatrix u = exact_evolution(p);
    if (unitarity_defect(u) > kUnitaryTol) u = polar_unitary(u);
    Circuit c(p.n_qubits);
    c.add(Gate(GateKind::Unitary, std::move(u), std::move(all)));
    return c;
}

/// First-order product formula with `steps` repetitions. Each step applies
/// exp(i J_ij dt Z_i Z_j) as CNOT_ij RZ_j(-2 J_ij dt) CNOT_ij for every
/// nonzero coupling, then exp(i h_i dt X_i) as H_i RZ_i(-2 h_i dt) H_i, with
/// dt = T / steps and RZ(theta) = exp(-i theta Z / 2).
inline Circuit trotter_circuit(const IsingParams &p, int steps = kDefaultTrotterSteps) {
    p.validate();
    if (steps < 1) throw std::invalid_argument("trotter_circuit: steps must be >= 1");
    const int n = p.n_qubits;
    const double dt = p.time / steps;
    Circuit c(n);
    for (int s = 0; s < steps; ++s) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (p.couplings(i, j) == 0.0) continue;
                c.add(gates::cnot(i, j));
                c.add(gates::rz(-2.0 * p.couplings(i, j) * dt, j));
                c.add(gates::cnot(i, j));
            }
        for (int i = 0; i < n; ++i) {
            c.add(gates::h(i));
            c.add(gates::rz(-2.0 * p.fields[i] * dt, i));
            c.add(gates::h(i));
        }
    }
    return c;
}

/// Per-label tally plus "total".
inline std::map<std::string, int> gate_count(const Circuit &c) {
    std::map<std::string, int> counts{{"total", 0}};
    for (const auto &g : c.gates()) {
        ++counts[std::string(g.label())];
        ++counts["total"];
    }
    return counts;
}

inline double operator_norm(const CMatrix &m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

/// ||U_trotter(steps) - U_exact||_2 for each entry of `steps`.
inline std::vector<double> trotter_errors(const IsingParams &p, const std::vector<int> &steps) {
    const CMatrix exact = exact_evolution(p);
    std::vector<double> out;
    out.reserve(steps.size());
    for (int m : steps) out.push_back(operator_norm(circuit_unitary(trotter_circuit(p, m)) - exact));
    return out;
}

/// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need two or more matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline nlohmann::json ising_to_json(const IsingParams &p) {
    nlohmann::json upper = nlohmann::json::array();
    for (int i = 0; i < p.n_qubits; ++i)
        for (int j = i + 1; j < p.n_qubits; ++j) upper.push_back({i, j, p.couplings(i, j)});
    std::vector<double> h(p.fields.data(), p.fields.data() + p.fields.size());
    return {{"n_qubits", p.n_qubits}, {"J_upper", upper}, {"h", h}, {"T", p.time}, {"seed", p.seed},
            {"sign_convention", "exp(+iHT)"}};
}

inline IsingParams ising_from_json(const nlohmann::json &j) {
    IsingParams p;
    p.n_qubits = j.at("n_qubits").get<int>();
    p.couplings = RMatrix::Zero(p.n_qubits, p.n_qubits);
    for (const auto &e : j.at("J_upper")) {
        const int a = e.at(0).get<int>(), b = e.at(1).get<int>();
        if (a < 0 || b < 0 || a >= p.n_qubits || b >= p.n_qubits || a == b)
            throw std::invalid_argument("ising_from_json: bad coupling index");
        p.couplings(a, b) = p.couplings(b, a) = e.at(2).get<double>();
    }
    const auto h = j.at("h").get<std::vector<double>>();
    p.fields = Eigen::Map<const RVector>(h.data(), static_cast<Eigen::Index>(h.size()));
    p.time = j.value("T", kIsingTime);
    p.seed = j.value("seed", std::uint64_t{0});
    p.validate();
    return p;
}

} // namespace qrc
