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

// Seeded samplers for the seven reservoir circuit families.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrc/common.hpp"
#include "qrc/random.hpp"
#include "qrc/statevector.hpp"

namespace qrc {

enum class FamilyId { G1, G2, G3, MG, D2, D3, DN };

inline constexpr std::array<FamilyId, 7> kAllFamilies{FamilyId::G1, FamilyId::G2, FamilyId::G3, FamilyId::MG,
                                                      FamilyId::D2, FamilyId::D3, FamilyId::DN};

inline std::string_view to_string(FamilyId f) {
    switch (f) {
    case FamilyId::G1: return "G1";
    case FamilyId::G2: return "G2";
    case FamilyId::G3: return "G3";
    case FamilyId::MG: return "MG";
    case FamilyId::D2: return "D2";
    case FamilyId::D3: return "D3";
    case FamilyId::DN: return "DN";
    }
    return "?";
}

inline FamilyId family_from_string(std::string_view s) {
    for (FamilyId f : kAllFamilies)
        if (to_string(f) == s) return f;
    if (s == "Dn") return FamilyId::DN;
    throw std::invalid_argument("unknown circuit family '" + std::string(s) + "'");
}

inline bool is_diagonal_family(FamilyId f) { return f == FamilyId::D2 || f == FamilyId::D3 || f == FamilyId::DN; }

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

struct SampleSpec {
    FamilyId family = FamilyId::G3;
    int n_qubits = 2;
    int n_gates = 1; // ignored for diagonal families
    std::uint64_t seed = 0;

    /// C(n,2), C(n,3) or 1 for the diagonal families, n_gates otherwise.
    int effective_gates() const {
        switch (family) {
        case FamilyId::D2: return static_cast<int>(binomial(n_qubits, 2));
        case FamilyId::D3: return static_cast<int>(binomial(n_qubits, 3));
        case FamilyId::DN: return 1;
        default: return n_gates;
        }
    }

    void validate() const {
        if (n_qubits < 2 || n_qubits > kMaxQubits)
            throw std::invalid_argument("SampleSpec: n_qubits must be in [2, 12], got " + std::to_string(n_qubits));
        if (!is_diagonal_family(family) && n_gates < 1)
            throw std::invalid_argument("SampleSpec: n_gates must be >= 1 for " + std::string(to_string(family)));
        if (family == FamilyId::D3 && n_qubits < 3) throw std::invalid_argument("SampleSpec: D3 needs at least 3 qubits");
    }
};

/// Haar-random d x d unitary: complex Ginibre draw, QR, then the columns are
/// rephased so the triangular factor has a real positive diagonal.
inline CMatrix haar_unitary(int d, RandomStream &rng) {
    if (d != 2 && d != 4) throw std::invalid_argument("haar_unitary: supported dimensions are 2 and 4, got " + std::to_string(d));
    CMatrix z(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
            const double re = rng.normal(), im = rng.normal();
            z(i, j) = Complex(re, im) / std::numbers::sqrt2;
        }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        q.col(j) *= rjj / std::abs(rjj);
    }
    if (unitarity_defect(q) > 1e-12) q = polar_unitary(q);
    return q;
}

inline CMatrix haar_unitary(int d, std::uint64_t seed) {
    RandomStream rng(seed);
    return haar_unitary(d, rng);
}

/// Matchgate G(A, B): A on span{|00>,|11>}, B on span{|01>,|10>}.
inline Gate matchgate(const CMatrix &a, const CMatrix &b, int q0 = 0, int q1 = 1) {
    if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2)
        throw std::invalid_argument("matchgate: A and B must be 2x2");
    if (std::abs(a.determinant() - b.determinant()) > 1e-10)
        throw std::invalid_argument("matchgate: det A and det B differ");
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = a(0, 0);
    m(0, 3) = a(0, 1);
    m(3, 0) = a(1, 0);
    m(3, 3) = a(1, 1);
    m(1, 1) = b(0, 0);
    m(1, 2) = b(0, 1);
    m(2, 1) = b(1, 0);
    m(2, 2) = b(1, 1);
    return Gate(GateKind::MG, m, {q0, q1});
}

namespace detail {

inline std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

inline std::pair<int, int> ordered_pair(int n, RandomStream &rng) {
    const auto code = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1)));
    const int control = code / (n - 1);
    int target = code % (n - 1);
    if (target >= control) ++target;
    return {control, target};
}

inline std::pair<int, int> unordered_pair(int n, RandomStream &rng) {
    auto code = static_cast<int>(rng.uniform_int(binomial(n, 2)));
    for (int a = 0; a < n; ++a) {
        const int row = n - 1 - a;
        if (code < row) return {a, a + 1 + code};
        code -= row;
    }
    throw std::logic_error("unordered_pair: unreachable");
}

} // namespace detail

/// Random circuit from `spec.family`. A pure function of `spec`: all draws come
/// from one counter-based stream seeded with spec.seed.
inline Circuit sample_circuit(const SampleSpec &spec) {
    spec.validate();
    const int n = spec.n_qubits;
    RandomStream rng(spec.seed);
    Circuit c(n);
    switch (spec.family) {
    case FamilyId::G1:
    case FamilyId::G2:
    case FamilyId::G3:
        for (int i = 0; i < spec.n_gates; ++i) {
            const auto which = rng.uniform_int(3);
            if (which == 0) {
                const auto [ctl, tgt] = detail::ordered_pair(n, rng);
                c.add(gates::cnot(ctl, tgt));
                continue;
            }
            const int q = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
            if (which == 1) c.add(gates::h(q));
            else if (spec.family == FamilyId::G1) c.add(gates::x(q));
            else if (spec.family == FamilyId::G2) c.add(gates::s(q));
            else c.add(gates::t(q));
        }
        break;
    case FamilyId::MG:
        for (int i = 0; i < spec.n_gates; ++i) {
            const CMatrix a = haar_unitary(2, rng);
            CMatrix b = haar_unitary(2, rng);
            // det(cB) = c^2 det B, so c = sqrt(det A / det B) matches determinants.
            b *= std::sqrt(a.determinant() / b.determinant());
            const auto [q0, q1] = detail::unordered_pair(n, rng);
            c.add(matchgate(a, b, q0, q1));
        }
        break;
    case FamilyId::D2:
    case FamilyId::D3:
    case FamilyId::DN: {
        const int k = spec.family == FamilyId::D2 ? 2 : spec.family == FamilyId::D3 ? 3 : n;
        const GateKind kind = spec.family == FamilyId::D2 ? GateKind::D2 : spec.family == FamilyId::D3 ? GateKind::D3 : GateKind::DN;
        auto subsets = detail::combinations(n, k);
        std::vector<Gate> diag;
        diag.reserve(subsets.size());
        for (auto &s : subsets) {
            CVector ph(static_cast<Eigen::Index>(std::size_t{1} << k));
            for (auto &z : ph) z = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
            diag.push_back(Gate::diagonal(kind, std::move(ph), std::move(s)));
        }
        // Fisher-Yates; the gates commute, only the listing order changes.
        for (std::size_t i = diag.size(); i > 1; --i) std::swap(diag[i - 1], diag[rng.uniform_int(i)]);
        for (auto &g : diag) c.add(std::move(g));
        break;
    }
    }
    return c;
}

// ---- JSON ------------------------------------------------------------------

inline bool is_named_gate(GateKind k) {
    return k == GateKind::H || k == GateKind::X || k == GateKind::S || k == GateKind::T || k == GateKind::CNOT;
}

inline nlohmann::json circuit_to_json(const Circuit &c) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &g : c.gates()) {
        nlohmann::json jg;
        jg["label"] = std::string(g.label());
        jg["targets"] = g.targets();
        if (g.angle()) jg["angle"] = *g.angle();
        if (!is_named_gate(g.kind())) {
            const CMatrix m = g.matrix();
            nlohmann::json entries = nlohmann::json::array();
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
            jg["matrix"] = std::move(entries);
        }
        gates.push_back(std::move(jg));
    }
    return {{"n_qubits", c.n_qubits()}, {"gates", std::move(gates)}};
}

inline Circuit circuit_from_json(const nlohmann::json &j) {
    Circuit c(j.at("n_qubits").get<int>());
    for (const auto &jg : j.at("gates")) {
        const GateKind kind = gate_kind_from_string(jg.at("label").get<std::string>());
        auto targets = jg.at("targets").get<std::vector<int>>();
        if (is_named_gate(kind)) {
            c.add(gates::named(kind, targets));
            continue;
        }
        const auto &entries = jg.at("matrix");
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
        if (static_cast<Eigen::Index>(entries.size()) != d * d)
            throw std::invalid_argument("circuit_from_json: matrix has wrong number of entries");
        CMatrix m(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index jj = 0; jj < d; ++jj) {
                const auto &e = entries[static_cast<std::size_t>(i * d + jj)];
                m(i, jj) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        std::optional<double> angle;
        if (jg.contains("angle")) angle = jg["angle"].get<double>();
        if (m.isDiagonal(0.0) && kind != GateKind::RZ)
            c.add(Gate::diagonal(kind, m.diagonal(), std::move(targets)));
        else
            c.add(Gate(kind, m, std::move(targets), angle));
    }
    return c;
}

} // namespace qrc
