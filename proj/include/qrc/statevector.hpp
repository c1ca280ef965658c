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

// Dense pure-state simulation. Basis ordering: qubit 0 is the most
// significant bit of the amplitude index, i.e. |q0 q1 ... q_{n-1}>.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrc/common.hpp"

namespace qrc {

class Gate;
class Circuit;

class State {
  public:
    /// Wraps an amplitude vector; throws unless it has length 2^n and unit norm.
    State(int n_qubits, CVector amps) : n_(n_qubits), amps_(std::move(amps)) {
        if (n_ < 1 || n_ > kMaxQubits)
            throw std::invalid_argument("State: n_qubits must be in [1, 12], got " + std::to_string(n_));
        if (static_cast<std::size_t>(amps_.size()) != dim_of(n_))
            throw std::invalid_argument("State: amplitude vector has length " + std::to_string(amps_.size()) +
                                        ", expected 2^" + std::to_string(n_));
        if (std::abs(amps_.norm() - 1.0) > 1e-8)
            throw std::invalid_argument("State: amplitude vector is not normalized");
    }

    /// Rescales `amps` to unit norm first.
    static State normalized(int n_qubits, CVector amps) {
        const double nrm = amps.norm();
        if (!(nrm > 0.0)) throw std::invalid_argument("State: zero vector cannot be normalized");
        amps /= nrm;
        return State(n_qubits, std::move(amps));
    }

    int n_qubits() const { return n_; }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const CVector &amps() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
    double norm() const { return amps_.norm(); }

    bool operator==(const State &) const = default;

  private:
    friend State apply_gate(State, const Gate &);
    friend State apply_circuit(State, const Circuit &);
    int n_;
    CVector amps_;
};

inline State zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::invalid_argument("zero_state: n_qubits must be in [1, 12], got " + std::to_string(n_qubits));
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)));
    amps[0] = 1.0;
    return State(n_qubits, std::move(amps));
}

inline State basis_state(int n_qubits, std::size_t index) {
    if (index >= dim_of(n_qubits)) throw std::out_of_range("basis_state: index out of range");
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)));
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return State(n_qubits, std::move(amps));
}

enum class GateKind { H, X, S, T, CNOT, MG, D2, D3, DN, RZ, Unitary };

inline std::string_view to_string(GateKind k) {
    switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::S: return "S";
    case GateKind::T: return "T";
    case GateKind::CNOT: return "CNOT";
    case GateKind::MG: return "MG";
    case GateKind::D2: return "D2";
    case GateKind::D3: return "D3";
    case GateKind::DN: return "DN";
    case GateKind::RZ: return "RZ";
    case GateKind::Unitary: return "U";
    }
    return "?";
}

inline GateKind gate_kind_from_string(std::string_view s) {
    for (auto k : {GateKind::H, GateKind::X, GateKind::S, GateKind::T, GateKind::CNOT, GateKind::MG, GateKind::D2,
                   GateKind::D3, GateKind::DN, GateKind::RZ, GateKind::Unitary})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown gate label '" + std::string(s) + "'");
}

/// Closest unitary in Frobenius norm (polar factor U V^dagger of the SVD).
inline CMatrix polar_unitary(const CMatrix &m) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

/// Immutable unitary acting on an ordered list of target qubits.
///
/// targets[0] is the most significant bit of the gate's local index, so a
/// CNOT with targets {c, t} uses the textbook 4x4 matrix. Unitarity is
/// validated once here; diagonal gates keep only their diagonal.
class Gate {
  public:
    Gate(GateKind kind, CMatrix matrix, std::vector<int> targets, std::optional<double> angle = std::nullopt)
        : kind_(kind), matrix_(std::move(matrix)), targets_(std::move(targets)), angle_(angle) {
        check_targets();
        if (matrix_.rows() != matrix_.cols() ||
            static_cast<std::size_t>(matrix_.rows()) != (std::size_t{1} << targets_.size()))
            throw std::invalid_argument("Gate: matrix dimension does not match 2^|targets|");
        diagonal_ = matrix_.isDiagonal(0.0);
        if (diagonal_) {
            diag_ = matrix_.diagonal();
            for (const auto &z : diag_)
                if (std::abs(std::abs(z) - 1.0) > kUnitaryTol) throw std::invalid_argument("Gate: matrix is not unitary");
        } else if (unitarity_defect(matrix_) > kUnitaryTol) {
            throw std::invalid_argument("Gate: matrix is not unitary (defect " +
                                        std::to_string(unitarity_defect(matrix_)) + ")");
        }
    }

    /// Diagonal gate from its phases; the dense matrix is never formed.
    static Gate diagonal(GateKind kind, CVector phases, std::vector<int> targets) {
        return Gate(kind, std::move(phases), std::move(targets), DiagonalTag{});
    }

    GateKind kind() const { return kind_; }
    std::string_view label() const { return to_string(kind_); }
    const std::vector<int> &targets() const { return targets_; }
    std::optional<double> angle() const { return angle_; }
    bool is_diagonal() const { return diagonal_; }
    const CVector &diagonal_entries() const { return diag_; }
    std::size_t dim() const { return std::size_t{1} << targets_.size(); }

    /// Dense matrix (materialized on demand for diagonal gates).
    CMatrix matrix() const {
        if (diagonal_ && matrix_.size() == 0) return diag_.asDiagonal();
        return matrix_;
    }

  private:
    struct DiagonalTag {};
    Gate(GateKind kind, CVector phases, std::vector<int> targets, DiagonalTag)
        : kind_(kind), targets_(std::move(targets)), diagonal_(true), diag_(std::move(phases)) {
        check_targets();
        if (static_cast<std::size_t>(diag_.size()) != (std::size_t{1} << targets_.size()))
            throw std::invalid_argument("Gate: diagonal length does not match 2^|targets|");
        for (const auto &z : diag_)
            if (std::abs(std::abs(z) - 1.0) > kUnitaryTol) throw std::invalid_argument("Gate: diagonal entry off the unit circle");
    }

    void check_targets() const {
        if (targets_.empty() || targets_.size() > static_cast<std::size_t>(kMaxQubits))
            throw std::invalid_argument("Gate: needs 1..12 targets");
        for (std::size_t i = 0; i < targets_.size(); ++i) {
            if (targets_[i] < 0) throw std::invalid_argument("Gate: negative target index");
            for (std::size_t j = 0; j < i; ++j)
                if (targets_[i] == targets_[j]) throw std::invalid_argument("Gate: duplicate target " + std::to_string(targets_[i]));
        }
    }

    GateKind kind_;
    CMatrix matrix_;
    std::vector<int> targets_;
    std::optional<double> angle_;
    bool diagonal_ = false;
    CVector diag_;
};

namespace gates {

inline Gate h(int q) {
    const double r = std::numbers::sqrt2 / 2.0;
    CMatrix m(2, 2);
    m << r, r, r, -r;
    return Gate(GateKind::H, m, {q});
}

inline Gate x(int q) {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return Gate(GateKind::X, m, {q});
}

inline Gate s(int q) { return Gate(GateKind::S, CVector{{1.0, Complex(0, 1)}}.asDiagonal().toDenseMatrix(), {q}); }

inline Gate t(int q) {
    return Gate(GateKind::T, CVector{{1.0, std::polar(1.0, std::numbers::pi / 4)}}.asDiagonal().toDenseMatrix(), {q});
}

inline Gate cnot(int control, int target) {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return Gate(GateKind::CNOT, m, {control, target});
}

/// exp(-i theta Z / 2)
inline Gate rz(double theta, int q) {
    CVector d{{std::polar(1.0, -theta / 2), std::polar(1.0, theta / 2)}};
    return Gate(GateKind::RZ, d.asDiagonal().toDenseMatrix(), {q}, theta);
}

/// Rebuilds a named gate from its label (used when deserializing).
inline Gate named(GateKind kind, const std::vector<int> &targets) {
    switch (kind) {
    case GateKind::H: return h(targets.at(0));
    case GateKind::X: return x(targets.at(0));
    case GateKind::S: return s(targets.at(0));
    case GateKind::T: return t(targets.at(0));
    case GateKind::CNOT: return cnot(targets.at(0), targets.at(1));
    default: throw std::invalid_argument("gate '" + std::string(to_string(kind)) + "' needs an explicit matrix");
    }
}

} // namespace gates

class Circuit {
  public:
    explicit Circuit(int n_qubits) : n_(n_qubits) {
        if (n_ < 1 || n_ > kMaxQubits) throw std::invalid_argument("Circuit: n_qubits must be in [1, 12]");
    }

    Circuit &add(Gate g) {
        for (int t : g.targets())
            if (t >= n_)
                throw std::invalid_argument("Circuit: target " + std::to_string(t) + " out of range for " +
                                            std::to_string(n_) + " qubits");
        gates_.push_back(std::move(g));
        return *this;
    }

    int n_qubits() const { return n_; }
    const std::vector<Gate> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

  private:
    int n_;
    std::vector<Gate> gates_;
};

namespace detail {

// Amplitude-index bit that holds qubit q.
inline std::size_t bit_of(int n_qubits, int q) { return std::size_t{1} << (n_qubits - 1 - q); }

// Spreads the bits of `i` over the positions not in `sorted_bits` (ascending).
inline std::size_t insert_zero_bits(std::size_t i, std::span<const int> sorted_bits) {
    for (int b : sorted_bits) {
        const std::size_t low = i & ((std::size_t{1} << b) - 1);
        i = ((i >> b) << (b + 1)) | low;
    }
    return i;
}

inline void apply_inplace(CVector &amps, int n_qubits, const Gate &g) {
    const auto &tg = g.targets();
    for (int t : tg)
        if (t >= n_qubits)
            throw std::invalid_argument("apply_gate: target " + std::to_string(t) + " out of range for " +
                                        std::to_string(n_qubits) + " qubits");
    const std::size_t k = tg.size();
    const std::size_t d = std::size_t{1} << k;
    // offsets[l]: amplitude-index offset of local basis state l.
    std::vector<std::size_t> offsets(d, 0);
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t j = 0; j < k; ++j)
            if (l & (std::size_t{1} << (k - 1 - j))) offsets[l] |= bit_of(n_qubits, tg[j]);
    std::vector<int> bits(k);
    for (std::size_t j = 0; j < k; ++j) bits[j] = n_qubits - 1 - tg[j];
    std::sort(bits.begin(), bits.end());
    const std::size_t groups = dim_of(n_qubits) >> k;

    if (g.is_diagonal()) {
        const CVector &dg = g.diagonal_entries();
        for (std::size_t grp = 0; grp < groups; ++grp) {
            const std::size_t base = insert_zero_bits(grp, bits);
            for (std::size_t l = 0; l < d; ++l) amps[static_cast<Eigen::Index>(base + offsets[l])] *= dg[static_cast<Eigen::Index>(l)];
        }
        return;
    }
    const CMatrix m = g.matrix();
    if (k == 1) {
        const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
        const std::size_t off = offsets[1];
        for (std::size_t grp = 0; grp < groups; ++grp) {
            const auto i0 = static_cast<Eigen::Index>(insert_zero_bits(grp, bits));
            const auto i1 = i0 + static_cast<Eigen::Index>(off);
            const Complex a0 = amps[i0], a1 = amps[i1];
            amps[i0] = m00 * a0 + m01 * a1;
            amps[i1] = m10 * a0 + m11 * a1;
        }
        return;
    }
    CVector in(static_cast<Eigen::Index>(d)), out(static_cast<Eigen::Index>(d));
    for (std::size_t grp = 0; grp < groups; ++grp) {
        const std::size_t base = insert_zero_bits(grp, bits);
        for (std::size_t l = 0; l < d; ++l) in[static_cast<Eigen::Index>(l)] = amps[static_cast<Eigen::Index>(base + offsets[l])];
        out.noalias() = m * in;
        for (std::size_t l = 0; l < d; ++l) amps[static_cast<Eigen::Index>(base + offsets[l])] = out[static_cast<Eigen::Index>(l)];
    }
}

} // namespace detail

[[nodiscard]] inline State apply_gate(State state, const Gate &gate) {
    detail::apply_inplace(state.amps_, state.n_, gate);
    return state;
}

[[nodiscard]] inline State apply_circuit(State state, const Circuit &circuit) {
    if (circuit.n_qubits() != state.n_)
        throw std::invalid_argument("apply_circuit: circuit has " + std::to_string(circuit.n_qubits()) +
                                    " qubits, state has " + std::to_string(state.n_));
    for (const auto &g : circuit.gates()) detail::apply_inplace(state.amps_, state.n_, g);
    return state;
}

inline std::vector<double> probabilities(const State &state) {
    std::vector<double> p(state.dim());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state[i]);
    return p;
}

/// Full 2^n x 2^n unitary; column k is the circuit applied to |k>.
inline CMatrix circuit_unitary(const Circuit &circuit) {
    const int n = circuit.n_qubits();
    if (n > 10) throw std::invalid_argument("circuit_unitary: refusing to build a dense unitary beyond 10 qubits");
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    CMatrix u(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        CVector col = CVector::Zero(d);
        col[k] = 1.0;
        for (const auto &g : circuit.gates()) detail::apply_inplace(col, n, g);
        u.col(k) = col;
    }
    return u;
}

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {}

    /// "XIZY" -> X on qubit 0, ..., Y on qubit 3.
    static PauliString parse(std::string_view text) {
        std::vector<Pauli> ops;
        ops.reserve(text.size());
        for (char c : text) {
            switch (c) {
            case 'I': case 'X': case 'Y': case 'Z': ops.push_back(static_cast<Pauli>(c)); break;
            default: throw std::invalid_argument(std::string("PauliString: invalid character '") + c + "'");
            }
        }
        if (ops.empty()) throw std::invalid_argument("PauliString: empty string");
        return PauliString(std::move(ops));
    }

    /// Single-qubit operator `p` on `qubit`, identity elsewhere.
    static PauliString single(int n_qubits, int qubit, Pauli p) {
        std::vector<Pauli> ops(static_cast<std::size_t>(n_qubits), Pauli::I);
        ops.at(static_cast<std::size_t>(qubit)) = p;
        return PauliString(std::move(ops));
    }

    int n_qubits() const { return static_cast<int>(ops_.size()); }
    Pauli operator[](std::size_t q) const { return ops_[q]; }
    const std::vector<Pauli> &ops() const { return ops_; }

    std::string str() const {
        std::string s;
        for (Pauli p : ops_) s.push_back(static_cast<char>(p));
        return s;
    }

    auto operator<=>(const PauliString &) const = default;

  private:
    std::vector<Pauli> ops_;
};

namespace detail {

struct PauliMasks {
    std::size_t flip = 0;  // X or Y
    std::size_t phase = 0; // Y or Z
    int n_y = 0;
};

inline PauliMasks pauli_masks(const PauliString &p) {
    PauliMasks m;
    const int n = p.n_qubits();
    for (int q = 0; q < n; ++q) {
        const std::size_t b = bit_of(n, q);
        switch (p[static_cast<std::size_t>(q)]) {
        case Pauli::X: m.flip |= b; break;
        case Pauli::Y: m.flip |= b; m.phase |= b; ++m.n_y; break;
        case Pauli::Z: m.phase |= b; break;
        case Pauli::I: break;
        }
    }
    return m;
}

// i^k for k mod 4.
inline Complex i_pow(int k) {
    static constexpr std::array<std::pair<double, double>, 4> tbl{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    const auto &[re, im] = tbl[static_cast<std::size_t>(((k % 4) + 4) % 4)];
    return {re, im};
}

} // namespace detail

/// <psi|P|psi>. P|i> = i^{#Y} (-1)^{popcount(i & phase)} |i ^ flip>.
inline double expectation_pauli(const State &state, const PauliString &p) {
    if (p.n_qubits() != state.n_qubits())
        throw std::invalid_argument("expectation_pauli: Pauli string length " + std::to_string(p.n_qubits()) +
                                    " does not match " + std::to_string(state.n_qubits()) + " qubits");
    const auto m = detail::pauli_masks(p);
    const CVector &a = state.amps();
    Complex acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double sign = (std::popcount(i & m.phase) & 1) ? -1.0 : 1.0;
        acc += std::conj(a[static_cast<Eigen::Index>(i ^ m.flip)]) * sign * a[static_cast<Eigen::Index>(i)];
    }
    return (detail::i_pow(m.n_y) * acc).real();
}

/// Dense matrix of a Pauli string (qubit 0 leftmost in the Kronecker product).
inline CMatrix pauli_matrix(const PauliString &p) {
    const int n = p.n_qubits();
    if (n > kMaxQubits) throw std::invalid_argument("pauli_matrix: too many qubits");
    const auto m = detail::pauli_masks(p);
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    CMatrix out = CMatrix::Zero(d, d);
    const Complex ph = detail::i_pow(m.n_y);
    for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
        const double sign = (std::popcount(i & m.phase) & 1) ? -1.0 : 1.0;
        out(static_cast<Eigen::Index>(i ^ m.flip), static_cast<Eigen::Index>(i)) = ph * sign;
    }
    return out;
}

} // namespace qrc
