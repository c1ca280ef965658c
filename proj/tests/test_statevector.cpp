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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "qrc/statevector.hpp"
#include "test_helpers.hpp"

using namespace qrc;
using qrc::testing::dense_product;
using qrc::testing::embed_dense;
using qrc::testing::max_abs_diff;

namespace {

Circuit random_mixed_circuit(int n, int n_gates, std::mt19937_64 &rng) {
    Circuit c(n);
    std::uniform_int_distribution<int> q(0, n - 1), kind(0, 4);
    for (int i = 0; i < n_gates; ++i) {
        int a = q(rng), b = q(rng);
        while (b == a) b = q(rng);
        switch (kind(rng)) {
        case 0: c.add(gates::h(a)); break;
        case 1: c.add(gates::cnot(a, b)); break;
        case 2: c.add(gates::rz(0.37 * (i + 1), a)); break;
        case 3: c.add(Gate(GateKind::Unitary, qrc::testing::random_unitary(4, rng), {a, b})); break;
        default: {
            int cc = q(rng);
            while (cc == a || cc == b) cc = q(rng);
            c.add(Gate(GateKind::Unitary, qrc::testing::random_unitary(8, rng), {b, cc, a}));
        }
        }
    }
    return c;
}

} // namespace

TEST(zero_state, basis_vector) {
    auto s1 = zero_state(1);
    ASSERT_EQ(s1.dim(), 2u);
    EXPECT_EQ(s1[0], Complex(1));
    EXPECT_EQ(s1[1], Complex(0));
    auto s3 = zero_state(3);
    ASSERT_EQ(s3.dim(), 8u);
    EXPECT_EQ(s3[0], Complex(1));
    EXPECT_DOUBLE_EQ(zero_state(10).norm(), 1.0);
    EXPECT_THROW(zero_state(0), std::invalid_argument);
    EXPECT_THROW(zero_state(13), std::invalid_argument);
}

TEST(State, rejects_bad_amplitudes) {
    EXPECT_THROW(State(2, CVector::Zero(3)), std::invalid_argument);
    EXPECT_THROW(State(1, CVector::Ones(2)), std::invalid_argument);
    EXPECT_NO_THROW(State::normalized(1, CVector::Ones(2)));
}

TEST(apply_gate, hadamard_and_cnot) {
    auto s = apply_gate(zero_state(1), gates::h(0));
    EXPECT_NEAR(s[0].real(), 1 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(s[1].real(), 1 / std::numbers::sqrt2, 1e-15);

    // |10> has index 2 (qubit 0 is the most significant bit).
    auto t = apply_gate(basis_state(2, 2), gates::cnot(0, 1));
    EXPECT_EQ(t[3], Complex(1));
    EXPECT_EQ(t[2], Complex(0));
}

TEST(apply_gate, rejects_bad_targets_and_matrices) {
    EXPECT_THROW(apply_gate(zero_state(2), gates::h(2)), std::invalid_argument);
    EXPECT_THROW(gates::cnot(1, 1), std::invalid_argument);
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 1) = 1e-6;
    EXPECT_THROW(Gate(GateKind::Unitary, bad, {0}), std::invalid_argument);
    EXPECT_THROW(Gate(GateKind::Unitary, CMatrix::Identity(4, 4), {0}), std::invalid_argument);
}

TEST(apply_gate, matches_dense_oracle_on_random_five_qubit_circuit) {
    std::mt19937_64 rng(11);
    const Circuit c = random_mixed_circuit(5, 30, rng);
    const State in = qrc::testing::random_state(5, rng);
    const State out = apply_circuit(in, c);
    const CVector expected = dense_product(c) * in.amps();
    EXPECT_LE((out.amps() - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(apply_gate, preserves_norm) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Circuit c = random_mixed_circuit(6, 20, rng);
        State s = qrc::testing::random_state(6, rng);
        for (const auto &g : c.gates()) {
            s = apply_gate(s, g);
            ASSERT_LE(std::abs(s.norm() - 1.0), 1e-10);
        }
    }
}

TEST(apply_circuit, empty_and_involution) {
    std::mt19937_64 rng(3);
    const State s = qrc::testing::random_state(3, rng);
    EXPECT_EQ(apply_circuit(s, Circuit(3)), s);
    Circuit hh(3);
    hh.add(gates::h(0)).add(gates::h(0));
    EXPECT_LE((apply_circuit(s, hh).amps() - s.amps()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(apply_circuit(s, Circuit(2)), std::invalid_argument);
    EXPECT_THROW(Circuit(2).add(gates::h(3)), std::invalid_argument);
}

TEST(apply_gate, diagonal_gate_on_full_register) {
    std::mt19937_64 rng(8);
    CVector ph(16);
    for (Eigen::Index i = 0; i < 16; ++i) ph[i] = std::polar(1.0, 0.3 * static_cast<double>(i * i));
    const Gate g = Gate::diagonal(GateKind::DN, ph, {2, 0, 3, 1});
    const State s = qrc::testing::random_state(4, rng);
    const CVector expected = embed_dense(g, 4) * s.amps();
    EXPECT_LE((apply_gate(s, g).amps() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(expectation_pauli, basic_values) {
    EXPECT_DOUBLE_EQ(expectation_pauli(zero_state(3), PauliString::parse("ZII")), 1.0);
    const State plus = apply_gate(zero_state(1), gates::h(0));
    EXPECT_NEAR(expectation_pauli(plus, PauliString::parse("X")), 1.0, 1e-15);
    EXPECT_NEAR(expectation_pauli(plus, PauliString::parse("Y")), 0.0, 1e-15);
    const State plus_i = apply_gate(plus, gates::s(0));
    EXPECT_NEAR(expectation_pauli(plus_i, PauliString::parse("Y")), 1.0, 1e-15);
    EXPECT_THROW(expectation_pauli(zero_state(2), PauliString::parse("Z")), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
}

TEST(expectation_pauli, matches_dense_sandwich) {
    std::mt19937_64 rng(21);
    const char ops[] = {'I', 'X', 'Y', 'Z'};
    for (int trial = 0; trial < 40; ++trial) {
        const State s = qrc::testing::random_state(4, rng);
        std::string str;
        for (int q = 0; q < 4; ++q) str.push_back(ops[rng() % 4]);
        const PauliString p = PauliString::parse(str);
        // Kronecker-product oracle, qubit 0 leftmost.
        CMatrix dense = CMatrix::Identity(1, 1);
        for (char c : str) {
            CMatrix m(2, 2);
            switch (c) {
            case 'I': m << 1, 0, 0, 1; break;
            case 'X': m << 0, 1, 1, 0; break;
            case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
            default: m << 1, 0, 0, -1;
            }
            CMatrix next(dense.rows() * 2, dense.cols() * 2);
            for (Eigen::Index i = 0; i < dense.rows(); ++i)
                for (Eigen::Index j = 0; j < dense.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = dense(i, j) * m;
            dense = next;
        }
        const Complex oracle = s.amps().dot(dense * s.amps());
        const double got = expectation_pauli(s, p);
        EXPECT_NEAR(got, oracle.real(), 1e-10) << str;
        EXPECT_LE(std::abs(oracle.imag()), 1e-10);
        EXPECT_LE(std::abs(got), 1.0 + 1e-10);
        EXPECT_LE(max_abs_diff(pauli_matrix(p), dense), 1e-15);
    }
}

TEST(probabilities, sums_to_one) {
    const auto p0 = probabilities(zero_state(1));
    EXPECT_EQ(p0, (std::vector<double>{1.0, 0.0}));
    const auto ph = probabilities(apply_gate(zero_state(1), gates::h(0)));
    EXPECT_NEAR(ph[0], 0.5, 1e-15);
    EXPECT_NEAR(ph[1], 0.5, 1e-15);
    std::mt19937_64 rng(2);
    const auto pr = probabilities(qrc::testing::random_state(3, rng));
    EXPECT_NEAR(std::accumulate(pr.begin(), pr.end(), 0.0), 1.0, 1e-10);
}

TEST(circuit_unitary, named_gates_and_unitarity) {
    Circuit cx(1);
    cx.add(gates::x(0));
    CMatrix xm(2, 2);
    xm << 0, 1, 1, 0;
    EXPECT_EQ(circuit_unitary(cx), xm);

    Circuit cn(2);
    cn.add(gates::cnot(0, 1));
    CMatrix cm = CMatrix::Zero(4, 4);
    cm(0, 0) = cm(1, 1) = cm(2, 3) = cm(3, 2) = 1;
    EXPECT_EQ(circuit_unitary(cn), cm);

    std::mt19937_64 rng(4);
    const Circuit big = random_mixed_circuit(4, 50, rng);
    EXPECT_LE(unitarity_defect(circuit_unitary(big)), 1e-9);
    EXPECT_THROW(circuit_unitary(Circuit(11)), std::invalid_argument);
}
