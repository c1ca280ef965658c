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

// Real-weighted Pauli-sum Hamiltonians and their text format:
//
//   # comment
//   # R= 1.25
//   -0.8105479805373279 IIII
//   0.17218393261915552 ZIII
//
// One term per line, coefficient first. Duplicate strings are merged.

#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qrc/common.hpp"
#include "qrc/parallel.hpp"
#include "qrc/statevector.hpp"

namespace qrc {

struct PauliTerm {
    double coefficient = 0.0;
    PauliString string;
    bool operator==(const PauliTerm &) const = default;
};

class PauliSum {
  public:
    explicit PauliSum(int n_qubits) : n_(n_qubits) {
        if (n_ < 1 || n_ > kMaxQubits) throw std::invalid_argument("PauliSum: n_qubits must be in [1, 12]");
    }

    /// Adds c * P, merging with an existing term on the same string.
    PauliSum &add(double coefficient, const PauliString &p) {
        if (!std::isfinite(coefficient)) throw std::invalid_argument("PauliSum: non-finite coefficient");
        if (p.n_qubits() != n_)
            throw std::invalid_argument("PauliSum: string '" + p.str() + "' has length " + std::to_string(p.n_qubits()) +
                                        ", expected " + std::to_string(n_));
        auto [it, inserted] = index_.try_emplace(p, terms_.size());
        if (inserted) terms_.push_back({coefficient, p});
        else terms_[it->second].coefficient += coefficient;
        return *this;
    }

    PauliSum &add(double coefficient, std::string_view p) { return add(coefficient, PauliString::parse(p)); }

    int n_qubits() const { return n_; }
    const std::vector<PauliTerm> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Grid coordinate bound via a "# R=" metadata line, if any.
    std::optional<double> parameter;

    bool operator==(const PauliSum &o) const { return n_ == o.n_ && terms_ == o.terms_ && parameter == o.parameter; }

  private:
    int n_;
    std::vector<PauliTerm> terms_;
    std::map<PauliString, std::size_t> index_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto *first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

} // namespace detail

/// Parses the Hamiltonian text format. Errors name the offending line.
inline PauliSum parse_pauli_sum(std::string_view text) {
    std::optional<PauliSum> out;
    std::optional<double> parameter;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto fail = [&](const std::string &why) {
        throw std::invalid_argument("parse_pauli_sum: line " + std::to_string(line_no) + ": " + why);
    };
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string_view line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string_view body = detail::trim(line.substr(1));
            if (body.rfind("R=", 0) == 0) {
                auto v = detail::parse_double(detail::trim(body.substr(2)));
                if (!v) fail("malformed '# R=' metadata");
                parameter = *v;
            }
            continue;
        }
        const auto sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos) fail("expected '<coefficient> <pauli string>'");
        const auto coeff = detail::parse_double(line.substr(0, sp));
        if (!coeff || !std::isfinite(*coeff)) fail("invalid coefficient '" + std::string(line.substr(0, sp)) + "'");
        const std::string_view word = detail::trim(line.substr(sp));
        if (word.find_first_of(" \t") != std::string_view::npos) fail("trailing text after Pauli string");
        PauliString p;
        try {
            p = PauliString::parse(word);
        } catch (const std::invalid_argument &e) {
            fail(e.what());
        }
        if (!out) {
            if (p.n_qubits() > kMaxQubits) fail("more than 12 qubits");
            out.emplace(p.n_qubits());
        }
        if (p.n_qubits() != out->n_qubits())
            fail("Pauli string length " + std::to_string(p.n_qubits()) + " differs from " + std::to_string(out->n_qubits()));
        out->add(*coeff, p);
    }
    if (!out) throw std::invalid_argument("parse_pauli_sum: no terms");
    out->parameter = parameter;
    return *out;
}

inline std::string format_pauli_sum(const PauliSum &h) {
    std::string s;
    if (h.parameter) s += "# R= " + format_double(*h.parameter) + "\n";
    for (const auto &t : h.terms()) s += format_double(t.coefficient) + " " + t.string.str() + "\n";
    return s;
}

/// Dense matrix sum_t c_t P_t, built column by column from the Pauli masks.
inline CMatrix pauli_sum_matrix(const PauliSum &h) {
    const int n = h.n_qubits();
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto &t : h.terms()) {
        const auto m = detail::pauli_masks(t.string);
        const Complex ph = t.coefficient * detail::i_pow(m.n_y);
        for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
            const double sign = (std::popcount(i & m.phase) & 1) ? -1.0 : 1.0;
            out(static_cast<Eigen::Index>(i ^ m.flip), static_cast<Eigen::Index>(i)) += sign * ph;
        }
    }
    return out;
}

/// <psi|H|psi>
inline double expectation(const State &s, const PauliSum &h) {
    double e = 0.0;
    for (const auto &t : h.terms()) e += t.coefficient * expectation_pauli(s, t.string);
    return e;
}

/// One-parameter synthetic Hamiltonians used as a self-contained dataset.
///
/// "tfim-chain": sum_i Z_i Z_{i+1} (open chain) + R * sum_i X_i.
inline PauliSum synthetic_family(std::string_view name, int n_qubits, double r) {
    if (name != "tfim-chain") throw std::invalid_argument("synthetic_family: unknown family '" + std::string(name) + "'");
    if (n_qubits < 2) throw std::invalid_argument("synthetic_family: tfim-chain needs at least 2 qubits");
    if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("synthetic_family: R must be finite and non-negative");
    PauliSum h(n_qubits);
    for (int i = 0; i + 1 < n_qubits; ++i) {
        std::vector<Pauli> ops(static_cast<std::size_t>(n_qubits), Pauli::I);
        ops[static_cast<std::size_t>(i)] = ops[static_cast<std::size_t>(i + 1)] = Pauli::Z;
        h.add(1.0, PauliString(ops));
    }
    for (int i = 0; i < n_qubits; ++i) h.add(r, PauliString::single(n_qubits, i, Pauli::X));
    h.parameter = r;
    return h;
}

} // namespace qrc
