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

// Dense Hermitian eigensolver: Householder reduction to a Hermitian
// tridiagonal, diagonal phase scaling to a real symmetric tridiagonal, then
// implicit QL with Wilkinson-style shifts. Adequate up to dim 4096.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrc/common.hpp"

namespace qrc {

struct Eigensystem {
    RVector values; // ascending
    CMatrix vectors; // column j pairs with values[j]
};

inline constexpr std::size_t kMaxEigenDim = 4096;

namespace detail {

// Makes the first entry with |a| > tol real and positive.
inline void fix_phase_first_nonzero(Eigen::Ref<CVector> v, double tol = 1e-10) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > tol) {
            v *= std::conj(v[i]) / std::abs(v[i]);
            return;
        }
    }
}

// Lexicographic order on (re, im) entries; differences below tol are ties.
inline bool lex_less(const CVector &a, const CVector &b, double tol = 1e-10) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].real() - b[i].real()) > tol) return a[i].real() < b[i].real();
        if (std::abs(a[i].imag() - b[i].imag()) > tol) return a[i].imag() < b[i].imag();
    }
    return false;
}

// Implicit QL on a real symmetric tridiagonal (diag d, sub-diagonal e with
// e[i] coupling i and i+1). Rotations are accumulated into z's columns.
inline void tridiagonal_ql(std::vector<double> &d, std::vector<double> &e, RMatrix &z) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    e.resize(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(n - 1)] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    const int max_iter = 60;
    auto D = [&](int i) -> double & { return d[static_cast<std::size_t>(i)]; };
    auto E = [&](int i) -> double & { return e[static_cast<std::size_t>(i)]; };
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(D(m)) + std::abs(D(m + 1));
                if (std::abs(E(m)) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iter) throw ConvergenceError("tridiagonal_ql: no convergence for eigenvalue " + std::to_string(l), iter);
                double g = (D(l + 1) - D(l)) / (2.0 * E(l));
                double r = std::hypot(g, 1.0);
                g = D(m) - D(l) + E(l) / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * E(i);
                    const double b = c * E(i);
                    r = std::hypot(f, g);
                    E(i + 1) = r;
                    if (r == 0.0) {
                        D(i + 1) -= p;
                        E(m) = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = D(i + 1) - p;
                    r = (D(i) - g) * s + 2.0 * c * b;
                    p = s * r;
                    D(i + 1) = g + p;
                    g = c * r - b;
                    auto zi = z.col(i);
                    auto zi1 = z.col(i + 1);
                    for (Eigen::Index k = 0; k < z.rows(); ++k) {
                        f = zi1[k];
                        zi1[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                D(l) -= p;
                E(l) = g;
                E(m) = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

/// All eigenpairs of a Hermitian matrix, eigenvalues ascending.
///
/// Each eigenvector has its first nonzero amplitude made real positive, and
/// vectors inside a degenerate cluster are ordered lexicographically, so the
/// output is a deterministic function of the input.
inline Eigensystem hermitian_eigensystem(const CMatrix &h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eigensystem: matrix is not square");
    const Eigen::Index n = h.rows();
    if (n == 0) throw std::invalid_argument("hermitian_eigensystem: empty matrix");
    if (static_cast<std::size_t>(n) > kMaxEigenDim)
        throw std::invalid_argument("hermitian_eigensystem: dimension " + std::to_string(n) + " exceeds 4096");
    if (hermiticity_defect(h) > 1e-9) throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian");

    CMatrix a = 0.5 * (h + h.adjoint());
    CMatrix q = CMatrix::Identity(n, n);

    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index m = n - k - 1;
        CVector v = a.col(k).tail(m);
        const double xnorm = v.norm();
        if (xnorm == 0.0 || v.tail(m - 1).norm() == 0.0) continue;
        const Complex x0 = v[0];
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
        const Complex alpha = -phase * xnorm;
        v[0] -= alpha;
        const double vnorm = v.norm();
        if (vnorm == 0.0) continue;
        v /= vnorm;

        auto b = a.bottomRightCorner(m, m);
        const CVector p = b * v;
        const Complex kk = v.dot(p); // v^dagger p, real for Hermitian b
        const CVector w = p - kk.real() * v;
        b.noalias() -= 2.0 * (v * w.adjoint() + w * v.adjoint());

        a.col(k).tail(m).setZero();
        a(k + 1, k) = alpha;
        a.row(k).tail(m) = a.col(k).tail(m).adjoint();

        auto qb = q.rightCols(m);
        const CVector qv = qb * v;
        qb.noalias() -= 2.0 * qv * v.adjoint();
    }

    // Scale by diagonal phases so the sub-diagonal becomes real non-negative.
    std::vector<double> diag(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n), 0.0);
    CVector phase(n);
    phase[0] = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = a(i, i).real();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Complex ei = a(i + 1, i);
        const double r = std::abs(ei);
        off[static_cast<std::size_t>(i)] = r;
        phase[i + 1] = r > 0.0 ? phase[i] * ei / r : phase[i];
    }

    RMatrix z = RMatrix::Identity(n, n);
    detail::tridiagonal_ql(diag, off, z);

    CMatrix qd = q * phase.asDiagonal();
    CMatrix vecs = qd * z.cast<Complex>();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return diag[static_cast<std::size_t>(x)] < diag[static_cast<std::size_t>(y)]; });

    Eigensystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values[j] = diag[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
        out.vectors.col(j) = vecs.col(order[static_cast<std::size_t>(j)]);
        out.vectors.col(j).normalize();
        detail::fix_phase_first_nonzero(out.vectors.col(j));
    }

    // Degenerate clusters: deterministic lexicographic order.
    const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
    const double tol = 1e-9 * scale;
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index end = start + 1;
        while (end < n && out.values[end] - out.values[end - 1] <= tol) ++end;
        if (end - start > 1) {
            std::vector<CVector> cols;
            for (Eigen::Index j = start; j < end; ++j) cols.emplace_back(out.vectors.col(j));
            std::stable_sort(cols.begin(), cols.end(), [](const CVector &x, const CVector &y) { return detail::lex_less(x, y); });
            for (Eigen::Index j = start; j < end; ++j) out.vectors.col(j) = cols[static_cast<std::size_t>(j - start)];
        }
        start = end;
    }
    return out;
}

/// The k lowest eigenpairs, eigenvalues ascending.
inline Eigensystem lowest_eigenpairs(const CMatrix &h, int k) {
    if (k < 1 || k > h.rows())
        throw std::invalid_argument("lowest_eigenpairs: k must be in [1, dim], got " + std::to_string(k));
    Eigensystem full = hermitian_eigensystem(h);
    return {full.values.head(k), full.vectors.leftCols(k)};
}

} // namespace qrc
