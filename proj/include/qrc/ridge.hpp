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

// Linear readout trained by L2-regularized least squares:
//
//   minimize (1/N) sum_i (w . x_i + b - y_i)^2 + alpha ||w||^2
//
// The intercept b is not penalized. Centering X and y removes it from the
// normal equations, which become (Xc^T Xc + alpha N I) w = Xc^T yc.

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "qrc/common.hpp"

namespace qrc {

inline constexpr double kDefaultAlpha = 1e-7;

struct RidgeModel {
    RVector weights;
    double intercept = 0.0;
    double alpha = kDefaultAlpha;

    double predict(const RVector &x) const {
        if (x.size() != weights.size()) throw std::invalid_argument("RidgeModel::predict: feature length mismatch");
        return weights.dot(x) + intercept;
    }

    RVector predict_all(const RMatrix &x) const {
        if (x.cols() != weights.size()) throw std::invalid_argument("RidgeModel::predict: feature length mismatch");
        return (x * weights).array() + intercept;
    }
};

inline RidgeModel fit_ridge(const RMatrix &x, const RVector &y, double alpha = kDefaultAlpha) {
    const Eigen::Index n = x.rows();
    if (n < 2) throw std::invalid_argument("fit_ridge: need at least two samples");
    if (y.size() != n) throw std::invalid_argument("fit_ridge: target length mismatch");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("fit_ridge: alpha must be positive");
    if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("fit_ridge: non-finite input");

    const RVector x_mean = x.colwise().mean();
    const double y_mean = y.mean();
    const RMatrix xc = x.rowwise() - x_mean.transpose();
    const RVector yc = y.array() - y_mean;

    RMatrix a = xc.transpose() * xc;
    a.diagonal().array() += alpha * static_cast<double>(n);
    Eigen::LLT<RMatrix> llt(a);
    if (llt.info() != Eigen::Success) throw std::runtime_error("fit_ridge: normal equations not positive definite");

    RidgeModel m;
    m.alpha = alpha;
    m.weights = llt.solve(xc.transpose() * yc);
    if (!m.weights.allFinite()) throw std::runtime_error("fit_ridge: non-finite weights");
    m.intercept = y_mean - x_mean.dot(m.weights);
    return m;
}

inline double mean_squared_error(const RVector &pred, const RVector &y) {
    if (pred.size() != y.size() || y.size() == 0) throw std::invalid_argument("mean_squared_error: length mismatch");
    return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

/// Training objective at an arbitrary (w, b).
inline double ridge_objective(const RVector &w, double b, const RMatrix &x, const RVector &y, double alpha) {
    const RVector pred = (x * w).array() + b;
    return mean_squared_error(pred, y) + alpha * w.squaredNorm();
}

inline double ridge_objective(const RidgeModel &m, const RMatrix &x, const RVector &y) {
    return ridge_objective(m.weights, m.intercept, x, y, m.alpha);
}

} // namespace qrc
