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
#include <random>
#include <sstream>

#include "qrc/pipeline.hpp"
#include "test_helpers.hpp"

using namespace qrc;
using qrc::testing::dense_product;
using qrc::testing::gradient_descent_minimum;
using qrc::testing::random_state;

namespace {

CMatrix local_pauli_dense(int n, int q, char p) {
    CMatrix m(2, 2);
    switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1;
    }
    CMatrix out = CMatrix::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        const CMatrix f = (k == q) ? m : CMatrix::Identity(2, 2);
        CMatrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
        out = std::move(next);
    }
    return out;
}

RMatrix gaussian_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64 &rng) {
    std::normal_distribution<double> nd;
    RMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = nd(rng);
    return m;
}

const Dataset &tfim6() {
    static const Dataset d = tfim_dataset(6, 100, 1, default_jobs());
    return d;
}

} // namespace

TEST(Features, IdentityOnZeroState) {
    RVector expected(6);
    expected << 0, 0, 1, 0, 0, 1;
    EXPECT_LT((extract_features(Circuit(2), zero_state(2)) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Features, HadamardOnFirstQubit) {
    Circuit c(2);
    c.add(gates::h(0));
    RVector expected(6);
    expected << 1, 0, 0, 0, 0, 1;
    EXPECT_LT((extract_features(c, zero_state(2)) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Features, MatchesDenseOracle) {
    std::mt19937_64 rng(4);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Circuit c = sample_circuit({FamilyId::G3, 6, 100, seed});
        const State in = random_state(6, rng);
        const RVector f = extract_features(c, in);
        ASSERT_EQ(f.size(), 18);
        const CVector out = dense_product(c) * in.amps();
        for (int q = 0; q < 6; ++q)
            for (int k = 0; k < 3; ++k) {
                const Complex v = out.dot(local_pauli_dense(6, q, "XYZ"[k]) * out);
                EXPECT_NEAR(f[3 * q + k], v.real(), 1e-10);
                EXPECT_LE(std::abs(f[3 * q + k]), 1.0 + 1e-10);
            }
    }
}

TEST(Ridge, RecoversExactLinearModel) {
    std::mt19937_64 rng(1);
    const RMatrix x = gaussian_matrix(40, 9, rng);
    const RVector w = gaussian_matrix(9, 1, rng);
    const RVector y = (x * w).array() + 0.37;
    const auto m = fit_ridge(x, y, 1e-12);
    EXPECT_LT((m.weights - w).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(m.intercept, 0.37, 1e-6);
    EXPECT_LT((m.predict_all(x) - y).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Ridge, ZeroDesignGivesMeanIntercept) {
    RVector y(4);
    y << 1, 2, 3, 6;
    const auto m = fit_ridge(RMatrix::Zero(4, 3), y);
    EXPECT_EQ(m.weights, RVector::Zero(3));
    EXPECT_DOUBLE_EQ(m.intercept, 3.0);
}

TEST(Ridge, MatchesGradientDescentOracle) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const RMatrix x = gaussian_matrix(50, 9, rng);
        const RVector y = gaussian_matrix(50, 1, rng).array() + 2.0;
        const auto m = fit_ridge(x, y, 1e-7);
        const double closed = ridge_objective(m, x, y), iterative = gradient_descent_minimum(x, y, 1e-7);
        EXPECT_LE(std::abs(closed - iterative), 1e-8 * std::abs(iterative));
    }
}

TEST(Ridge, PerturbationNeverLowersObjective) {
    std::mt19937_64 rng(3);
    const RMatrix x = gaussian_matrix(30, 6, rng);
    const RVector y = gaussian_matrix(30, 1, rng);
    const auto m = fit_ridge(x, y, 1e-3);
    const double f0 = ridge_objective(m, x, y);
    for (Eigen::Index k = 0; k <= m.weights.size(); ++k)
        for (double d : {1e-4, -1e-4}) {
            RVector w = m.weights;
            double b = m.intercept;
            (k < w.size() ? w[k] : b) += d;
            EXPECT_GE(ridge_objective(w, b, x, y, m.alpha), f0);
        }
}

TEST(Ridge, TrainingErrorMonotoneInAlpha) {
    std::mt19937_64 rng(5);
    const RMatrix x = gaussian_matrix(40, 12, rng);
    const RVector y = gaussian_matrix(40, 1, rng);
    double prev = -1.0;
    for (double a : {1e-9, 1e-6, 1e-3}) {
        const double mse = mean_squared_error(fit_ridge(x, y, a).predict_all(x), y);
        EXPECT_GE(mse, prev);
        prev = mse;
    }
}

TEST(Ridge, PredictMatchesDotProduct) {
    std::mt19937_64 rng(6);
    RidgeModel m{gaussian_matrix(7, 1, rng), 0.5, 1e-7};
    for (int i = 0; i < 10; ++i) {
        const RVector x = gaussian_matrix(7, 1, rng);
        double ref = 0.5;
        for (int k = 0; k < 7; ++k) ref += m.weights[k] * x[k];
        EXPECT_NEAR(m.predict(x), ref, 1e-12);
    }
    RidgeModel z{RVector::Zero(3), 4.25, 1e-7};
    EXPECT_EQ(z.predict(RVector::Ones(3)), 4.25);
    EXPECT_THROW(m.predict(RVector::Ones(3)), std::invalid_argument);
}

TEST(Ridge, RejectsBadInput) {
    EXPECT_THROW(fit_ridge(RMatrix::Zero(1, 3), RVector::Zero(1)), std::invalid_argument);
    EXPECT_THROW(fit_ridge(RMatrix::Zero(4, 3), RVector::Zero(3)), std::invalid_argument);
    EXPECT_THROW(fit_ridge(RMatrix::Zero(4, 3), RVector::Zero(4), 0.0), std::invalid_argument);
    EXPECT_THROW(fit_ridge(RMatrix::Zero(4, 3), RVector::Zero(4), -1.0), std::invalid_argument);
}

TEST(Experiment, ConstantTargetGivesZeroError) {
    Dataset d = tfim6();
    for (auto &r : d.records) r.target = 1.25;
    ExperimentConfig cfg;
    cfg.reservoir = ReservoirKind::Identity;
    cfg.n_reservoirs = 1;
    const auto r = run_experiment(cfg, d);
    ASSERT_EQ(r.n_ok, 1);
    EXPECT_LT(r.mean_mse, 1e-20);
}

TEST(Experiment, DeterministicAcrossRunsAndThreads) {
    ExperimentConfig cfg;
    cfg.family = FamilyId::G3;
    cfg.n_gates = 50;
    cfg.n_reservoirs = 8;
    cfg.base_seed = 31;
    const auto a = run_experiment(cfg, tfim6());
    cfg.jobs = 4;
    const auto b = run_experiment(cfg, tfim6());
    EXPECT_EQ(a.per_seed_mse, b.per_seed_mse);
    EXPECT_EQ(a.seeds.front(), 31u);
    EXPECT_EQ(a.seeds.back(), 38u);
    EXPECT_GE(a.mean_mse, *std::min_element(a.per_seed_mse.begin(), a.per_seed_mse.end()));
    EXPECT_LE(a.mean_mse, *std::max_element(a.per_seed_mse.begin(), a.per_seed_mse.end()));
}

TEST(Experiment, SeedReusesOneCircuitForAllRecords) {
    ExperimentConfig cfg;
    cfg.family = FamilyId::MG;
    cfg.n_gates = 20;
    const Circuit c = build_reservoir(cfg, 6, 9);
    const RMatrix x = feature_matrix(tfim6(), c);
    EXPECT_EQ(x.row(5), extract_features(sample_circuit({FamilyId::MG, 6, 20, 9}), tfim6().records[5].ground_state).transpose());
}

TEST(Experiment, G3OutperformsG1AtTwoHundredGates) {
    ExperimentConfig cfg;
    cfg.n_reservoirs = 50;
    cfg.n_gates = 200;
    cfg.jobs = default_jobs();
    cfg.family = FamilyId::G3;
    const auto g3 = run_experiment(cfg, tfim6());
    cfg.family = FamilyId::G1;
    const auto g1 = run_experiment(cfg, tfim6());
    EXPECT_EQ(g3.n_ok, 50);
    EXPECT_LT(g3.mean_mse, g1.mean_mse);
}

TEST(Experiment, RequiresSplitAndValidConfig) {
    Dataset d = tfim6();
    ExperimentConfig cfg;
    cfg.n_reservoirs = 0;
    EXPECT_THROW(run_experiment(cfg, d), std::invalid_argument);
    cfg.n_reservoirs = 1;
    d.test.clear();
    EXPECT_THROW(run_experiment(cfg, d), std::invalid_argument);
}

TEST(Experiment, CsvAndSummaryFormat) {
    ExperimentConfig cfg;
    cfg.family = FamilyId::D2;
    cfg.dataset = "tfim6";
    cfg.n_reservoirs = 3;
    cfg.base_seed = 5;
    const auto r = run_experiment(cfg, tfim6());
    EXPECT_EQ(cfg.file_stem(), "tfim6_D2_200");
    std::ostringstream os;
    write_experiment_csv(os, r);
    const std::string csv = os.str();
    EXPECT_EQ(csv.rfind("family,n_gates,seed,mse\nD2,200,5,", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    const auto j = experiment_summary_json(r);
    EXPECT_EQ(j.at("n").get<int>(), 3);
    EXPECT_DOUBLE_EQ(j.at("mean").get<double>(), r.mean_mse);
    EXPECT_TRUE(j.at("failures").empty());
}

TEST(Experiment, IsingReservoirRuns) {
    ExperimentConfig cfg;
    cfg.reservoir = ReservoirKind::Ising;
    cfg.n_reservoirs = 2;
    const auto r = run_experiment(cfg, tfim6());
    EXPECT_EQ(r.n_ok, 2);
    EXPECT_EQ(cfg.file_stem(), "dataset_Ising_0");
}
