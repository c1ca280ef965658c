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

#include <random>
#include <sstream>

#include "qrc/eigensolver.hpp"
#include "qrc/pauli_space.hpp"
#include "test_helpers.hpp"

using namespace qrc;

namespace {

CMatrix pauli2(int index) {
    auto one = [](int k) {
        CMatrix m(2, 2);
        switch (k) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        default: m << 1, 0, 0, -1;
        }
        return m;
    };
    const CMatrix a = one(index / 4), b = one(index % 4);
    CMatrix out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    return out;
}

} // namespace

TEST(PauliSpace, LabelsAreLexicographic) {
    EXPECT_EQ(two_qubit_pauli_label(0), "II");
    EXPECT_EQ(two_qubit_pauli_label(1), "IX");
    EXPECT_EQ(two_qubit_pauli_label(4), "XI");
    EXPECT_EQ(two_qubit_pauli_label(15), "ZZ");
}

TEST(PauliSpace, IdentityAndXI) {
    const auto c = pauli_coefficients(CMatrix::Identity(4, 4));
    for (int k = 0; k < 16; ++k) EXPECT_LT(std::abs(c[k] - Complex(k == 0 ? 1.0 : 0.0)), 1e-15);
    const auto x = pauli_coefficients(pauli2(4));
    for (int k = 0; k < 16; ++k) EXPECT_LT(std::abs(x[k] - Complex(k == 4 ? 1.0 : 0.0)), 1e-15);
}

TEST(PauliSpace, HaarReconstruction) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix u = qrc::testing::random_unitary(4, rng);
        const auto c = pauli_coefficients(u);
        CMatrix rec = CMatrix::Zero(4, 4);
        double norm = 0.0;
        for (int k = 0; k < 16; ++k) {
            rec += c[k] * pauli2(k);
            norm += std::norm(c[k]);
        }
        EXPECT_NEAR(norm, 1.0, 1e-10);
        EXPECT_LT(qrc::testing::max_abs_diff(rec, u), 1e-10);
    }
}

TEST(PauliSpace, RejectsNonUnitary) {
    EXPECT_THROW(pauli_coefficients(CMatrix::Identity(4, 4) * 1.1), std::invalid_argument);
    EXPECT_THROW(pauli_coefficients(CMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST(PauliSpace, CloudRowsHaveUnitNorm) {
    for (FamilyId f : kAllFamilies) {
        if (f == FamilyId::D3) continue; // needs three qubits
        const auto cloud = ensemble_cloud({f, 2, 200, 0}, 300, 2);
        EXPECT_EQ(cloud.rows.rows(), 300);
        EXPECT_EQ(cloud.rows.cols(), 32);
        EXPECT_LT(max_norm_defect(cloud.rows), 1e-9) << to_string(f);
        EXPECT_EQ(cloud.seeds[7], 7u);
    }
    EXPECT_THROW(ensemble_cloud({FamilyId::G3, 3, 10, 0}, 10), std::invalid_argument);
}

TEST(PauliSpace, HaarSecondMoments) {
    const auto cloud = haar_cloud(4000, 1, 4);
    EXPECT_LT(max_norm_defect(cloud.rows), 1e-9);
    for (int k = 0; k < 16; ++k) {
        double m = 0.0;
        for (Eigen::Index i = 0; i < cloud.rows.rows(); ++i)
            m += cloud.rows(i, 2 * k) * cloud.rows(i, 2 * k) + cloud.rows(i, 2 * k + 1) * cloud.rows(i, 2 * k + 1);
        EXPECT_NEAR(m / 4000.0, 1.0 / 16.0, 0.005) << two_qubit_pauli_label(k);
    }
}

TEST(PauliSpace, CloudIsDeterministicAcrossThreads) {
    const auto a = ensemble_cloud({FamilyId::G3, 2, 50, 3}, 64, 1);
    const auto b = ensemble_cloud({FamilyId::G3, 2, 50, 3}, 64, 4);
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(haar_cloud(16, 2, 1).rows, haar_cloud(16, 2, 3).rows);
}

TEST(Pca, IdenticalRowsProjectToOrigin) {
    RMatrix cloud = RMatrix::Ones(10, 32) * 0.3;
    const auto p = pca_project(cloud);
    EXPECT_EQ(p.coords, RMatrix::Zero(10, 2));
    EXPECT_THROW(pca_project(RMatrix::Zero(2, 32)), std::invalid_argument);
}

TEST(Pca, RecoversEmbeddedPlane) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    RMatrix basis(32, 2);
    for (Eigen::Index i = 0; i < basis.size(); ++i) basis.data()[i] = nd(rng);
    basis = Eigen::HouseholderQR<RMatrix>(basis).householderQ() * RMatrix::Identity(32, 2);
    RMatrix plane(200, 2);
    for (Eigen::Index i = 0; i < plane.size(); ++i) plane.data()[i] = nd(rng);
    const RMatrix cloud = (plane * basis.transpose()).rowwise() + RVector::Constant(32, 0.5).transpose();
    const auto p = pca_project(cloud);
    const RMatrix rec = (p.coords * p.axes.transpose()).rowwise() + p.mean.transpose();
    EXPECT_LT((rec - cloud).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Pca, RankOneDataIsZeroPadded) {
    RMatrix cloud = RMatrix::Zero(5, 32);
    for (int i = 0; i < 5; ++i) cloud(i, 3) = i;
    const auto p = pca_project(cloud);
    EXPECT_EQ(p.axes.col(1), RVector::Zero(32));
    EXPECT_EQ(p.coords.col(1), RVector::Zero(5));
    EXPECT_DOUBLE_EQ(p.axes(3, 0), 1.0);
}

TEST(Pca, VariancesMatchCovarianceSpectrum) {
    const auto cloud = ensemble_cloud({FamilyId::G2, 2, 20, 0}, 500, 2).rows;
    const auto p = pca_project(cloud);
    const RMatrix centered = cloud.rowwise() - cloud.colwise().mean();
    const CMatrix cov = (centered.transpose() * centered / 499.0).cast<Complex>();
    const auto es = hermitian_eigensystem(cov);
    for (int k = 0; k < 2; ++k) {
        const double projected = p.coords.col(k).squaredNorm() / 499.0;
        EXPECT_NEAR(projected, es.values[31 - k], 1e-8);
        EXPECT_NEAR(p.variances[k], es.values[31 - k], 1e-8);
        Eigen::Index arg = 0;
        p.axes.col(k).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(p.axes(arg, k), 0.0);
    }
}

TEST(Pca, ProjectionNeverStretchesDistances) {
    const auto cloud = haar_cloud(100, 4).rows;
    const auto p = pca_project(cloud);
    for (Eigen::Index i = 0; i < 100; ++i)
        for (Eigen::Index j = i + 1; j < 100; ++j)
            EXPECT_LE((p.coords.row(i) - p.coords.row(j)).norm(), (cloud.row(i) - cloud.row(j)).norm() + 1e-12);
}

TEST(PauliSpace, CentroidStatistics) {
    RMatrix pts(4, 32);
    pts.setZero();
    pts(0, 0) = 1;
    pts(1, 0) = -1;
    pts(2, 1) = 1;
    pts(3, 1) = -1;
    const auto s = distance_stats(centroid_distances(pts));
    EXPECT_DOUBLE_EQ(s.mean, 1.0);
    EXPECT_DOUBLE_EQ(s.std, 0.0);
    // Shallow Clifford circuits cluster near a few Pauli directions.
    const auto shallow = distance_stats(centroid_distances(ensemble_cloud({FamilyId::G1, 2, 20, 0}, 2000).rows));
    const auto haar = distance_stats(centroid_distances(haar_cloud(2000, 0).rows));
    EXPECT_LT(shallow.mean, haar.mean);
}

TEST(PauliSpace, CsvFormats) {
    const auto cloud = ensemble_cloud({FamilyId::G3, 2, 10, 5}, 3);
    std::ostringstream os;
    write_cloud_csv(os, cloud);
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("family,n_gates,seed,c0_re,c0_im,c1_re", 0), 0u);
    EXPECT_NE(s.find(",c15_im\nG3,10,5,"), std::string::npos);
    std::ostringstream ps;
    write_projection_csv(ps, cloud.seeds, pca_project(cloud.rows));
    EXPECT_EQ(ps.str().rfind("seed,x,y\n5,", 0), 0u);
}
