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

// Reservoir experiment loop: for every seed, one fixed reservoir is applied
// to all ground states of a dataset, local Pauli expectations are read out,
// and a ridge model is trained on the training split and scored on the test
// window.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrc/dataset.hpp"
#include "qrc/families.hpp"
#include "qrc/ising.hpp"
#include "qrc/parallel.hpp"
#include "qrc/ridge.hpp"

namespace qrc {

inline constexpr int kDefaultReservoirs = 400;

/// <X_0>, <Y_0>, <Z_0>, ..., <Z_{n-1}> of `state`.
inline RVector local_pauli_features(const State &state) {
    const int n = state.n_qubits();
    RVector f(3 * n);
    for (int q = 0; q < n; ++q) {
        f[3 * q + 0] = expectation_pauli(state, PauliString::single(n, q, Pauli::X));
        f[3 * q + 1] = expectation_pauli(state, PauliString::single(n, q, Pauli::Y));
        f[3 * q + 2] = expectation_pauli(state, PauliString::single(n, q, Pauli::Z));
    }
    return f;
}

inline RVector extract_features(const Circuit &reservoir, const State &ground_state) {
    return local_pauli_features(apply_circuit(ground_state, reservoir));
}

enum class ReservoirKind { Family, Ising, Identity };

struct ExperimentConfig {
    ReservoirKind reservoir = ReservoirKind::Family;
    FamilyId family = FamilyId::G3;
    int n_gates = 200;       // ignored for Ising and Identity
    int trotter_steps = 0;   // Ising only; 0 selects exact evolution
    std::string dataset = "dataset";
    int n_reservoirs = kDefaultReservoirs;
    std::uint64_t base_seed = 0;
    double alpha = kDefaultAlpha;
    int jobs = 1;

    std::string reservoir_label() const {
        switch (reservoir) {
        case ReservoirKind::Ising: return "Ising";
        case ReservoirKind::Identity: return "Identity";
        default: return std::string(to_string(family));
        }
    }

    int gates_label() const {
        if (reservoir == ReservoirKind::Family) return n_gates;
        if (reservoir == ReservoirKind::Ising) return trotter_steps;
        return 0;
    }

    std::string file_stem() const { return dataset + "_" + reservoir_label() + "_" + std::to_string(gates_label()); }

    void validate(int n_qubits) const {
        if (n_reservoirs < 1) throw std::invalid_argument("ExperimentConfig: n_reservoirs must be >= 1");
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("ExperimentConfig: alpha must be positive");
        if (reservoir == ReservoirKind::Family) SampleSpec{family, n_qubits, n_gates, base_seed}.validate();
        if (reservoir == ReservoirKind::Ising) {
            if (trotter_steps < 0) throw std::invalid_argument("ExperimentConfig: trotter_steps must be >= 0");
            if (trotter_steps == 0 && n_qubits > 10)
                throw std::invalid_argument("ExperimentConfig: exact Ising evolution limited to 10 qubits");
        }
    }
};

inline Circuit build_reservoir(const ExperimentConfig &cfg, int n_qubits, std::uint64_t seed) {
    switch (cfg.reservoir) {
    case ReservoirKind::Identity: return Circuit(n_qubits);
    case ReservoirKind::Ising: {
        const auto p = sample_ising(n_qubits, seed);
        return cfg.trotter_steps == 0 ? exact_evolution_circuit(p) : trotter_circuit(p, cfg.trotter_steps);
    }
    default: return sample_circuit({cfg.family, n_qubits, cfg.n_gates, seed});
    }
}

struct SeedFailure {
    std::uint64_t seed = 0;
    std::string message;
};

struct ExperimentResult {
    ExperimentConfig config;
    int n_qubits = 0;
    int excited_index = 1;
    std::vector<std::uint64_t> seeds;
    std::vector<double> per_seed_mse; // NaN where the seed failed
    std::vector<SeedFailure> failures;
    double mean_mse = std::numeric_limits<double>::quiet_NaN();
    double std_mse = std::numeric_limits<double>::quiet_NaN();
    int n_ok = 0;

    double standard_error() const { return n_ok > 0 ? std_mse / std::sqrt(static_cast<double>(n_ok)) : std_mse; }
};

/// Feature matrix of every record under one reservoir.
inline RMatrix feature_matrix(const Dataset &d, const Circuit &reservoir) {
    RMatrix x(static_cast<Eigen::Index>(d.records.size()), 3 * d.n_qubits);
    for (std::size_t i = 0; i < d.records.size(); ++i)
        x.row(static_cast<Eigen::Index>(i)) = extract_features(reservoir, d.records[i].ground_state).transpose();
    return x;
}

inline double test_mse(const Dataset &d, const RMatrix &features, double alpha) {
    auto pick = [&](const std::vector<std::size_t> &idx, RMatrix &x, RVector &y) {
        x.resize(static_cast<Eigen::Index>(idx.size()), features.cols());
        y.resize(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t r = 0; r < idx.size(); ++r) {
            x.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(idx[r]));
            y[static_cast<Eigen::Index>(r)] = d.records[idx[r]].target;
        }
    };
    RMatrix xtr, xte;
    RVector ytr, yte;
    pick(d.train, xtr, ytr);
    pick(d.test, xte, yte);
    const auto model = fit_ridge(xtr, ytr, alpha);
    return mean_squared_error(model.predict_all(xte), yte);
}

inline ExperimentResult run_experiment(const ExperimentConfig &cfg, const Dataset &d) {
    if (!d.has_split()) throw std::invalid_argument("run_experiment: dataset has no train/test split");
    cfg.validate(d.n_qubits);

    ExperimentResult r;
    r.config = cfg;
    r.n_qubits = d.n_qubits;
    r.excited_index = d.excited_index;
    const auto n = static_cast<std::size_t>(cfg.n_reservoirs);
    r.seeds.resize(n);
    r.per_seed_mse.assign(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::optional<std::string>> errors(n);
    for (std::size_t i = 0; i < n; ++i) r.seeds[i] = cfg.base_seed + i;

    parallel_for(n, cfg.jobs, [&](std::size_t i) {
        try {
            const Circuit c = build_reservoir(cfg, d.n_qubits, r.seeds[i]);
            const double mse = test_mse(d, feature_matrix(d, c), cfg.alpha);
            if (!std::isfinite(mse)) throw std::runtime_error("non-finite test MSE");
            r.per_seed_mse[i] = mse;
        } catch (const std::exception &e) {
            errors[i] = e.what();
        }
    });

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) {
            r.failures.push_back({r.seeds[i], *errors[i]});
            continue;
        }
        sum += r.per_seed_mse[i];
        ++r.n_ok;
    }
    if (r.n_ok > 0) {
        r.mean_mse = sum / r.n_ok;
        double ss = 0.0;
        for (double v : r.per_seed_mse)
            if (!std::isnan(v)) ss += (v - r.mean_mse) * (v - r.mean_mse);
        r.std_mse = r.n_ok > 1 ? std::sqrt(ss / (r.n_ok - 1)) : 0.0;
    }
    return r;
}

inline void write_experiment_csv(std::ostream &os, const ExperimentResult &r) {
    os << "family,n_gates,seed,mse\n";
    const auto label = r.config.reservoir_label();
    const auto gates = r.config.gates_label();
    for (std::size_t i = 0; i < r.seeds.size(); ++i)
        os << label << ',' << gates << ',' << r.seeds[i] << ','
           << (std::isnan(r.per_seed_mse[i]) ? std::string("nan") : format_double(r.per_seed_mse[i])) << '\n';
}

inline nlohmann::json experiment_summary_json(const ExperimentResult &r) {
    auto num = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json failures = nlohmann::json::array();
    for (const auto &f : r.failures) failures.push_back({{"seed", f.seed}, {"error", f.message}});
    return {{"mean", num(r.mean_mse)},
            {"std", num(r.std_mse)},
            {"n", r.n_ok},
            {"se", num(r.standard_error())},
            {"family", r.config.reservoir_label()},
            {"n_gates", r.config.gates_label()},
            {"dataset", r.config.dataset},
            {"n_qubits", r.n_qubits},
            {"excited_index", r.excited_index},
            {"n_reservoirs", r.config.n_reservoirs},
            {"base_seed", r.config.base_seed},
            {"alpha", r.config.alpha},
            {"failures", failures}};
}

} // namespace qrc
