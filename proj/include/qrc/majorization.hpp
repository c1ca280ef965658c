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

// Majorization of outcome distributions and the cumulant-fluctuation
// complexity indicator. Lower fluctuation across an ensemble of circuits
// means output distributions closer to the Haar-random behaviour.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrc/families.hpp"
#include "qrc/parallel.hpp"
#include "qrc/random.hpp"
#include "qrc/statevector.hpp"

namespace qrc {

struct CumulantCurve {
    std::vector<double> values; // F(k) = sum of the k largest probabilities, k = 1..N
};

/// Sorts `p` in non-increasing order and returns the partial sums.
inline CumulantCurve cumulants(std::span<const double> p) {
    if (p.empty()) throw std::invalid_argument("cumulants: empty distribution");
    double total = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw std::invalid_argument("cumulants: negative or NaN probability");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-8) throw std::invalid_argument("cumulants: probabilities sum to " + std::to_string(total));
    std::vector<double> sorted(p.begin(), p.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    CumulantCurve c;
    c.values.resize(sorted.size());
    std::partial_sum(sorted.begin(), sorted.end(), c.values.begin());
    return c;
}

/// True iff every cumulant of y is >= the matching cumulant of x (1e-12
/// slack) and the totals agree. Non-strict comparison; majorizes(p, p) holds.
inline bool majorizes(std::span<const double> y, std::span<const double> x) {
    if (y.size() != x.size()) throw std::invalid_argument("majorizes: length mismatch");
    const auto fy = cumulants(y), fx = cumulants(x);
    for (std::size_t k = 0; k < fy.values.size(); ++k)
        if (fy.values[k] < fx.values[k] - 1e-12) return false;
    return std::abs(fy.values.back() - fx.values.back()) <= 1e-9;
}

/// How circuit outputs are read out for the complexity ensemble.
enum class MeasurementFrame {
    Computational, ///< C|input>, measured in the computational basis
    Hadamard,      ///< H^n C H^n |input>; makes diagonal circuits non-trivial
};

inline MeasurementFrame default_frame(FamilyId f) {
    return is_diagonal_family(f) ? MeasurementFrame::Hadamard : MeasurementFrame::Computational;
}

struct FluctuationReport {
    std::string label;             // family name or "haar"
    std::optional<SampleSpec> spec; // empty for the Haar baseline
    int n_qubits = 0;
    int n_circuits = 0;
    std::vector<double> per_k_mean;
    std::vector<double> per_k_std; // sample standard deviation (n - 1)
    double summary = 0.0;          // mean over k of per_k_std
    double summary_se = 0.0;       // bootstrap standard error of summary
};

namespace detail {

inline double summary_of(const std::vector<std::vector<double>> &curves, std::span<const std::size_t> rows,
                         std::vector<double> *mean_out = nullptr, std::vector<double> *std_out = nullptr) {
    const std::size_t len = curves.front().size();
    const double m = static_cast<double>(rows.size());
    double acc = 0.0;
    if (mean_out) mean_out->assign(len, 0.0);
    if (std_out) std_out->assign(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
        double mean = 0.0;
        for (auto r : rows) mean += curves[r][k];
        mean /= m;
        double ss = 0.0;
        for (auto r : rows) ss += (curves[r][k] - mean) * (curves[r][k] - mean);
        const double sd = std::sqrt(ss / (m - 1.0));
        acc += sd;
        if (mean_out) (*mean_out)[k] = mean;
        if (std_out) (*std_out)[k] = sd;
    }
    return acc / static_cast<double>(len);
}

inline constexpr int kBootstrapResamples = 200;

inline FluctuationReport report_from_curves(const std::vector<std::vector<double>> &curves, std::uint64_t seed) {
    FluctuationReport r;
    r.n_circuits = static_cast<int>(curves.size());
    std::vector<std::size_t> all(curves.size());
    std::iota(all.begin(), all.end(), 0);
    r.summary = summary_of(curves, all, &r.per_k_mean, &r.per_k_std);

    RandomStream rng = RandomStream::derive(seed, 0xB007);
    std::vector<double> boot(kBootstrapResamples);
    std::vector<std::size_t> rows(curves.size());
    for (auto &b : boot) {
        for (auto &x : rows) x = rng.uniform_int(curves.size());
        b = summary_of(curves, rows);
    }
    const double bm = std::accumulate(boot.begin(), boot.end(), 0.0) / kBootstrapResamples;
    double ss = 0.0;
    for (double b : boot) ss += (b - bm) * (b - bm);
    r.summary_se = std::sqrt(ss / (kBootstrapResamples - 1));
    return r;
}

inline State hadamard_all(State s) {
    for (int q = 0; q < s.n_qubits(); ++q) s = apply_gate(std::move(s), gates::h(q));
    return s;
}

} // namespace detail

struct EnsembleOptions {
    std::optional<State> input;            // default |0...0>
    std::optional<MeasurementFrame> frame; // default per family
    bool pin_seed = false;                 // every member uses spec.seed (sanity check: zero spread)
    int jobs = 1;
};

/// Cumulant statistics over circuits sampled with seeds spec.seed ..
/// spec.seed + n_circuits - 1, each applied to the input state.
inline FluctuationReport ensemble_fluctuations(const SampleSpec &spec, int n_circuits, const EnsembleOptions &opts = {}) {
    if (n_circuits < 2) throw std::invalid_argument("ensemble_fluctuations: need at least 2 circuits");
    spec.validate();
    const State in = opts.input ? *opts.input : zero_state(spec.n_qubits);
    if (in.n_qubits() != spec.n_qubits) throw std::invalid_argument("ensemble_fluctuations: input state size mismatch");
    const MeasurementFrame fr = opts.frame.value_or(default_frame(spec.family));
    const int jobs = opts.jobs;

    std::vector<std::vector<double>> curves(static_cast<std::size_t>(n_circuits));
    parallel_for(curves.size(), jobs, [&](std::size_t i) {
        SampleSpec s = spec;
        s.seed = opts.pin_seed ? spec.seed : spec.seed + i;
        const Circuit c = sample_circuit(s);
        State out = fr == MeasurementFrame::Hadamard ? detail::hadamard_all(in) : in;
        out = apply_circuit(std::move(out), c);
        if (fr == MeasurementFrame::Hadamard) out = detail::hadamard_all(std::move(out));
        curves[i] = cumulants(probabilities(out)).values;
    });
    auto r = detail::report_from_curves(curves, spec.seed);
    r.label = std::string(to_string(spec.family));
    r.spec = spec;
    r.n_qubits = spec.n_qubits;
    return r;
}

/// Haar-random pure state: normalized complex Gaussian vector.
inline State haar_state(int n_qubits, RandomStream &rng) {
    CVector v(static_cast<Eigen::Index>(dim_of(n_qubits)));
    for (auto &z : v) {
        const double re = rng.normal(), im = rng.normal();
        z = Complex(re, im);
    }
    return State::normalized(n_qubits, std::move(v));
}

inline FluctuationReport haar_baseline(int n_qubits, int n_samples, std::uint64_t seed, int jobs = 1) {
    if (n_samples < 2) throw std::invalid_argument("haar_baseline: need at least 2 samples");
    std::vector<std::vector<double>> curves(static_cast<std::size_t>(n_samples));
    parallel_for(curves.size(), jobs, [&](std::size_t i) {
        RandomStream rng = RandomStream::derive(seed, i);
        curves[i] = cumulants(probabilities(haar_state(n_qubits, rng))).values;
    });
    auto r = detail::report_from_curves(curves, seed);
    r.label = "haar";
    r.n_qubits = n_qubits;
    return r;
}

/// CSV: one comment header line with the sampling parameters and summary, then k,mean,std.
inline void write_fluctuation_csv(std::ostream &os, const FluctuationReport &r) {
    os << "# family=" << r.label << ",n_qubits=" << r.n_qubits;
    if (r.spec) os << ",n_gates=" << r.spec->effective_gates() << ",seed=" << r.spec->seed;
    os << ",n_circuits=" << r.n_circuits << ",summary=" << format_double(r.summary)
       << ",summary_se=" << format_double(r.summary_se) << "\n";
    os << "k,mean,std\n";
    for (std::size_t k = 0; k < r.per_k_mean.size(); ++k)
        os << (k + 1) << ',' << format_double(r.per_k_mean[k]) << ',' << format_double(r.per_k_std[k]) << "\n";
}

} // namespace qrc
