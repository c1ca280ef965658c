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

// Ground-state datasets {|psi0(R)>, E_k(R) - E0(R)} over a parameter grid,
// the contiguous extrapolation split, and the on-disk archive:
//
//   <dir>/manifest.json   name, source, n_qubits, excited_index, grid,
//                         test_window, files
//   <dir>/<file>          one Hamiltonian per grid point ("# R=" bound)
//
// Ground states are recomputed on load and never stored.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrc/eigensolver.hpp"
#include "qrc/hamiltonian.hpp"
#include "qrc/parallel.hpp"

namespace qrc {

inline constexpr double kDegenerateGap = 1e-9;

struct DatasetRecord {
    std::vector<double> params; // R; params[0] drives the split
    State ground_state;
    std::array<double, 3> energies{}; // E0 <= E1 <= E2
    double target = 0.0;              // E_k - E0
};

struct Dataset {
    std::string source;
    int n_qubits = 0;
    int excited_index = 1;
    std::vector<DatasetRecord> records;
    std::vector<double> excluded; // grid points dropped for a degenerate ground state
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::optional<std::pair<double, double>> test_window;

    bool has_split() const { return !train.empty() && !test.empty(); }
};

using HamiltonianProvider = std::function<PauliSum(double)>;

/// Makes the largest-magnitude amplitude real and positive (first index on ties).
inline CVector fix_phase_largest(CVector v) {
    Eigen::Index best = 0;
    double mag = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > mag * (1.0 + 1e-12) + 1e-15) {
            mag = a;
            best = i;
        }
    }
    if (mag > 0.0) v *= std::conj(v[best]) / std::abs(v[best]);
    return v;
}

/// Diagonalizes provider(R) on every grid point. Degenerate ground states
/// (E1 - E0 < 1e-9) are excluded and listed in Dataset::excluded.
inline Dataset build_dataset(const HamiltonianProvider &provider, const std::vector<double> &grid, int excited_index,
                             std::string source = {}, int jobs = 1) {
    if (grid.size() < 10) throw std::invalid_argument("build_dataset: grid needs at least 10 points");
    if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("build_dataset: grid must be sorted");
    if (excited_index != 1 && excited_index != 2) throw std::invalid_argument("build_dataset: excited index must be 1 or 2");

    std::vector<std::optional<DatasetRecord>> slots(grid.size());
    std::vector<int> qubits(grid.size(), 0);
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        const PauliSum h = provider(grid[i]);
        qubits[i] = h.n_qubits();
        const auto es = lowest_eigenpairs(pauli_sum_matrix(h), std::min<int>(3, static_cast<int>(dim_of(h.n_qubits()))));
        std::array<double, 3> e{};
        for (Eigen::Index j = 0; j < 3; ++j) e[static_cast<std::size_t>(j)] = j < es.values.size() ? es.values[j] : es.values[es.values.size() - 1];
        if (e[1] - e[0] < kDegenerateGap) return;
        DatasetRecord r{{grid[i]}, State::normalized(h.n_qubits(), fix_phase_largest(es.vectors.col(0))), e,
                        e[static_cast<std::size_t>(excited_index)] - e[0]};
        slots[i] = std::move(r);
    });

    Dataset d;
    d.source = std::move(source);
    d.excited_index = excited_index;
    d.n_qubits = qubits.front();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (qubits[i] != d.n_qubits) throw std::invalid_argument("build_dataset: qubit count changes along the grid");
        if (slots[i]) d.records.push_back(std::move(*slots[i]));
        else d.excluded.push_back(grid[i]);
    }
    return d;
}

/// Test set = records whose R lies in [lo, hi]; train = the rest.
inline Dataset split_dataset(Dataset d, double lo, double hi) {
    if (d.records.empty()) throw std::invalid_argument("split_dataset: empty dataset");
    if (!(lo <= hi)) throw std::invalid_argument("split_dataset: window lower bound exceeds upper bound");
    const double gmin = d.records.front().params.at(0), gmax = d.records.back().params.at(0);
    if (lo < gmin || hi > gmax) throw std::invalid_argument("split_dataset: window lies outside the grid");
    d.train.clear();
    d.test.clear();
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const double r = d.records[i].params.at(0);
        (r >= lo && r <= hi ? d.test : d.train).push_back(i);
    }
    const double frac = static_cast<double>(d.test.size()) / static_cast<double>(d.records.size());
    if (frac < 0.25 || frac > 0.35)
        throw std::invalid_argument("split_dataset: test fraction " + std::to_string(frac) + " outside [0.25, 0.35]");
    d.test_window = {lo, hi};
    return d;
}

inline std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return g;
}

// ---- archive ---------------------------------------------------------------

struct DatasetManifest {
    std::string name;
    std::string source;
    int n_qubits = 0;
    int excited_index = 1;
    std::vector<double> grid;
    std::pair<double, double> test_window{0.0, 0.0};
    std::vector<std::string> files;
    nlohmann::json extra = nlohmann::json::object(); // producer-specific metadata, passed through

    nlohmann::json to_json() const {
        nlohmann::json j = extra;
        j["name"] = name;
        j["source"] = source;
        j["n_qubits"] = n_qubits;
        j["excited_index"] = excited_index;
        j["grid"] = grid;
        j["test_window"] = {test_window.first, test_window.second};
        j["files"] = files;
        return j;
    }

    static DatasetManifest from_json(const nlohmann::json &j) {
        DatasetManifest m;
        m.name = j.at("name").get<std::string>();
        m.source = j.value("source", std::string{});
        m.n_qubits = j.at("n_qubits").get<int>();
        m.excited_index = j.value("excited_index", 1);
        m.grid = j.at("grid").get<std::vector<double>>();
        const auto w = j.at("test_window").get<std::vector<double>>();
        if (w.size() != 2) throw std::invalid_argument("manifest: test_window must have two entries");
        m.test_window = {w[0], w[1]};
        m.files = j.at("files").get<std::vector<std::string>>();
        if (m.files.size() != m.grid.size()) throw std::invalid_argument("manifest: files and grid differ in length");
        for (const auto &[k, v] : j.items())
            if (k != "name" && k != "source" && k != "n_qubits" && k != "excited_index" && k != "grid" &&
                k != "test_window" && k != "files")
                m.extra[k] = v;
        return m;
    }
};

/// Writes `contents` to `path` via a temporary file and rename.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp);
        os << contents;
        if (!os) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// Writes per-point Hamiltonian files and manifest.json into `dir`.
inline DatasetManifest write_dataset_archive(const std::filesystem::path &dir, const std::string &name,
                                             const std::string &source, const std::vector<PauliSum> &points,
                                             int excited_index, std::pair<double, double> test_window) {
    if (points.empty()) throw std::invalid_argument("write_dataset_archive: no points");
    std::filesystem::create_directories(dir);
    DatasetManifest m;
    m.name = name;
    m.source = source;
    m.n_qubits = points.front().n_qubits();
    m.excited_index = excited_index;
    m.test_window = test_window;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].parameter) throw std::invalid_argument("write_dataset_archive: point without R");
        char buf[32];
        std::snprintf(buf, sizeof(buf), "point_%03zu.txt", i);
        m.files.emplace_back(buf);
        m.grid.push_back(*points[i].parameter);
        write_file_atomic(dir / buf, format_pauli_sum(points[i]));
    }
    write_file_atomic(dir / "manifest.json", m.to_json().dump(2) + "\n");
    return m;
}

inline DatasetManifest read_manifest(const std::filesystem::path &dir) {
    const auto path = dir / "manifest.json";
    if (!std::filesystem::exists(path)) throw std::invalid_argument("no manifest.json in " + dir.string());
    return DatasetManifest::from_json(nlohmann::json::parse(read_file(path)));
}

/// Loads an archive, diagonalizes every point and applies the manifest split.
inline Dataset load_dataset(const std::filesystem::path &dir, int jobs = 1) {
    const DatasetManifest m = read_manifest(dir);
    std::vector<PauliSum> hs;
    hs.reserve(m.files.size());
    for (std::size_t i = 0; i < m.files.size(); ++i) {
        PauliSum h = parse_pauli_sum(read_file(dir / m.files[i]));
        if (h.n_qubits() != m.n_qubits)
            throw std::invalid_argument(m.files[i] + ": " + std::to_string(h.n_qubits()) + " qubits, manifest says " +
                                        std::to_string(m.n_qubits));
        if (h.parameter && std::abs(*h.parameter - m.grid[i]) > 1e-9 * std::max(1.0, std::abs(m.grid[i])))
            throw std::invalid_argument(m.files[i] + ": '# R=' does not match the manifest grid");
        hs.push_back(std::move(h));
    }
    std::vector<std::size_t> order(hs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return m.grid[a] < m.grid[b]; });
    std::vector<double> grid;
    std::vector<PauliSum> sorted;
    for (auto i : order) {
        grid.push_back(m.grid[i]);
        sorted.push_back(hs[i]);
    }
    std::map<double, std::size_t> by_r;
    for (std::size_t i = 0; i < grid.size(); ++i) by_r[grid[i]] = i;
    Dataset d = build_dataset([&](double r) { return sorted.at(by_r.at(r)); }, grid, m.excited_index,
                              m.name.empty() ? m.source : m.name, jobs);
    return split_dataset(std::move(d), m.test_window.first, m.test_window.second);
}

// Default synthetic dataset: tfim-chain, 100 points on [0.2, 3.0], test window
// [0.76, 1.60] (30 records, contiguous, inside the grid).
inline constexpr double kTfimGridLo = 0.2;
inline constexpr double kTfimGridHi = 3.0;
inline constexpr double kTfimWindowLo = 0.76;
inline constexpr double kTfimWindowHi = 1.60;

inline Dataset tfim_dataset(int n_qubits = 6, int points = 100, int excited_index = 1, int jobs = 1) {
    const auto grid = uniform_grid(kTfimGridLo, kTfimGridHi, points);
    Dataset d = build_dataset([&](double r) { return synthetic_family("tfim-chain", n_qubits, r); }, grid, excited_index,
                              "tfim-chain", jobs);
    return split_dataset(std::move(d), kTfimWindowLo, kTfimWindowHi);
}

} // namespace qrc
