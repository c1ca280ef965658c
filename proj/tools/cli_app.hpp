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

// Command-line front end. Kept in a header so tests can run commands
// in-process through run().

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qrc/dataset.hpp"
#include "qrc/ising.hpp"
#include "qrc/majorization.hpp"
#include "qrc/parallel.hpp"
#include "qrc/pauli_space.hpp"
#include "qrc/pipeline.hpp"

namespace qrc::cli {

inline constexpr const char *kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeFailure = 3 };

/// Bad flags, unknown names, unreadable inputs: reported with exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

inline std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    return out;
}

inline std::vector<int> parse_int_list(const std::string &s, const char *what) {
    std::vector<int> out;
    for (const auto &tok : split_list(s)) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception &) {
            throw ConfigError(std::string(what) + ": '" + tok + "' is not an integer");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

/// Reads `key = value` lines ('#' starts a comment) and appends
/// `--key=value` for every key not already given on the command line.
inline std::vector<std::string> merge_config_file(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    auto given = [&](const std::string &key) {
        const std::string flag = "--" + key;
        return std::any_of(args.begin() + 1, args.end(),
                           [&](const std::string &a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto t = std::string(detail::trim(line));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key(detail::trim(std::string_view(t).substr(0, eq)));
        const std::string value(detail::trim(std::string_view(t).substr(eq + 1)));
        if (key.empty() || key == "config") throw ConfigError(path + ":" + std::to_string(lineno) + ": bad key");
        if (!given(key)) extra.push_back("--" + key + "=" + value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

/// Files written by one command, recorded for the run manifest.
class OutputSet {
  public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string &name, const std::string &contents) {
        std::filesystem::create_directories(dir_);
        write_file_atomic(dir_ / name, contents);
        files_.push_back(name);
    }

    const std::filesystem::path &dir() const { return dir_; }
    const std::vector<std::string> &files() const { return files_; }

  private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

struct RunManifest {
    std::string command;
    std::string config;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;
    std::string status = "ok";
    std::vector<std::string> errors;

    nlohmann::json to_json() const {
        return {{"command", command},        {"config", config},   {"config_hash", hex64(fnv1a64(config))},
                {"seed", seed},              {"version", kVersion}, {"outputs", outputs},
                {"wall_time_s", wall_time_s}, {"status", status},   {"errors", errors}};
    }
};

inline constexpr const char *kRunManifestName = "run_manifest.json";

struct Common {
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string out = "out";

    int resolved_jobs() const { return jobs > 0 ? jobs : default_jobs(); }
};

inline void add_common(CLI::App *sub, Common &c, const std::string &default_out) {
    c.out = default_out;
    sub->add_option("--seed", c.seed, "Base seed")->capture_default_str();
    sub->add_option("--jobs", c.jobs, "Worker threads (0 = all hardware threads)")->capture_default_str();
    sub->add_option("--out", c.out, "Output directory")->capture_default_str();
    sub->add_option("--config", "Flat key = value file; command-line flags take precedence");
}

/// Canonical option dump used for the config hash. Thread count and output
/// location do not change results and are left out.
inline std::string canonical_config(const CLI::App *sub) {
    std::istringstream in(sub->config_to_str(true, false));
    std::string line, out = std::string("command=") + sub->get_name() + "\n";
    while (std::getline(in, line)) {
        if (line.rfind("jobs", 0) == 0 || line.rfind("out", 0) == 0 || line.rfind("config", 0) == 0) continue;
        out += line + "\n";
    }
    return out;
}

struct FamilyToken {
    enum class Kind { Family, Ising, Identity } kind = Kind::Family;
    FamilyId family = FamilyId::G3;
};

inline std::vector<FamilyToken> parse_families(const std::string &list, bool allow_reservoirs) {
    std::vector<FamilyToken> out;
    for (const auto &tok : split_list(list)) {
        if (tok == "all") {
            for (FamilyId f : kAllFamilies) out.push_back({FamilyToken::Kind::Family, f});
        } else if (allow_reservoirs && tok == "Ising") {
            out.push_back({FamilyToken::Kind::Ising, FamilyId::G3});
        } else if (allow_reservoirs && tok == "Identity") {
            out.push_back({FamilyToken::Kind::Identity, FamilyId::G3});
        } else {
            try {
                out.push_back({FamilyToken::Kind::Family, family_from_string(tok)});
            } catch (const std::exception &) {
                throw ConfigError("unknown family '" + tok + "'");
            }
        }
    }
    if (out.empty()) throw ConfigError("--families: empty list");
    return out;
}

inline const std::map<std::string, int> &builtin_datasets() {
    static const std::map<std::string, int> m{{"tfim4", 4}, {"tfim6", 6}, {"tfim8", 8}};
    return m;
}

/// A directory holding manifest.json, or a built-in synthetic name.
inline std::pair<Dataset, std::string> resolve_dataset(const std::string &ref, int k, int jobs) {
    namespace fs = std::filesystem;
    if (fs::is_directory(ref)) {
        try {
            Dataset d = load_dataset(ref, jobs);
            std::string name = fs::path(ref).lexically_normal().filename().string();
            if (name.empty() || name == ".") name = fs::path(ref).lexically_normal().parent_path().filename().string();
            return {std::move(d), name};
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("dataset ") + ref + ": " + e.what());
        }
    }
    if (auto it = builtin_datasets().find(ref); it != builtin_datasets().end())
        return {tfim_dataset(it->second, 100, k, jobs), ref};
    throw ConfigError("dataset '" + ref + "' is neither a dataset directory nor a built-in name (tfim4, tfim6, tfim8)");
}

// qrc -----------------------------------------------------------------------

struct QrcArgs {
    Common common;
    std::string dataset = "tfim6";
    std::string families = "G1,G2,G3,MG,D2,D3,DN,Ising";
    std::string gates = "20,50,100,150,200";
    int seeds = kDefaultReservoirs;
    int k = 1;
    double alpha = kDefaultAlpha;
    int trotter_steps = 0;
};

inline int cmd_qrc(const QrcArgs &a, RunManifest &man, std::ostream &out, std::ostream &err) {
    const int jobs = a.common.resolved_jobs();
    if (a.seeds < 1) throw ConfigError("--seeds must be >= 1");
    const auto gates = parse_int_list(a.gates, "--gates");
    const auto families = parse_families(a.families, true);
    auto [data, name] = resolve_dataset(a.dataset, a.k, jobs);

    std::vector<ExperimentConfig> cells;
    auto push = [&](ExperimentConfig c) {
        for (const auto &e : cells)
            if (e.file_stem() == c.file_stem()) return;
        cells.push_back(std::move(c));
    };
    for (const auto &f : families) {
        ExperimentConfig c;
        c.dataset = name;
        c.n_reservoirs = a.seeds;
        c.base_seed = a.common.seed;
        c.alpha = a.alpha;
        c.jobs = jobs;
        if (f.kind == FamilyToken::Kind::Ising) {
            c.reservoir = ReservoirKind::Ising;
            c.trotter_steps = a.trotter_steps;
            push(c);
        } else if (f.kind == FamilyToken::Kind::Identity) {
            c.reservoir = ReservoirKind::Identity;
            push(c);
        } else {
            c.family = f.family;
            for (int g : gates) {
                c.n_gates = is_diagonal_family(f.family) ? SampleSpec{f.family, data.n_qubits, g, 0}.effective_gates() : g;
                push(c);
            }
        }
    }
    for (const auto &c : cells) {
        try {
            c.validate(data.n_qubits);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(c.file_stem() + ": " + e.what());
        }
    }

    OutputSet outs(a.common.out);
    std::ostringstream summary;
    summary << "family,n_gates,n,mean,std,se,n_failed\n";
    bool failed = false;
    out << "dataset " << name << ": " << data.records.size() << " records, " << data.train.size() << " train, "
        << data.test.size() << " test, " << data.n_qubits << " qubits\n";
    for (const auto &c : cells) {
        try {
            const auto r = run_experiment(c, data);
            std::ostringstream csv;
            write_experiment_csv(csv, r);
            outs.write(c.file_stem() + ".csv", csv.str());
            outs.write(c.file_stem() + ".json", experiment_summary_json(r).dump(2) + "\n");
            summary << c.reservoir_label() << ',' << c.gates_label() << ',' << r.n_ok << ',' << format_double(r.mean_mse)
                    << ',' << format_double(r.std_mse) << ',' << format_double(r.standard_error()) << ','
                    << r.failures.size() << '\n';
            out << std::left << std::setw(9) << c.reservoir_label() << std::setw(6) << c.gates_label()
                << " mean MSE " << r.mean_mse << " +/- " << r.standard_error() << '\n';
            for (const auto &f : r.failures) {
                failed = true;
                man.errors.push_back(c.file_stem() + " seed " + std::to_string(f.seed) + ": " + f.message);
            }
        } catch (const std::exception &e) {
            failed = true;
            man.errors.push_back(c.file_stem() + ": " + e.what());
            err << "error: " << c.file_stem() << ": " << e.what() << '\n';
        }
    }
    outs.write(name + "_summary.csv", summary.str());
    man.outputs = outs.files();
    return failed ? kRuntimeFailure : kOk;
}

// majorization --------------------------------------------------------------

struct MajorizationArgs {
    Common common;
    int n = 6;
    int circuits = 400;
    int haar_samples = 0;
    std::string families = "all";
    std::string gates = "200";
    std::string frame = "auto";
    bool seed_pin = false;
};

inline int cmd_majorization(const MajorizationArgs &a, RunManifest &man, std::ostream &out, std::ostream &) {
    const int jobs = a.common.resolved_jobs();
    const auto families = parse_families(a.families, false);
    const auto gates = parse_int_list(a.gates, "--gates");
    if (a.circuits < 2) throw ConfigError("--circuits must be >= 2");
    std::optional<MeasurementFrame> frame;
    if (a.frame == "computational") frame = MeasurementFrame::Computational;
    else if (a.frame == "hadamard") frame = MeasurementFrame::Hadamard;
    else if (a.frame != "auto") throw ConfigError("--frame must be auto, computational or hadamard");

    std::vector<SampleSpec> specs;
    for (const auto &f : families)
        for (int g : gates) {
            SampleSpec s{f.family, a.n, g, a.common.seed};
            try {
                s.validate();
            } catch (const std::invalid_argument &e) {
                throw ConfigError(e.what());
            }
            if (std::none_of(specs.begin(), specs.end(), [&](const SampleSpec &o) {
                    return o.family == s.family && o.effective_gates() == s.effective_gates();
                }))
                specs.push_back(s);
        }

    OutputSet outs(a.common.out);
    std::vector<FluctuationReport> reports;
    for (const auto &s : specs) {
        EnsembleOptions opts;
        opts.frame = frame;
        opts.pin_seed = a.seed_pin;
        opts.jobs = jobs;
        reports.push_back(ensemble_fluctuations(s, a.circuits, opts));
        std::ostringstream csv;
        write_fluctuation_csv(csv, reports.back());
        outs.write("majorization_" + reports.back().label + "_" + std::to_string(s.effective_gates()) + ".csv", csv.str());
    }
    const int haar_n = a.haar_samples > 0 ? a.haar_samples : a.circuits;
    reports.push_back(haar_baseline(a.n, haar_n, a.common.seed, jobs));
    {
        std::ostringstream csv;
        write_fluctuation_csv(csv, reports.back());
        outs.write("majorization_Haar.csv", csv.str());
    }

    std::vector<std::size_t> order(reports.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return reports[x].summary < reports[y].summary; });
    std::ostringstream rank;
    rank << "rank,family,n_gates,summary,summary_se\n";
    out << "rank  family  gates   summary      se\n";
    for (std::size_t r = 0; r < order.size(); ++r) {
        const auto &rep = reports[order[r]];
        const int g = rep.spec ? rep.spec->effective_gates() : 0;
        const std::string label = rep.spec ? rep.label : "Haar";
        rank << (r + 1) << ',' << label << ',' << g << ',' << format_double(rep.summary) << ','
             << format_double(rep.summary_se) << '\n';
        out << std::left << std::setw(6) << (r + 1) << std::setw(8) << label << std::setw(8) << g << std::setw(13)
            << rep.summary << rep.summary_se << '\n';
    }
    outs.write("ranking.csv", rank.str());
    man.outputs = outs.files();
    return kOk;
}

// pauli-map -----------------------------------------------------------------

struct PauliMapArgs {
    Common common;
    std::string families = "G1,G2,G3,MG,D2,DN";
    std::string gates = "200";
    int circuits = kDefaultCloudSize;
};

inline int cmd_pauli_map(const PauliMapArgs &a, RunManifest &man, std::ostream &out, std::ostream &) {
    const int jobs = a.common.resolved_jobs();
    const auto families = parse_families(a.families, false);
    const auto gates = parse_int_list(a.gates, "--gates");
    if (a.circuits < 3) throw ConfigError("--circuits must be >= 3");
    std::vector<SampleSpec> specs;
    for (const auto &f : families)
        for (int g : gates) {
            SampleSpec s{f.family, 2, g, a.common.seed};
            try {
                s.validate();
            } catch (const std::invalid_argument &e) {
                throw ConfigError(e.what());
            }
            if (std::none_of(specs.begin(), specs.end(), [&](const SampleSpec &o) {
                    return o.family == s.family && o.effective_gates() == s.effective_gates();
                }))
                specs.push_back(s);
        }

    std::vector<PauliCloud> clouds;
    for (const auto &s : specs) clouds.push_back(ensemble_cloud(s, a.circuits, jobs));
    clouds.push_back(haar_cloud(a.circuits, a.common.seed, jobs));

    Eigen::Index total = 0;
    for (const auto &c : clouds) total += c.rows.rows();
    RMatrix stacked(total, kCloudColumns);
    Eigen::Index at = 0;
    for (const auto &c : clouds) {
        stacked.middleRows(at, c.rows.rows()) = c.rows;
        at += c.rows.rows();
    }
    const Projection proj = pca_project(stacked, 2);

    OutputSet outs(a.common.out);
    std::ostringstream cloud_csv, stats;
    stats << "family,n_gates,n,mean_distance,std_distance,se_distance,max_norm_defect\n";
    out << "family  gates  centroid distance (mean +/- se)\n";
    at = 0;
    for (std::size_t i = 0; i < clouds.size(); ++i) {
        const auto &c = clouds[i];
        write_cloud_csv(cloud_csv, c, i == 0);
        Projection part = proj;
        part.coords = proj.coords.middleRows(at, c.rows.rows());
        at += c.rows.rows();
        std::ostringstream pcsv;
        write_projection_csv(pcsv, c.seeds, part);
        outs.write("projection_" + c.family + "_" + std::to_string(c.n_gates) + ".csv", pcsv.str());
        const auto st = distance_stats(centroid_distances(c.rows));
        stats << c.family << ',' << c.n_gates << ',' << c.rows.rows() << ',' << format_double(st.mean) << ','
              << format_double(st.std) << ',' << format_double(st.se) << ',' << format_double(max_norm_defect(c.rows))
              << '\n';
        out << std::left << std::setw(8) << c.family << std::setw(7) << c.n_gates << st.mean << " +/- " << st.se << '\n';
    }
    outs.write("cloud.csv", cloud_csv.str());
    outs.write("cloud_stats.csv", stats.str());
    nlohmann::json axes = nlohmann::json::array();
    for (int k = 0; k < 2; ++k)
        axes.push_back({{"variance", proj.variances[k]},
                        {"loadings", std::vector<double>(proj.axes.col(k).data(), proj.axes.col(k).data() + kCloudColumns)}});
    outs.write("pca.json", nlohmann::json{{"axes", axes}}.dump(2) + "\n");
    man.outputs = outs.files();
    return kOk;
}

// ising ---------------------------------------------------------------------

struct IsingArgs {
    Common common;
    int n = 4;
    std::string steps = "1,2,4,8,16,32,64";
    double time = kIsingTime;
};

inline int cmd_ising(const IsingArgs &a, RunManifest &man, std::ostream &out, std::ostream &) {
    if (a.n < 2 || a.n > 10) throw ConfigError("--n must be in [2, 10]");
    if (!std::isfinite(a.time)) throw ConfigError("--time must be finite");
    const auto steps = parse_int_list(a.steps, "--steps");
    for (int m : steps)
        if (m < 1) throw ConfigError("--steps entries must be >= 1");
    IsingParams p = sample_ising(a.n, a.common.seed);
    p.time = a.time;

    const auto err = trotter_errors(p, steps);
    OutputSet outs(a.common.out);
    std::ostringstream csv;
    csv << "steps,error,total,CNOT,RZ,H\n";
    out << "steps  error         gates\n";
    for (std::size_t i = 0; i < steps.size(); ++i) {
        auto counts = gate_count(trotter_circuit(p, steps[i]));
        csv << steps[i] << ',' << format_double(err[i]) << ',' << counts["total"] << ',' << counts["CNOT"] << ','
            << counts["RZ"] << ',' << counts["H"] << '\n';
        out << std::left << std::setw(7) << steps[i] << std::setw(14) << err[i] << counts["total"] << '\n';
    }
    nlohmann::json summary{{"n_qubits", a.n},
                           {"seed", a.common.seed},
                           {"time", a.time},
                           {"reference_gate_counts", {{"LiH", kReferenceIsingGatesLiH}, {"H2O", kReferenceIsingGatesH2O}}}};
    if (steps.size() >= 2) {
        std::vector<double> x(steps.begin(), steps.end());
        summary["log_log_slope"] = log_log_slope(x, err);
        out << "log-log slope " << summary["log_log_slope"].get<double>() << '\n';
    }
    outs.write("ising_params.json", ising_to_json(p).dump(2) + "\n");
    outs.write("trotter.csv", csv.str());
    outs.write("ising_summary.json", summary.dump(2) + "\n");
    man.outputs = outs.files();
    return kOk;
}

// data ----------------------------------------------------------------------

struct DataGenArgs {
    Common common;
    std::string family = "tfim-chain";
    std::string name;
    int n = 6;
    int points = 100;
    int k = 1;
    double lo = kTfimGridLo, hi = kTfimGridHi;
    double window_lo = kTfimWindowLo, window_hi = kTfimWindowHi;
};

inline int cmd_data_gen(DataGenArgs a, RunManifest &man, std::ostream &out, std::ostream &) {
    if (a.name.empty()) a.name = (a.family == "tfim-chain" ? "tfim" : a.family + "-") + std::to_string(a.n);
    if (a.common.out.empty()) a.common.out = "data/" + a.name;
    const int jobs = a.common.resolved_jobs();
    std::vector<double> grid;
    std::vector<PauliSum> hs;
    Dataset d;
    try {
        grid = uniform_grid(a.lo, a.hi, a.points);
        for (double r : grid) hs.push_back(synthetic_family(a.family, a.n, r));
        d = build_dataset([&](double r) { return synthetic_family(a.family, a.n, r); }, grid, a.k, a.family, jobs);
        d = split_dataset(std::move(d), a.window_lo, a.window_hi);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    auto m = write_dataset_archive(a.common.out, a.name, a.family, hs, a.k, {a.window_lo, a.window_hi});
    m.extra["generator"] = {{"family", a.family}, {"n_qubits", a.n}, {"points", a.points}, {"lo", a.lo}, {"hi", a.hi}};
    write_file_atomic(std::filesystem::path(a.common.out) / "manifest.json", m.to_json().dump(2) + "\n");
    man.outputs = m.files;
    man.outputs.push_back("manifest.json");
    out << "wrote " << a.common.out << ": " << d.records.size() << " records, " << d.train.size() << " train, "
        << d.test.size() << " test, " << d.excluded.size() << " excluded\n";
    return kOk;
}

inline int cmd_data_inspect(const std::string &dir, int jobs, std::ostream &out) {
    Dataset d;
    try {
        d = load_dataset(dir, jobs > 0 ? jobs : default_jobs());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    out << "source: " << d.source << "\nqubits: " << d.n_qubits << "\nexcited index: " << d.excited_index
        << "\nrecords: " << d.records.size() << "\nexcluded: " << d.excluded.size() << "\ntrain: " << d.train.size()
        << "\ntest: " << d.test.size() << '\n';
    if (d.test_window) out << "test window: [" << d.test_window->first << ", " << d.test_window->second << "]\n";
    if (!d.records.empty())
        out << "grid: " << d.records.front().params[0] << " .. " << d.records.back().params[0] << '\n';
    out << "R,E0,dE\n";
    for (const auto &r : d.records)
        out << format_double(r.params[0]) << ',' << format_double(r.energies[0]) << ',' << format_double(r.target) << '\n';
    return kOk;
}

// entry point ---------------------------------------------------------------

inline constexpr const char *kConfigHelp =
    "Config files (--config FILE) hold one 'key = value' per line, where key is a long\n"
    "option name without dashes (e.g. 'seeds = 50', 'families = G3,MG'). Lines starting\n"
    "with '#' are comments. Flags given on the command line override the file.\n"
    "Exit codes: 0 success, 2 configuration error, 3 runtime failure (partial outputs kept).";

inline int run(const std::vector<std::string> &raw_args, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    CLI::App app{"Quantum reservoir computing experiments", "qrc-cli"};
    app.footer(kConfigHelp);
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    QrcArgs qa;
    auto *qrc = app.add_subcommand("qrc", "Reservoir regression sweep over families and gate counts");
    add_common(qrc, qa.common, "out/qrc");
    qrc->add_option("--dataset", qa.dataset, "Dataset directory or built-in name (tfim4, tfim6, tfim8)")->capture_default_str();
    qrc->add_option("--families", qa.families, "Comma list of families, 'all', Ising, Identity")->capture_default_str();
    qrc->add_option("--gates", qa.gates, "Comma list of gate counts")->capture_default_str();
    qrc->add_option("--seeds", qa.seeds, "Reservoirs per cell")->capture_default_str();
    qrc->add_option("--k", qa.k, "Excited level for built-in datasets (1 or 2)")->capture_default_str();
    qrc->add_option("--alpha", qa.alpha, "Ridge regularization")->capture_default_str();
    qrc->add_option("--trotter-steps", qa.trotter_steps, "Ising reservoir Trotter steps (0 = exact)")->capture_default_str();

    MajorizationArgs ma;
    auto *maj = app.add_subcommand("majorization", "Cumulant fluctuations per family plus a Haar baseline");
    add_common(maj, ma.common, "out/majorization");
    maj->add_option("--n", ma.n, "Qubits")->capture_default_str();
    maj->add_option("--circuits", ma.circuits, "Circuits per family")->capture_default_str();
    maj->add_option("--haar-samples", ma.haar_samples, "Haar states (0 = same as --circuits)")->capture_default_str();
    maj->add_option("--families", ma.families, "Comma list of families or 'all'")->capture_default_str();
    maj->add_option("--gates", ma.gates, "Comma list of gate counts")->capture_default_str();
    maj->add_option("--frame", ma.frame, "auto, computational or hadamard")->capture_default_str();
    maj->add_flag("--seed-pin", ma.seed_pin, "Reuse one seed for every circuit");

    PauliMapArgs pa;
    auto *pm = app.add_subcommand("pauli-map", "Two-qubit Pauli-space clouds and PCA projection");
    add_common(pm, pa.common, "out/pauli-map");
    pm->add_option("--families", pa.families, "Comma list of families")->capture_default_str();
    pm->add_option("--gates", pa.gates, "Comma list of gate counts")->capture_default_str();
    pm->add_option("--circuits", pa.circuits, "Circuits per family")->capture_default_str();

    IsingArgs ia;
    auto *is = app.add_subcommand("ising", "Trotter error of a random Ising evolution");
    add_common(is, ia.common, "out/ising");
    is->add_option("--n", ia.n, "Qubits")->capture_default_str();
    is->add_option("--steps", ia.steps, "Comma list of Trotter step counts")->capture_default_str();
    is->add_option("--time", ia.time, "Evolution time")->capture_default_str();

    auto *data = app.add_subcommand("data", "Dataset archives");
    data->require_subcommand(1);
    DataGenArgs ga;
    auto *gen = data->add_subcommand("gen", "Write a synthetic dataset archive");
    add_common(gen, ga.common, "");
    gen->add_option("family", ga.family, "Synthetic family")->capture_default_str();
    gen->add_option("--name", ga.name, "Dataset name (default tfim<n>)");
    gen->add_option("--n", ga.n, "Qubits")->capture_default_str();
    gen->add_option("--points", ga.points, "Grid points")->capture_default_str();
    gen->add_option("--k", ga.k, "Excited level (1 or 2)")->capture_default_str();
    gen->add_option("--lo", ga.lo, "Grid start")->capture_default_str();
    gen->add_option("--hi", ga.hi, "Grid end")->capture_default_str();
    gen->add_option("--window-lo", ga.window_lo, "Test window start")->capture_default_str();
    gen->add_option("--window-hi", ga.window_hi, "Test window end")->capture_default_str();
    std::string inspect_dir;
    int inspect_jobs = 0;
    auto *inspect = data->add_subcommand("inspect", "Summarize a dataset archive");
    inspect->add_option("dir", inspect_dir, "Dataset directory")->required();
    inspect->add_option("--jobs", inspect_jobs, "Worker threads");

    std::string command;
    for (std::size_t i = 0; i < raw_args.size(); ++i) command += (i ? " " : "") + raw_args[i];

    try {
        const auto args = merge_config_file(raw_args);
        std::vector<const char *> argv;
        for (const auto &s : args) argv.push_back(s.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kConfigError;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    if (inspect->parsed()) {
        try {
            return cmd_data_inspect(inspect_dir, inspect_jobs, out);
        } catch (const ConfigError &e) {
            err << "error: " << e.what() << '\n';
            return kConfigError;
        } catch (const std::exception &e) {
            err << "error: " << e.what() << '\n';
            return kRuntimeFailure;
        }
    }

    const CLI::App *sub = nullptr;
    const Common *common = nullptr;
    for (auto [s, c] : {std::pair<CLI::App *, Common *>{qrc, &qa.common}, {maj, &ma.common}, {pm, &pa.common},
                        {is, &ia.common}, {gen, &ga.common}})
        if (s->parsed()) sub = s, common = c;

    RunManifest man;
    man.command = command;
    man.config = canonical_config(sub);
    man.seed = common->seed;
    const auto t0 = std::chrono::steady_clock::now();
    int code = kOk;
    std::string out_dir = common->out;
    try {
        if (sub == qrc) code = cmd_qrc(qa, man, out, err);
        else if (sub == maj) code = cmd_majorization(ma, man, out, err);
        else if (sub == pm) code = cmd_pauli_map(pa, man, out, err);
        else if (sub == is) code = cmd_ising(ia, man, out, err);
        else {
            if (out_dir.empty()) out_dir = "data/" + (ga.name.empty() ? "tfim" + std::to_string(ga.n) : ga.name);
            ga.common.out = out_dir;
            code = cmd_data_gen(ga, man, out, err);
        }
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        man.errors.push_back(e.what());
        code = kRuntimeFailure;
    }
    man.status = code == kOk ? "ok" : "failed";
    man.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        std::filesystem::create_directories(out_dir);
        write_file_atomic(std::filesystem::path(out_dir) / kRunManifestName, man.to_json().dump(2) + "\n");
    } catch (const std::exception &e) {
        err << "error: cannot write run manifest: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return code;
}

} // namespace qrc::cli
