// Copyright 2026 The entcool Authors
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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "entcool/cooling.hpp"
#include "entcool/entanglement.hpp"
#include "entcool/io.hpp"
#include "entcool/ising_model.hpp"
#include "entcool/spectrum_stats.hpp"

namespace entcool {

inline constexpr std::string_view kVersion = "0.1.0";

enum class PresetKind { PhaseScan, Cooling, PlateauScaling, SpacingHistogram };

inline std::string_view preset_name(PresetKind k) noexcept {
    switch (k) {
        case PresetKind::PhaseScan: return "phase-scan";
        case PresetKind::Cooling: return "cooling";
        case PresetKind::PlateauScaling: return "plateau-scaling";
        case PresetKind::SpacingHistogram: return "spacing-histogram";
    }
    return "?";
}

inline PresetKind parse_preset(std::string_view s) {
    for (auto k : {PresetKind::PhaseScan, PresetKind::Cooling, PresetKind::PlateauScaling,
                   PresetKind::SpacingHistogram}) {
        if (s == preset_name(k)) return k;
    }
    throw std::invalid_argument("unknown preset '" + std::string(s) + "'");
}

// CSV schemas. Column names and order are part of the output contract.
namespace schema {
inline const std::vector<std::string> kPhaseScan{"J_over_h", "N", "S2_avg", "concurrence_nn"};
inline const std::vector<std::string> kCoolingTrace{"step", "temperature", "mean_S2", "stderr_S2",
                                                    "accept_rate"};
inline const std::vector<std::string> kCoolingSummary{
    "phase",   "J_over_h",  "gate_set",     "N",            "steps",         "trajectories",
    "initial_S2", "final_S2", "final_stderr", "plateau_length", "plateau_gap", "file"};
inline const std::vector<std::string> kPlateauScaling{"N", "plateau_length", "plateau_gap"};
inline const std::vector<std::string> kPlateauFit{"quantity", "a", "b", "residual"};
inline const std::vector<std::string> kSpectrum{"bin_left", "bin_right", "density",
                                                "reference_poisson", "reference_wd"};
inline const std::vector<std::string> kSpectrumSummary{
    "phase",    "J_over_h",  "gate_set",     "N",        "steps",     "trajectories",
    "ratio_form", "rbar",    "n_ratios",     "n_degenerate", "l1_poisson", "l1_wd", "file"};
}  // namespace schema

/// Every knob a preset reads; each has a default.
struct PresetParams {
    std::vector<int> sizes{9, 11, 13};
    std::vector<double> couplings{-2.5, 0.75, 2.5};  // J/h
    double field = 1.0;
    std::vector<GateSet> gate_sets{GateSet::Set1, GateSet::Universal};
    int steps = 3000;
    int trajectories = 24;
    std::uint64_t seed = 20221;
    double alpha = 2.0;
    int n_temperatures = 100;
    double t_high = 1e-4;
    double t_low = 1e-8;
    double dt = std::numbers::pi / 10;
    int renorm_interval = 10000;
    int max_sites = kDefaultMaxSites;

    // phase-scan
    double scan_min = -3.0;
    double scan_max = 3.0;
    int scan_points = 61;

    // plateau-scaling
    double plateau_tol = 0.05;

    // spacing-histogram
    int bins = 25;
    int n_drop = 10;
    int min_surviving = 16;
    bool raw_ratios = false;
    bool pool_offsets = true;

    bool trajectory_logs = false;
    std::filesystem::path out_dir = "out";
};

struct ExperimentPreset {
    PresetKind kind = PresetKind::Cooling;
    PresetParams params;
};

/// Defaults for each preset, scaled to finish on a laptop.
inline ExperimentPreset make_preset(PresetKind kind) {
    ExperimentPreset p{kind, {}};
    switch (kind) {
        case PresetKind::PhaseScan: break;
        case PresetKind::Cooling: break;
        case PresetKind::PlateauScaling:
            p.params.couplings = {2.5};
            p.params.gate_sets = {GateSet::Universal};
            break;
        case PresetKind::SpacingHistogram:
            p.params.couplings = {2.5};
            p.params.sizes = {13};
            break;
    }
    return p;
}

inline nlohmann::json to_json(const PresetParams& p) {
    std::vector<std::string> sets;
    for (auto g : p.gate_sets) sets.emplace_back(to_string(g));
    return {{"sizes", p.sizes},
            {"couplings_J_over_h", p.couplings},
            {"field", p.field},
            {"gate_sets", sets},
            {"steps", p.steps},
            {"trajectories", p.trajectories},
            {"seed", p.seed},
            {"alpha", p.alpha},
            {"n_temperatures", p.n_temperatures},
            {"t_high", p.t_high},
            {"t_low", p.t_low},
            {"dt", p.dt},
            {"renorm_interval", p.renorm_interval},
            {"scan_min", p.scan_min},
            {"scan_max", p.scan_max},
            {"scan_points", p.scan_points},
            {"plateau_tol", p.plateau_tol},
            {"bins", p.bins},
            {"n_drop", p.n_drop},
            {"min_surviving", p.min_surviving},
            {"raw_ratios", p.raw_ratios},
            {"pool_offsets", p.pool_offsets},
            {"trajectory_logs", p.trajectory_logs}};
}

// ---------------------------------------------------------------------------
// Validation and planning
// ---------------------------------------------------------------------------

inline CoolingConfig cooling_config(const PresetParams& p, GateSet set) {
    CoolingConfig c;
    c.gate_set = set;
    c.total_steps = p.steps;
    c.n_temperatures = p.n_temperatures;
    c.t_high = p.t_high;
    c.t_low = p.t_low;
    c.alpha = p.alpha;
    c.dt = p.dt;
    c.n_trajectories = p.trajectories;
    c.base_seed = p.seed;
    c.renorm_interval = p.renorm_interval;
    return c;
}

/// Reject bad parameter combinations before any computation starts.
inline void validate_preset(const ExperimentPreset& preset) {
    const auto& p = preset.params;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument(std::string(preset_name(preset.kind)) + ": " + why);
    };
    if (p.sizes.empty()) fail("no system sizes given");
    for (int n : p.sizes) ChainSpec{n, 1.0, 1.0, p.max_sites}.validate();
    if (!(p.field > 0.0)) fail("field h must be positive");

    if (preset.kind == PresetKind::PhaseScan) {
        if (p.scan_points < 2 || !(p.scan_max > p.scan_min)) fail("bad J/h scan grid");
        return;
    }
    if (p.couplings.empty()) fail("no couplings given");
    for (double r : p.couplings) classify_phase(ChainSpec{p.sizes.front(), r * p.field, p.field});
    if (p.gate_sets.empty()) fail("no gate sets given");
    for (auto g : p.gate_sets) cooling_config(p, g).validate();
    if (preset.kind == PresetKind::PlateauScaling) {
        if (p.steps < 1) fail("plateau scaling needs at least one step");
        if (!(p.plateau_tol > 0.0)) fail("plateau tolerance must be positive");
    }
    if (preset.kind == PresetKind::SpacingHistogram) {
        if (p.bins < 1) fail("bins must be >= 1");
        if (p.n_drop < 0 || p.min_surviving < 3) fail("bad eigenvalue drop rule");
    }
}

struct PlannedJob {
    std::string tag;
    int n_sites = 0;
    int trajectories = 0;
    int steps = 0;
};

struct RunPlan {
    std::vector<PlannedJob> jobs;
    long total_trajectories = 0;
    long total_steps = 0;
    std::size_t peak_memory_bytes = 0;
};

/// Rough peak memory of one ensemble (ground-state solve or trajectories).
inline std::size_t estimate_memory(int n_sites, int workers, int dense_max_sites = 11) {
    const std::size_t dim = std::size_t{1} << n_sites;
    const std::size_t solve = n_sites <= dense_max_sites ? dim * dim * sizeof(double) * 2
                                                         : dim * sizeof(double) * 52;
    const std::size_t table = dim * sizeof(std::uint32_t) * static_cast<std::size_t>(n_sites);
    const std::size_t per_worker = dim * sizeof(cplx) * 4;
    return std::max(solve, table + per_worker * static_cast<std::size_t>(std::max(1, workers)));
}

inline std::string phase_tag(double j_over_h) {
    return std::string(to_string(classify_phase(ChainSpec{3, j_over_h, 1.0})));
}

inline std::string ensemble_tag(double j_over_h, GateSet set, int n) {
    return phase_tag(j_over_h) + "_" + std::string(to_string(set)) + "_N" + std::to_string(n);
}

inline RunPlan plan_preset(const ExperimentPreset& preset, int workers = 1) {
    validate_preset(preset);
    const auto& p = preset.params;
    RunPlan plan;
    for (int n : p.sizes) {
        plan.peak_memory_bytes = std::max(plan.peak_memory_bytes, estimate_memory(n, workers));
        if (preset.kind == PresetKind::PhaseScan) {
            plan.jobs.push_back({"phase-scan_N" + std::to_string(n), n, 0, 0});
            continue;
        }
        for (double r : p.couplings)
            for (auto g : p.gate_sets) {
                plan.jobs.push_back({ensemble_tag(r, g, n), n, p.trajectories, p.steps});
                plan.total_trajectories += p.trajectories;
                plan.total_steps += static_cast<long>(p.trajectories) * p.steps;
            }
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct OutputFile {
    std::string name;
    std::string sha256;
    std::size_t bytes = 0;
};

struct RunManifest {
    PresetKind kind = PresetKind::Cooling;
    nlohmann::json config;
    std::string version{kVersion};
    std::uint64_t base_seed = 0;
    std::string started;
    std::string finished;
    std::vector<OutputFile> outputs;
    nlohmann::json notes = nlohmann::json::object();

    nlohmann::json to_json() const {
        nlohmann::json outs = nlohmann::json::array();
        for (const auto& o : outputs) {
            outs.push_back({{"file", o.name}, {"sha256", o.sha256}, {"bytes", o.bytes}});
        }
        return {{"preset", preset_name(kind)}, {"config", config},  {"code_version", version},
                {"base_seed", base_seed},      {"started", started}, {"finished", finished},
                {"outputs", outs},             {"notes", notes}};
    }
};

inline std::string manifest_name(PresetKind k) {
    return "manifest_" + std::string(preset_name(k)) + ".json";
}

struct RunOptions {
    int workers = 1;
    std::function<void(const std::string&)> status;
};

namespace detail {

inline std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::uint64_t ensemble_seed(std::uint64_t seed, double j_over_h, GateSet set, int n) {
    std::uint64_t bits = 0;
    static_assert(sizeof bits == sizeof j_over_h);
    std::memcpy(&bits, &j_over_h, sizeof bits);
    return derive_key(derive_key(derive_key(seed, static_cast<std::uint64_t>(n)), bits),
                      set == GateSet::Set1 ? 1u : 2u);
}

class Runner {
  public:
    Runner(const ExperimentPreset& preset, const RunOptions& opt)
        : preset_(preset), p_(preset.params), opt_(opt) {
        manifest_.kind = preset.kind;
        manifest_.config = to_json(p_);
        manifest_.base_seed = p_.seed;
        manifest_.notes["entropy_quantity"] =
            "averaged half-chain Renyi entropy over all N contiguous blocks of (N-1)/2 sites, bits";
    }

    void say(const std::string& msg) const {
        if (opt_.status) opt_.status(msg);
    }

    void emit(const std::string& name, const std::string& content) {
        io::write_file(p_.out_dir / name, content);
        manifest_.outputs.push_back({name, io::sha256_hex(content), content.size()});
    }

    const GroundState& ground(int n, double j_over_h) {
        const auto key = std::make_pair(n, j_over_h);
        auto it = gs_cache_.find(key);
        if (it == gs_cache_.end()) {
            ChainSpec spec{n, j_over_h * p_.field, p_.field, p_.max_sites};
            it = gs_cache_.emplace(key, ground_state(spec)).first;
            if (it->second.degenerate) {
                manifest_.notes["degenerate_ground_states"].push_back(
                    {{"N", n}, {"J_over_h", j_over_h}, {"multiplicity", it->second.multiplicity}});
            }
        }
        return it->second;
    }

    EnsembleResult ensemble(double j_over_h, GateSet set, int n) {
        const auto tag = ensemble_tag(j_over_h, set, n);
        CoolingConfig cfg = cooling_config(p_, set);
        cfg.base_seed = ensemble_seed(p_.seed, j_over_h, set, n);
        auto progress = [&](int idx, int done, int total) {
            say("[" + tag + "] trajectory " + std::to_string(idx) + " done (" +
                std::to_string(done) + "/" + std::to_string(total) + ")");
        };
        auto res = run_ensemble(ground(n, j_over_h).state, cfg, opt_.workers, progress);
        if (p_.trajectory_logs) emit("trajectories_" + tag + ".jsonl", io::trajectory_jsonl(res.per_trajectory));
        return res;
    }

    static std::string trace_csv(const EnsembleResult& res) {
        const auto& c = res.config;
        const auto schedule = c.total_steps > 0 ? temperature_schedule(c.t_high, c.t_low,
                                                                       c.n_temperatures, c.total_steps)
                                                : std::vector<double>{};
        io::CsvTable t(schema::kCoolingTrace);
        for (std::size_t k = 0; k < res.mean_trace.size(); ++k) {
            const double temp = schedule.empty() ? c.t_high : schedule[k == 0 ? 0 : k - 1];
            t.add_row({io::cell(k), io::cell(temp), io::cell(res.mean_trace[k]),
                       io::cell(res.stderr_trace[k]), io::cell(res.accept_rate[k])});
        }
        return t.str();
    }

    void phase_scan() {
        io::CsvTable t(schema::kPhaseScan);
        for (int n : p_.sizes) {
            say("[phase-scan] N=" + std::to_string(n));
            const auto table = RotationTable::make(n);
            for (int i = 0; i < p_.scan_points; ++i) {
                const double r = p_.scan_min + (p_.scan_max - p_.scan_min) * i / (p_.scan_points - 1);
                const auto& gs = ground(n, r);
                const double s2 = averaged_half_chain_entropy(gs.state, 2.0, table.get()).average;
                double conc = 0.0;
                for (int j = 0; j < n; ++j) conc += concurrence(gs.state, j, (j + 1) % n);
                t.add_row({io::cell(r), io::cell(n), io::cell(s2), io::cell(conc / n)});
            }
        }
        manifest_.notes["concurrence_nn"] = "Wootters concurrence averaged over the N bonds";
        emit("phase_scan.csv", t.str());
    }

    void cooling() {
        io::CsvTable summary(schema::kCoolingSummary);
        for (int n : p_.sizes)
            for (double r : p_.couplings)
                for (auto g : p_.gate_sets) {
                    const auto res = ensemble(r, g, n);
                    const auto name = "cooling_" + ensemble_tag(r, g, n) + ".csv";
                    emit(name, trace_csv(res));
                    const auto plateau = plateau_length(res.mean_trace, p_.plateau_tol);
                    summary.add_row({phase_tag(r), io::cell(r), std::string(to_string(g)),
                                     io::cell(n), io::cell(p_.steps), io::cell(p_.trajectories),
                                     io::cell(res.mean_trace.front()), io::cell(res.mean_trace.back()),
                                     io::cell(res.stderr_trace.back()), io::cell(plateau.length),
                                     io::cell(res.mean_trace.front() - res.mean_trace.back()), name});
                }
        emit("cooling_summary.csv", summary.str());
    }

    void plateau_scaling() {
        for (auto g : p_.gate_sets)
            for (double r : p_.couplings) {
                io::CsvTable t(schema::kPlateauScaling);
                std::vector<double> ns, lengths, gaps;
                for (int n : p_.sizes) {
                    const auto res = ensemble(r, g, n);
                    emit("scaling_trace_" + ensemble_tag(r, g, n) + ".csv", trace_csv(res));
                    const auto plateau = plateau_length(res.mean_trace, p_.plateau_tol);
                    if (!plateau.defined) {
                        manifest_.notes["undefined_plateau"].push_back(ensemble_tag(r, g, n));
                    }
                    const double gap = std::abs(res.mean_trace.front() - res.mean_trace.back());
                    t.add_row({io::cell(n), io::cell(plateau.length), io::cell(gap)});
                    ns.push_back(n);
                    lengths.push_back(static_cast<double>(plateau.length));
                    gaps.push_back(gap);
                }
                const auto stem = phase_tag(r) + "_" + std::string(to_string(g));
                emit("plateau_scaling_" + stem + ".csv", t.str());
                io::CsvTable fit(schema::kPlateauFit);
                auto add_fit = [&](const char* what, const std::vector<double>& y) {
                    try {
                        const auto f = fit_exponential(ns, y);
                        fit.add_row({what, io::cell(f.a), io::cell(f.b), io::cell(f.residual)});
                    } catch (const std::exception& e) {
                        fit.add_row({what, "nan", "nan", "nan"});
                        manifest_.notes["fit_errors"].push_back(stem + "/" + what + ": " + e.what());
                    }
                };
                add_fit("plateau_gap", gaps);
                add_fit("plateau_length", lengths);
                emit("plateau_fit_" + stem + ".csv", fit.str());
            }
    }

    void spacing_histogram() {
        const RmtFamily families[] = {RmtFamily::Poisson, RmtFamily::WignerDysonGUE};
        const bool raw = p_.raw_ratios;
        const double hi = raw ? 5.0 : 1.0;
        auto ref = [raw](RmtFamily f) -> std::function<double(double)> {
            if (raw) return [f](double r) { return reference_density(f, r); };
            return [f](double x) { return folded_density(f, x); };
        };
        const DropRule rule{p_.n_drop, p_.min_surviving};
        io::CsvTable summary(schema::kSpectrumSummary);
        for (int n : p_.sizes)
            for (double r : p_.couplings)
                for (auto g : p_.gate_sets) {
                    const auto res = ensemble(r, g, n);
                    std::vector<double> ratios;
                    int n_degenerate = 0;
                    std::vector<double> folded;
                    for (const auto& tr : res.per_trajectory) {
                        const std::size_t count = p_.pool_offsets ? tr.final_spectra.size() : 1;
                        for (std::size_t s = 0; s < count; ++s) {
                            const auto& ev = tr.final_spectra[s].eigenvalues;
                            const int drop = rule.effective(ev.size());
                            const auto mm = min_max_ratios(ev, drop);
                            folded.insert(folded.end(), mm.ratios.begin(), mm.ratios.end());
                            const auto sr = raw ? spacing_ratios(ev, drop) : mm;
                            ratios.insert(ratios.end(), sr.ratios.begin(), sr.ratios.end());
                            n_degenerate += sr.n_degenerate;
                        }
                    }
                    const auto tag = ensemble_tag(r, g, n);
                    const auto name = "spectrum_" + tag + ".csv";
                    if (ratios.empty() || folded.empty()) {
                        throw std::runtime_error(tag + ": no non-degenerate spacing ratios");
                    }
                    const auto hist = histogram(ratios, p_.bins, 0.0, hi);
                    io::CsvTable t(schema::kSpectrum);
                    for (const auto& b : hist) {
                        t.add_row({io::cell(b.left), io::cell(b.right), io::cell(b.density),
                                   io::cell(bin_average(ref(families[0]), b.left, b.right)),
                                   io::cell(bin_average(ref(families[1]), b.left, b.right))});
                    }
                    emit(name, t.str());
                    summary.add_row({phase_tag(r), io::cell(r), std::string(to_string(g)),
                                     io::cell(n), io::cell(p_.steps), io::cell(p_.trajectories),
                                     raw ? "raw" : "min_max", io::cell(mean_of(folded)),
                                     io::cell(ratios.size()), io::cell(n_degenerate),
                                     io::cell(l1_distance(hist, ref(families[0]))),
                                     io::cell(l1_distance(hist, ref(families[1]))), name});
                }
        manifest_.notes["spectrum_sort_order"] =
            "eigenvalues sorted ascending after dropping the largest ones";
        emit("spectrum_summary.csv", summary.str());
    }

    RunManifest run() {
        manifest_.started = utc_now();
        std::filesystem::create_directories(p_.out_dir);
        switch (preset_.kind) {
            case PresetKind::PhaseScan: phase_scan(); break;
            case PresetKind::Cooling: cooling(); break;
            case PresetKind::PlateauScaling: plateau_scaling(); break;
            case PresetKind::SpacingHistogram: spacing_histogram(); break;
        }
        manifest_.finished = utc_now();
        io::write_file(p_.out_dir / manifest_name(preset_.kind), manifest_.to_json().dump(2) + "\n");
        return manifest_;
    }

  private:
    const ExperimentPreset& preset_;
    const PresetParams& p_;
    RunOptions opt_;
    RunManifest manifest_;
    std::map<std::pair<int, double>, GroundState> gs_cache_;
};

}  // namespace detail

/**
 * Run a preset and write its CSV outputs plus manifest_<preset>.json into
 * params.out_dir. Parameters are validated before anything is computed.
 * CSV files depend only on the parameters, never on timing or worker count.
 */
inline RunManifest run_preset(const ExperimentPreset& preset, const RunOptions& opt = {}) {
    validate_preset(preset);
    detail::Runner runner(preset, opt);
    return runner.run();
}

}  // namespace entcool
