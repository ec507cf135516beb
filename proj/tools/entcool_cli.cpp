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

// Command-line driver for the entanglement cooling experiments.
//
//   entcool phase-scan | cool | scaling | spectrum | plot
//
// Settings come from (highest precedence first) the command line, an INI
// file given with --config whose [section] names match the subcommands,
// and built-in defaults.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entcool/entcool.hpp"

namespace {

int default_workers() {
    if (const char* env = std::getenv("ENTCOOL_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid ENTCOOL_WORKERS='" << env << "'\n";
    }
    return 1;
}

struct Subcommand {
    CLI::App* app = nullptr;
    entcool::ExperimentPreset preset;
    std::vector<std::string> gate_sets;
};

void add_common_options(Subcommand& sc) {
    auto& p = sc.preset.params;
    auto* app = sc.app;
    app->add_option("--sizes,-N", p.sizes, "Odd chain lengths")->capture_default_str();
    app->add_option("--field", p.field, "Transverse field h (> 0)")->capture_default_str();
    app->add_option("--max-sites", p.max_sites, "Largest allowed chain length")
        ->capture_default_str();
    if (sc.preset.kind == entcool::PresetKind::PhaseScan) {
        app->add_option("--scan-min", p.scan_min, "Smallest J/h")->capture_default_str();
        app->add_option("--scan-max", p.scan_max, "Largest J/h")->capture_default_str();
        app->add_option("--scan-points", p.scan_points, "Grid points in J/h")->capture_default_str();
        return;
    }
    for (auto g : p.gate_sets) sc.gate_sets.emplace_back(entcool::to_string(g));
    app->add_option("--couplings,-J", p.couplings, "J/h values")->capture_default_str();
    app->add_option("--gate-sets", sc.gate_sets, "set1 and/or universal")->capture_default_str();
    app->add_option("--steps", p.steps, "Metropolis steps per trajectory")->capture_default_str();
    app->add_option("--trajectories,-M", p.trajectories, "Trajectories per ensemble")
        ->capture_default_str();
    app->add_option("--alpha", p.alpha, "Renyi index of the cost function")->capture_default_str();
    app->add_option("--temperatures", p.n_temperatures, "Points on the temperature grid")
        ->capture_default_str();
    app->add_option("--t-high", p.t_high, "Initial temperature")->capture_default_str();
    app->add_option("--t-low", p.t_low, "Final temperature")->capture_default_str();
    app->add_option("--dt", p.dt, "Gate angle")->capture_default_str();
    app->add_option("--renorm-interval", p.renorm_interval, "Steps between renormalizations")
        ->capture_default_str();
    app->add_option("--plateau-tol", p.plateau_tol, "Relative plateau band")->capture_default_str();
    app->add_flag("--trajectory-log", p.trajectory_logs, "Write per-trajectory JSON-lines logs");
    if (sc.preset.kind == entcool::PresetKind::SpacingHistogram) {
        app->add_option("--bins", p.bins, "Histogram bins")->capture_default_str();
        app->add_option("--n-drop", p.n_drop, "Largest eigenvalues dropped")->capture_default_str();
        app->add_option("--min-surviving", p.min_surviving, "Eigenvalues kept at least")
            ->capture_default_str();
        app->add_flag("--raw-ratios", p.raw_ratios, "Histogram raw r_i on [0, 5] instead of min/max");
        app->add_option("--pool-offsets", p.pool_offsets, "Pool all block offsets (else offset 0)")
            ->capture_default_str();
    }
}

std::string human_bytes(std::size_t b) {
    const char* unit[] = {"B", "KiB", "MiB", "GiB", "TiB"};
    double v = static_cast<double>(b);
    int u = 0;
    while (v >= 1024 && u < 4) {
        v /= 1024;
        ++u;
    }
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << v << ' ' << unit[u];
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement cooling of transverse-field Ising ground states"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "INI config file; [section] per subcommand");

    std::uint64_t seed = 0;
    int workers = default_workers();
    std::string out_dir = "out";
    bool dry_run = false;
    auto* seed_opt = app.add_option("--seed", seed, "Base seed (u64)");
    app.add_option("--workers", workers, "Worker threads (default $ENTCOOL_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_flag("--dry-run", dry_run, "Validate and print the plan without computing");

    std::vector<Subcommand> subs;
    subs.reserve(4);
    const std::pair<const char*, entcool::PresetKind> names[] = {
        {"phase-scan", entcool::PresetKind::PhaseScan},
        {"cool", entcool::PresetKind::Cooling},
        {"scaling", entcool::PresetKind::PlateauScaling},
        {"spectrum", entcool::PresetKind::SpacingHistogram},
    };
    const char* help[] = {"Half-chain S2 and concurrence over a J/h grid",
                          "Cooling traces per phase, gate set and N",
                          "Plateau length and gap versus N with exponential fits",
                          "Entanglement-spectrum spacing-ratio histograms after cooling"};
    for (int i = 0; i < 4; ++i) {
        Subcommand sc;
        sc.preset = entcool::make_preset(names[i].second);
        sc.app = app.add_subcommand(names[i].first, help[i]);
        subs.push_back(std::move(sc));
        add_common_options(subs.back());
    }
    auto* plot = app.add_subcommand("plot", "Write plotting scripts for outputs in --out");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plot->parsed()) {
            for (const auto& p : entcool::emit_plot_scripts(out_dir)) std::cout << p.string() << '\n';
            return 0;
        }
        for (auto& sc : subs) {
            if (!sc.app->parsed()) continue;
            auto& p = sc.preset.params;
            p.out_dir = out_dir;
            if (seed_opt->count() > 0) p.seed = seed;
            if (sc.preset.kind != entcool::PresetKind::PhaseScan) {
                p.gate_sets.clear();
                for (const auto& g : sc.gate_sets) p.gate_sets.push_back(entcool::parse_gate_set(g));
            }
            const auto plan = entcool::plan_preset(sc.preset, workers);
            if (dry_run) {
                std::cout << "preset: " << entcool::preset_name(sc.preset.kind) << '\n';
                for (const auto& j : plan.jobs) {
                    std::cout << "  " << j.tag << ": N=" << j.n_sites << " trajectories="
                              << j.trajectories << " steps=" << j.steps << '\n';
                }
                std::cout << "planned trajectories: " << plan.total_trajectories << '\n'
                          << "planned Metropolis steps: " << plan.total_steps << '\n'
                          << "estimated peak state memory: " << human_bytes(plan.peak_memory_bytes)
                          << " (" << workers << " worker" << (workers == 1 ? "" : "s") << ")\n";
                return 0;
            }
            entcool::RunOptions opt;
            opt.workers = workers;
            opt.status = [](const std::string& msg) { std::cerr << msg << '\n'; };
            const auto manifest = entcool::run_preset(sc.preset, opt);
            for (const auto& o : manifest.outputs) std::cout << o.sha256 << "  " << o.name << '\n';
            std::cout << "manifest: "
                      << (p.out_dir / entcool::manifest_name(sc.preset.kind)).string() << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
