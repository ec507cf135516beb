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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "entcool/experiments.hpp"
#include "entcool/io.hpp"

namespace entcool {

namespace detail {

// Shared prelude: CSV loading relative to the script's own directory.
inline constexpr const char* kPlotPrelude = R"PY(#!/usr/bin/env python3
# Generated by entcool. Reads CSV files next to this script.
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(HERE, name), newline="") as f:
        rows = list(csv.DictReader(f))
    return rows


def col(rows, key, cast=float):
    return [cast(r[key]) for r in rows]


def poisson(r):
    return 1.0 / (1.0 + r) ** 2


def wd_gue(r):
    import math
    z = 4.0 * math.pi / (81.0 * math.sqrt(3.0))
    return (r + r * r) ** 2 / (1.0 + r + r * r) ** 4 / z

)PY";

inline constexpr const char* kFig1 = R"PY(
rows = load("phase_scan.csv")
sizes = sorted({int(r["N"]) for r in rows})
fig, ax = plt.subplots(figsize=(6, 4))
inset = ax.inset_axes([0.12, 0.55, 0.35, 0.38])
for n in sizes:
    sub = [r for r in rows if int(r["N"]) == n]
    x = col(sub, "J_over_h")
    ax.plot(x, col(sub, "S2_avg"), label=f"N={n}")
    inset.plot(x, col(sub, "concurrence_nn"))
for xc in (-1.0, 1.0):
    ax.axvline(xc, color="k", ls="--", lw=0.8)
ax.set_xlabel("J/h")
ax.set_ylabel("half-chain S2 (bits)")
inset.set_title("NN concurrence", fontsize=8)
ax.legend(loc="lower right")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "fig1_phase_scan.png"), dpi=150)
)PY";

inline constexpr const char* kFig3 = R"PY(
summary = load("cooling_summary.csv")
phases = ["FM", "PARA", "AFM"]
sets = ["set1", "universal"]
fig, axes = plt.subplots(3, 2, figsize=(10, 10), sharex=True, squeeze=False)
for i, phase in enumerate(phases):
    for j, gs in enumerate(sets):
        ax = axes[i][j]
        for r in summary:
            if r["phase"] != phase or r["gate_set"] != gs:
                continue
            tr = load(r["file"])
            steps = col(tr, "step")
            mean = col(tr, "mean_S2")
            err = col(tr, "stderr_S2")
            ax.plot(steps, mean, label="N=" + r["N"])
            ax.fill_between(steps, [m - e for m, e in zip(mean, err)],
                            [m + e for m, e in zip(mean, err)], alpha=0.2)
        ax.set_title(f"({'abcdef'[2 * i + j]}) {phase}, {gs}")
        if j == 0:
            ax.set_ylabel("mean S2 (bits)")
        if i == 2:
            ax.set_xlabel("Metropolis step")
        if ax.lines:
            ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(HERE, "fig3_cooling.png"), dpi=150)
)PY";

inline constexpr const char* kFig4 = R"PY(
import glob
import math
files = sorted(glob.glob(os.path.join(HERE, "plateau_scaling_*.csv")))
fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
for path in files:
    stem = os.path.basename(path)[len("plateau_scaling_"):-len(".csv")]
    rows = load(os.path.basename(path))
    fits = {r["quantity"]: r for r in load("plateau_fit_" + stem + ".csv")}
    n = col(rows, "N")
    for ax, key in ((left, "plateau_gap"), (right, "plateau_length")):
        ax.plot(n, col(rows, key), "o", label=stem)
        f = fits.get(key)
        if f and f["a"] != "nan":
            a, b = float(f["a"]), float(f["b"])
            xs = [min(n) + (max(n) - min(n)) * k / 50 for k in range(51)]
            ax.plot(xs, [a * math.exp(b * x) for x in xs], "r-",
                    label=f"a={a:.3g}, b={b:.3g}")
left.set_ylabel("|initial - final| (bits)")
right.set_ylabel("plateau length (steps)")
for ax in (left, right):
    ax.set_xlabel("N")
    ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(HERE, "fig4_scaling.png"), dpi=150)
)PY";

inline constexpr const char* kFig5 = R"PY(
summary = load("spectrum_summary.csv")
fig, axes = plt.subplots(1, max(1, len(summary)), figsize=(5 * max(1, len(summary)), 4),
                         squeeze=False)
for ax, r in zip(axes[0], summary):
    hist = load(r["file"])
    left = col(hist, "bin_left")
    right = col(hist, "bin_right")
    ax.bar(left, col(hist, "density"), width=[b - a for a, b in zip(left, right)],
           align="edge", alpha=0.5, label="data")
    folded = r["ratio_form"] == "min_max"
    hi = right[-1]
    xs = [hi * k / 200 for k in range(201)]
    scale = 2.0 if folded else 1.0
    ax.plot(xs, [scale * poisson(x) for x in xs], "k--", label="Poisson")
    ax.plot(xs, [scale * wd_gue(x) for x in xs], "r-", label="Wigner-Dyson (GUE)")
    ax.set_title(f"{r['phase']} {r['gate_set']} N={r['N']}  rbar={float(r['rbar']):.3f}")
    ax.set_xlabel("min/max spacing ratio" if folded else "r")
    ax.set_ylabel("P")
    ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(HERE, "fig5_spectrum.png"), dpi=150)
)PY";

inline constexpr const char* kFig6 = R"PY(
summary = [r for r in load("spectrum_summary.csv") if r["gate_set"] == "universal"]
fig, ax = plt.subplots(figsize=(6, 4))
for r in summary:
    hist = load(r["file"])
    mid = [(a + b) / 2 for a, b in zip(col(hist, "bin_left"), col(hist, "bin_right"))]
    ax.step(mid, col(hist, "density"), where="mid",
            label=f"{r['phase']} J/h={r['J_over_h']} N={r['N']} rbar={float(r['rbar']):.3f}")
if summary:
    hist = load(summary[0]["file"])
    mid = [(a + b) / 2 for a, b in zip(col(hist, "bin_left"), col(hist, "bin_right"))]
    ax.plot(mid, col(hist, "reference_poisson"), "k--", label="Poisson")
    ax.plot(mid, col(hist, "reference_wd"), "r-", label="Wigner-Dyson (GUE)")
ax.set_xlabel("spacing ratio")
ax.set_ylabel("P")
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(HERE, "fig6_spectrum_phases.png"), dpi=150)
)PY";

inline const std::vector<std::string>& expected_columns(const std::string& file) {
    static const std::vector<std::string> none;
    auto starts = [&](const char* p) { return file.rfind(p, 0) == 0; };
    if (file == "phase_scan.csv") return schema::kPhaseScan;
    if (file == "cooling_summary.csv") return schema::kCoolingSummary;
    if (file == "spectrum_summary.csv") return schema::kSpectrumSummary;
    if (starts("cooling_") || starts("scaling_trace_")) return schema::kCoolingTrace;
    if (starts("plateau_scaling_")) return schema::kPlateauScaling;
    if (starts("plateau_fit_")) return schema::kPlateauFit;
    if (starts("spectrum_")) return schema::kSpectrum;
    return none;
}

inline void check_outputs(const std::filesystem::path& dir, const nlohmann::json& manifest) {
    for (const auto& o : manifest.at("outputs")) {
        const auto name = o.at("file").get<std::string>();
        const auto path = dir / name;
        if (!std::filesystem::exists(path)) throw std::runtime_error("missing file: " + path.string());
        const auto& want = expected_columns(name);
        if (want.empty()) continue;
        const auto have = io::read_csv_header(path);
        for (const auto& c : want) {
            if (std::find(have.begin(), have.end(), c) == have.end()) {
                throw std::runtime_error("missing column '" + c + "' in " + path.string());
            }
        }
    }
}

}  // namespace detail

/**
 * Write matplotlib scripts next to the preset outputs in `dir`, one per
 * figure the available outputs support. Every output listed in a manifest
 * must exist and carry its schema columns.
 */
inline std::vector<std::filesystem::path> emit_plot_scripts(const std::filesystem::path& dir) {
    struct Figure {
        PresetKind preset;
        const char* script;
        const char* body;
    };
    const Figure figures[] = {
        {PresetKind::PhaseScan, "plot_fig1_phase_scan.py", detail::kFig1},
        {PresetKind::Cooling, "plot_fig3_cooling.py", detail::kFig3},
        {PresetKind::PlateauScaling, "plot_fig4_scaling.py", detail::kFig4},
        {PresetKind::SpacingHistogram, "plot_fig5_spectrum.py", detail::kFig5},
        {PresetKind::SpacingHistogram, "plot_fig6_spectrum_phases.py", detail::kFig6},
    };

    std::vector<std::filesystem::path> written;
    std::string first_missing;
    for (const auto& f : figures) {
        const auto manifest_path = dir / manifest_name(f.preset);
        if (!std::filesystem::exists(manifest_path)) {
            if (first_missing.empty()) first_missing = manifest_path.string();
            continue;
        }
        const auto manifest = nlohmann::json::parse(io::read_file(manifest_path));
        detail::check_outputs(dir, manifest);
        const auto path = dir / f.script;
        io::write_file(path, std::string(detail::kPlotPrelude) + f.body);
        std::filesystem::permissions(path, std::filesystem::perms::owner_exec,
                                     std::filesystem::perm_options::add);
        written.push_back(path);
    }
    if (written.empty()) {
        throw std::runtime_error("no preset outputs in " + dir.string() + ": missing file: " +
                                 first_missing);
    }
    return written;
}

}  // namespace entcool
