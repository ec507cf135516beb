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
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entcool/entanglement.hpp"
#include "entcool/rng.hpp"

namespace entcool {

/// Spacings below this are treated as degenerate and their ratios dropped.
inline constexpr double kMinSpacing = 1e-14;

enum class RmtFamily { Poisson, WignerDysonGUE };

/// 2 ln 2 - 1.
inline const double kRbarPoisson = 2.0 * std::numbers::ln2 - 1.0;
/// 2 sqrt(3) / pi - 1/2.
inline const double kRbarGUE = 2.0 * std::numbers::sqrt3 / std::numbers::pi - 0.5;

inline double rbar_reference(RmtFamily f) noexcept {
    return f == RmtFamily::Poisson ? kRbarPoisson : kRbarGUE;
}

inline double poisson_density(double r) {
    if (r < 0.0) throw std::domain_error("poisson_density: r < 0");
    return 1.0 / ((1.0 + r) * (1.0 + r));
}

/// Wigner-Dyson ratio density for beta = 2, Z = 4 pi / (81 sqrt 3).
inline double wd_gue_density(double r) {
    if (r < 0.0) throw std::domain_error("wd_gue_density: r < 0");
    const double z = 4.0 * std::numbers::pi / (81.0 * std::numbers::sqrt3);
    const double q = r + r * r;
    return q * q / std::pow(1.0 + r + r * r, 4.0) / z;
}

inline double reference_density(RmtFamily f, double r) {
    return f == RmtFamily::Poisson ? poisson_density(r) : wd_gue_density(r);
}

/// Density of min(r, 1/r) on [0, 1]; both densities satisfy P(1/r)/r^2 = P(r).
inline double folded_density(RmtFamily f, double x) {
    if (x < 0.0 || x > 1.0) return 0.0;
    return 2.0 * reference_density(f, x);
}

struct SpacingRatios {
    std::vector<double> ratios;
    int n_degenerate = 0;
};

/// Largest n_drop that still leaves `min_surviving` eigenvalues (never negative).
struct DropRule {
    int n_drop = 10;
    int min_surviving = 16;

    int effective(std::size_t count) const noexcept {
        const int room = static_cast<int>(count) - min_surviving;
        return std::clamp(room, 0, n_drop);
    }
};

namespace detail {
inline std::vector<double> bulk_ascending(std::span<const double> eigenvalues, int n_drop) {
    if (n_drop < 0) throw std::invalid_argument("spacing ratios: n_drop < 0");
    std::vector<double> v(eigenvalues.begin(), eigenvalues.end());
    std::sort(v.begin(), v.end(), std::greater<>());
    if (static_cast<int>(v.size()) - n_drop < 3) {
        throw std::invalid_argument("spacing ratios: fewer than 3 eigenvalues after dropping " +
                                    std::to_string(n_drop));
    }
    v.erase(v.begin(), v.begin() + n_drop);
    std::reverse(v.begin(), v.end());
    return v;
}
}  // namespace detail

/**
 * Raw ratios r_i = s_{i+1} / s_i of consecutive spacings after removing the
 * n_drop largest eigenvalues and sorting the rest ascending. Ratios with a
 * spacing below kMinSpacing in the denominator are counted, not returned.
 */
inline SpacingRatios spacing_ratios(std::span<const double> eigenvalues, int n_drop) {
    const auto v = detail::bulk_ascending(eigenvalues, n_drop);
    SpacingRatios out;
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
        const double s0 = v[i + 1] - v[i];
        const double s1 = v[i + 2] - v[i + 1];
        if (s0 < kMinSpacing) {
            ++out.n_degenerate;
            continue;
        }
        out.ratios.push_back(s1 / s0);
    }
    return out;
}

inline SpacingRatios spacing_ratios(const RdmSpectrum& spectrum, int n_drop) {
    return spacing_ratios(spectrum.eigenvalues, n_drop);
}

/// min(s_i, s_{i+1}) / max(s_i, s_{i+1}) over the bulk.
inline SpacingRatios min_max_ratios(std::span<const double> eigenvalues, int n_drop) {
    const auto v = detail::bulk_ascending(eigenvalues, n_drop);
    SpacingRatios out;
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
        const double s0 = v[i + 1] - v[i];
        const double s1 = v[i + 2] - v[i + 1];
        const double hi = std::max(s0, s1);
        if (hi < kMinSpacing) {
            ++out.n_degenerate;
            continue;
        }
        out.ratios.push_back(std::min(s0, s1) / hi);
    }
    return out;
}

/// Pooled min/max ratios over a collection of spectra.
struct SpacingEnsemble {
    std::vector<double> ratios;
    int n_degenerate = 0;
    int n_spectra = 0;
    std::vector<int> n_dropped;  // per spectrum
};

inline SpacingEnsemble pool_min_max_ratios(std::span<const RdmSpectrum> spectra,
                                           const DropRule& rule = {}) {
    SpacingEnsemble out;
    for (const auto& s : spectra) {
        const int drop = rule.effective(s.eigenvalues.size());
        auto r = min_max_ratios(s.eigenvalues, drop);
        out.ratios.insert(out.ratios.end(), r.ratios.begin(), r.ratios.end());
        out.n_degenerate += r.n_degenerate;
        out.n_dropped.push_back(drop);
        ++out.n_spectra;
    }
    return out;
}

inline double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("rbar: empty ensemble");
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

/// Average min/max spacing ratio pooled over all spectra.
inline double rbar(std::span<const RdmSpectrum> spectra, const DropRule& rule = {}) {
    return mean_of(pool_min_max_ratios(spectra, rule).ratios);
}

/// r-bar of a single list of consecutive spacings.
inline double rbar_from_spacings(std::span<const double> spacings) {
    std::vector<double> r;
    for (std::size_t i = 0; i + 1 < spacings.size(); ++i) {
        const double hi = std::max(spacings[i], spacings[i + 1]);
        if (hi < kMinSpacing) continue;
        r.push_back(std::min(spacings[i], spacings[i + 1]) / hi);
    }
    return mean_of(r);
}

/// Draw min(r, 1/r) from the folded reference density by rejection.
inline double sample_folded_ratio(RmtFamily f, CounterRng& rng) {
    // Folded Poisson peaks at 2 (x = 0); folded GUE peaks below 2.
    constexpr double bound = 2.0;
    for (;;) {
        const double x = rng.uniform();
        if (rng.uniform() * bound < folded_density(f, x)) return x;
    }
}

// ---------------------------------------------------------------------------
// Histograms and fits
// ---------------------------------------------------------------------------

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    double density = 0.0;
};

/// Densities on [lo, hi) normalized so sum(density * width) = 1 over the
/// in-range samples; the top edge is inclusive.
inline std::vector<HistogramBin> histogram(std::span<const double> values, int n_bins, double lo,
                                           double hi) {
    if (values.empty()) throw std::invalid_argument("histogram: no samples");
    if (n_bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram: bad binning");
    const double width = (hi - lo) / n_bins;
    std::vector<double> counts(n_bins, 0.0);
    double in_range = 0.0;
    for (double v : values) {
        if (v < lo || v > hi) continue;
        int b = static_cast<int>((v - lo) / width);
        b = std::min(b, n_bins - 1);
        counts[b] += 1.0;
        in_range += 1.0;
    }
    std::vector<HistogramBin> out(n_bins);
    for (int b = 0; b < n_bins; ++b) {
        out[b].left = lo + b * width;
        out[b].right = lo + (b + 1) * width;
        out[b].density = in_range > 0 ? counts[b] / (in_range * width) : 0.0;
    }
    return out;
}

/// Composite Simpson average of f over [a, b].
inline double bin_average(const std::function<double(double)>& f, double a, double b,
                          int panels = 32) {
    const double h = (b - a) / (2 * panels);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0 / (b - a);
}

/// L1 distance between a histogram and a density, using bin-averaged density.
inline double l1_distance(std::span<const HistogramBin> hist,
                          const std::function<double(double)>& density) {
    double acc = 0.0;
    for (const auto& b : hist) {
        acc += std::abs(b.density - bin_average(density, b.left, b.right)) * (b.right - b.left);
    }
    return acc;
}

struct ExponentialFit {
    double a = 0.0;
    double b = 0.0;
    double residual = 0.0;  // RMS in log space
};

/// Least squares of ln y = ln a + b x.
inline ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_exponential: need >= 2 (x, y) points");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) throw std::domain_error("fit_exponential: y must be positive");
        ly[i] = std::log(y[i]);
        sx += x[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_exponential: x values must differ");
    ExponentialFit fit;
    fit.b = sxy / sxx;
    const double intercept = my - fit.b * mx;
    fit.a = std::exp(intercept);
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = ly[i] - (intercept + fit.b * x[i]);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

inline std::string_view to_string(RmtFamily f) noexcept {
    return f == RmtFamily::Poisson ? "poisson" : "wigner_dyson_gue";
}

}  // namespace entcool
