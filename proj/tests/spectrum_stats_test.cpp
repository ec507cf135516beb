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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "entcool/spectrum_stats.hpp"
#include "oracles.hpp"

namespace entcool {
namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

// Eigenvalues of an n x n GUE matrix.
std::vector<double> gue_eigenvalues(int n, CounterRng& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = g(rng);
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
            m(j, i) = std::conj(m(i, j));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

TEST(References, Constants) {
    EXPECT_NEAR(kRbarPoisson, 0.386, 5e-4);
    EXPECT_NEAR(kRbarGUE, 0.602, 1e-3);
    EXPECT_EQ(rbar_reference(RmtFamily::Poisson), kRbarPoisson);
}

TEST(References, DensitiesAreNormalized) {
    for (auto f : {RmtFamily::Poisson, RmtFamily::WignerDysonGUE}) {
        const double total = oracle::integrate_half_line([f](double r) { return reference_density(f, r); });
        EXPECT_NEAR(total, 1.0, 1e-8) << to_string(f);
        const double folded = oracle::adaptive_simpson([f](double x) { return folded_density(f, x); }, 0, 1, 1e-12);
        EXPECT_NEAR(folded, 1.0, 1e-8);
        const double mean = oracle::adaptive_simpson([f](double x) { return x * folded_density(f, x); }, 0, 1, 1e-12);
        EXPECT_NEAR(mean, rbar_reference(f), 1e-8);
    }
    EXPECT_THROW(poisson_density(-0.1), std::domain_error);
    EXPECT_EQ(folded_density(RmtFamily::Poisson, 1.5), 0.0);
}

TEST(References, SamplerReproducesAverages) {
    for (auto f : {RmtFamily::Poisson, RmtFamily::WignerDysonGUE}) {
        CounterRng rng(31);
        double s = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) s += sample_folded_ratio(f, rng);
        EXPECT_NEAR(s / n, rbar_reference(f), 0.005);
    }
}

TEST(Ratios, GeometricSequence) {
    const std::vector<double> ev{0.1, 0.2, 0.4, 0.8};
    const auto r = spacing_ratios(ev, 0);
    ASSERT_EQ(r.ratios.size(), 2u);
    EXPECT_NEAR(r.ratios[0], 2.0, 1e-12);
    EXPECT_NEAR(r.ratios[1], 2.0, 1e-12);
    const auto m = min_max_ratios(ev, 0);
    EXPECT_NEAR(m.ratios[0], 0.5, 1e-12);
}

TEST(Ratios, EquallySpaced) {
    std::vector<double> ev;
    for (int k = 0; k < 40; ++k) ev.push_back(0.025 * k);
    for (double r : spacing_ratios(ev, 10).ratios) EXPECT_NEAR(r, 1.0, 1e-10);
}

TEST(Ratios, DropsLargestEigenvalues) {
    // The largest entries carry a wild spacing that must not appear.
    std::vector<double> ev{1.0, 2.0, 3.0, 4.0, 100.0, 1000.0};
    const auto r = spacing_ratios(ev, 2);
    ASSERT_EQ(r.ratios.size(), 2u);
    for (double x : r.ratios) EXPECT_NEAR(x, 1.0, 1e-12);
    EXPECT_THROW(spacing_ratios(ev, 4), std::invalid_argument);
    EXPECT_THROW(spacing_ratios(ev, -1), std::invalid_argument);
}

TEST(Ratios, DegenerateSpacingsAreCounted) {
    const std::vector<double> ev{0.0, 0.0, 0.0, 0.1, 0.3};
    const auto r = spacing_ratios(ev, 0);
    EXPECT_EQ(r.n_degenerate, 2);
    ASSERT_EQ(r.ratios.size(), 1u);
    EXPECT_NEAR(r.ratios[0], 2.0, 1e-12);
    const auto m = min_max_ratios(ev, 0);
    EXPECT_EQ(m.n_degenerate, 1);
    EXPECT_EQ(m.ratios.size(), 2u);
}

TEST(Ratios, DropRuleKeepsEnoughEigenvalues) {
    const DropRule rule;
    EXPECT_EQ(rule.effective(64), 10);
    EXPECT_EQ(rule.effective(20), 4);
    EXPECT_EQ(rule.effective(8), 0);
}

TEST(Ratios, UniformSpectrumIsPoissonian) {
    CounterRng rng(2718);
    std::vector<double> ev(256);
    for (auto& x : ev) x = rng.uniform();
    const auto r = spacing_ratios(ev, 0).ratios;
    std::vector<double> ref(r.size());
    CounterRng rr(1414);
    for (auto& x : ref) {
        const double u = rr.uniform();
        x = u / (1.0 - u);  // inverse CDF of 1/(1+r)^2
    }
    const double d = ks_statistic(r, ref);
    const double n = static_cast<double>(r.size());
    EXPECT_LT(d, 1.628 * std::sqrt(2.0 / n));
}

TEST(Rbar, Examples) {
    EXPECT_NEAR(rbar_from_spacings(std::vector<double>(10, 0.3)), 1.0, 1e-15);
    EXPECT_NEAR(rbar_from_spacings(std::vector<double>{0.1, 0.2, 0.4}), 0.5, 1e-15);
    EXPECT_THROW(mean_of(std::vector<double>{}), std::invalid_argument);
}

TEST(Rbar, RandomMatrixGueEnsemble) {
    CounterRng rng(6021);
    std::vector<RdmSpectrum> spectra;
    for (int m = 0; m < 100; ++m) {
        auto ev = gue_eigenvalues(120, rng);
        // Bulk only: middle 102 eigenvalues.
        spectra.push_back({std::vector<double>(ev.begin() + 9, ev.begin() + 111), {}});
    }
    const DropRule none{0, 0};
    const auto pooled = pool_min_max_ratios(spectra, none);
    EXPECT_EQ(pooled.ratios.size(), 10000u);
    EXPECT_NEAR(mean_of(pooled.ratios), 0.602, 0.01);
}

TEST(Rbar, ScaleInvariant) {
    CounterRng rng(8);
    std::vector<double> ev(64);
    for (auto& x : ev) x = rng.uniform() * 1e-3;
    const auto base = spacing_ratios(ev, 10).ratios;
    for (double c : {1e-6, 3.7, 1e5}) {
        std::vector<double> scaled(ev);
        for (auto& x : scaled) x *= c;
        const auto r = spacing_ratios(scaled, 10).ratios;
        ASSERT_EQ(r.size(), base.size());
        for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i], base[i], 1e-12 * std::max(1.0, base[i]));
        EXPECT_NEAR(mean_of(min_max_ratios(scaled, 10).ratios), mean_of(min_max_ratios(ev, 10).ratios), 1e-12);
    }
}

TEST(Histogram, SingleValue) {
    const std::vector<double> v(17, 0.35);
    const auto h = histogram(v, 10, 0.0, 1.0);
    for (int b = 0; b < 10; ++b) EXPECT_NEAR(h[b].density, b == 3 ? 10.0 : 0.0, 1e-12);
}

TEST(Histogram, UniformSamples) {
    CounterRng rng(4);
    std::vector<double> v(100000);
    for (auto& x : v) x = rng.uniform();
    const auto h = histogram(v, 10, 0.0, 1.0);
    double total = 0.0;
    for (const auto& b : h) {
        EXPECT_NEAR(b.density, 1.0, 0.03);
        total += b.density * (b.right - b.left);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(h.back().right, 1.0, 1e-15);
    EXPECT_THROW(histogram(std::vector<double>{}, 10, 0, 1), std::invalid_argument);
}

TEST(Histogram, L1PrefersTheSamplingDensity) {
    for (auto f : {RmtFamily::Poisson, RmtFamily::WignerDysonGUE}) {
        CounterRng rng(77);
        std::vector<double> v(20000);
        for (auto& x : v) x = sample_folded_ratio(f, rng);
        const auto h = histogram(v, 25, 0.0, 1.0);
        const double dp = l1_distance(h, [](double x) { return folded_density(RmtFamily::Poisson, x); });
        const double dw = l1_distance(h, [](double x) { return folded_density(RmtFamily::WignerDysonGUE, x); });
        if (f == RmtFamily::Poisson) {
            EXPECT_LT(dp, dw);
        } else {
            EXPECT_LT(dw, dp);
        }
        EXPECT_LT(std::min(dp, dw), 0.1);
    }
}

TEST(Fit, ExactRecovery) {
    std::vector<double> x, y;
    for (int n = 5; n <= 13; ++n) {
        x.push_back(n);
        y.push_back(2.0 * std::exp(0.3 * n));
    }
    const auto f = fit_exponential(x, y);
    EXPECT_NEAR(f.a, 2.0, 1e-10);
    EXPECT_NEAR(f.b, 0.3, 1e-10);
    EXPECT_LE(f.residual, 1e-10);
}

TEST(Fit, ConstantData) {
    const std::vector<double> x{9, 11, 13}, y{0.7, 0.7, 0.7};
    const auto f = fit_exponential(x, y);
    EXPECT_NEAR(f.b, 0.0, 1e-14);
    EXPECT_NEAR(f.a, 0.7, 1e-14);
}

TEST(Fit, RecoversLargeScaleParameters) {
    for (auto [a, b] : {std::pair{1.43, -0.07}, {4.52, 0.22}}) {
        std::vector<double> x, y;
        for (int n = 9; n <= 21; n += 2) {
            x.push_back(n);
            y.push_back(a * std::exp(b * n));
        }
        const auto f = fit_exponential(x, y);
        EXPECT_NEAR(f.a, a, 1e-10);
        EXPECT_NEAR(f.b, b, 1e-12);
    }
}

TEST(Fit, Errors) {
    EXPECT_THROW(fit_exponential(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
    EXPECT_THROW(fit_exponential(std::vector<double>{1, 2}, std::vector<double>{1, -1}), std::domain_error);
    EXPECT_THROW(fit_exponential(std::vector<double>{1, 1}, std::vector<double>{1, 2}), std::invalid_argument);
}

}  // namespace
}  // namespace entcool
