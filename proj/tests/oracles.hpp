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

// Reference computations for the tests. Each one takes a deliberately
// different route from the library code it checks: explicit Kronecker
// products, explicit partial traces, a Taylor-series exponential, and so on.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "entcool/quantum_state.hpp"
#include "entcool/rng.hpp"

namespace entcool::oracle {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

/// Kronecker product, left factor on the high index bits.
inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Single-site operator on `site` of an n-site register (site j = bit j).
inline MatrixXcd site_operator(const MatrixXcd& op, int site, int n) {
    MatrixXcd out = MatrixXcd::Identity(1, 1);
    for (int k = n - 1; k >= 0; --k) {
        out = kron(out, k == site ? op : MatrixXcd(MatrixXcd::Identity(2, 2)));
    }
    return out;
}

/// J sum sx sx - h sum sz on a ring, by Kronecker products.
inline MatrixXd tfim_kronecker(int n, double j, double h) {
    const MatrixXcd sx = pauli::x(), sz = pauli::z();
    const Eigen::Index dim = Eigen::Index{1} << n;
    MatrixXcd hm = MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < n; ++s) {
        hm += j * site_operator(sx, s, n) * site_operator(sx, (s + 1) % n, n);
        hm -= h * site_operator(sz, s, n);
    }
    return hm.real();
}

/// exp(A) by scaling and squaring with a 20-term Taylor series.
inline MatrixXcd expm(const MatrixXcd& a) {
    const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (std::ldexp(nrm, -squarings) > 0.5) ++squarings;
    const MatrixXcd x = a * std::ldexp(1.0, -squarings);
    MatrixXcd term = MatrixXcd::Identity(a.rows(), a.cols());
    MatrixXcd sum = term;
    for (int k = 1; k <= 20; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

/// Reduced density matrix of the listed sites by explicit summation over the
/// environment. Row index bit k corresponds to sites[k].
inline MatrixXcd partial_trace(const StateVector& psi, const std::vector<int>& sites) {
    const int n = psi.n_sites();
    std::vector<int> env;
    for (int s = 0; s < n; ++s)
        if (std::find(sites.begin(), sites.end(), s) == sites.end()) env.push_back(s);
    const Eigen::Index da = Eigen::Index{1} << sites.size();
    const std::uint64_t de = std::uint64_t{1} << env.size();
    auto index = [&](std::uint64_t a, std::uint64_t e) {
        std::uint64_t x = 0;
        for (std::size_t k = 0; k < sites.size(); ++k)
            if (a >> k & 1) x |= std::uint64_t{1} << sites[k];
        for (std::size_t k = 0; k < env.size(); ++k)
            if (e >> k & 1) x |= std::uint64_t{1} << env[k];
        return x;
    };
    MatrixXcd rho = MatrixXcd::Zero(da, da);
    for (std::uint64_t e = 0; e < de; ++e)
        for (Eigen::Index a = 0; a < da; ++a)
            for (Eigen::Index b = 0; b < da; ++b)
                rho(a, b) += psi[index(a, e)] * std::conj(psi[index(b, e)]);
    return rho;
}

inline std::vector<int> block_sites(int start, int length, int n) {
    std::vector<int> s;
    for (int k = 0; k < length; ++k) s.push_back((start + k) % n);
    return s;
}

/// Eigenvalues of an explicitly formed reduced density matrix, descending.
inline std::vector<double> rdm_eigenvalues(const StateVector& psi, const std::vector<int>& sites) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(partial_trace(psi, sites));
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

inline double renyi2_explicit(const StateVector& psi, const std::vector<int>& sites) {
    const MatrixXcd rho = partial_trace(psi, sites);
    return -std::log2((rho * rho).trace().real());
}

/// Wootters concurrence from the non-Hermitian product rho * rho~.
inline double wootters(const Eigen::Matrix4cd& rho) {
    const Eigen::Matrix4cd yy = entcool::kron(pauli::y(), pauli::y());
    const Eigen::Matrix4cd r = rho * (yy * rho.conjugate() * yy);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
    std::vector<double> mu;
    for (int i = 0; i < 4; ++i) mu.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i].real())));
    std::sort(mu.begin(), mu.end(), std::greater<>());
    return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

/// Move every site k to k + shift (mod n).
inline StateVector relabel(const StateVector& psi, int shift) {
    const int n = psi.n_sites();
    std::vector<cplx> out(psi.size());
    for (std::uint64_t x = 0; x < psi.size(); ++x) {
        std::uint64_t y = 0;
        for (int k = 0; k < n; ++k)
            if (x >> k & 1) y |= std::uint64_t{1} << (((k + shift) % n + n) % n);
        out[y] = psi[x];
    }
    return StateVector(n, std::move(out));
}

/// Haar-like random state from complex Gaussians.
inline StateVector random_state(int n, std::uint64_t seed) {
    CounterRng rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> a(std::size_t{1} << n);
    for (auto& x : a) x = {g(rng), g(rng)};
    StateVector s(n, std::move(a));
    s.normalize();
    return s;
}

inline Matrix4c random_unitary(std::uint64_t seed) {
    CounterRng rng(seed);
    std::normal_distribution<double> g;
    Eigen::Matrix4cd m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = {g(rng), g(rng)};
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(m);
    return qr.householderQ() * Eigen::Matrix4cd::Identity();
}

/// Adaptive Simpson on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 50) {
    auto simpson = [&](double l, double r, double fl, double fm, double fr) {
        return (r - l) / 6.0 * (fl + 4.0 * fm + fr);
    };
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double l, double r, double fl, double fm, double fr, double whole, double eps,
            int d) -> double {
        const double m = 0.5 * (l + r);
        const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(l, m, fl, flm, fm);
        const double right = simpson(m, r, fm, frm, fr);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * eps) {
            return left + right + (left + right - whole) / 15.0;
        }
        return rec(l, m, fl, flm, fm, left, eps / 2, d - 1) +
               rec(m, r, fm, frm, fr, right, eps / 2, d - 1);
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

/// Integral of f over [0, inf) via r = t / (1 - t).
inline double integrate_half_line(const std::function<double(double)>& f, double tol = 1e-10) {
    auto g = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double r = t / (1.0 - t);
        return f(r) / ((1.0 - t) * (1.0 - t));
    };
    return adaptive_simpson(g, 0.0, 1.0, tol);
}

}  // namespace entcool::oracle
