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
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entcool/rng.hpp"

namespace entcool {

class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, int iterations)
        : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations_(iterations) {}
    int iterations() const noexcept { return iterations_; }

  private:
    int iterations_;
};

struct LanczosOptions {
    int krylov_dim = 48;
    int max_restarts = 400;
    double residual_tol = 1e-10;  // absolute, on ||H v - E v||
    std::uint64_t start_seed = 0x5eed;
};

struct LanczosResult {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
    int iterations = 0;
};

/**
 * Lowest eigenpair of a real symmetric operator restricted to the
 * orthogonal complement of `locked`.
 *
 * Explicitly restarted Lanczos with full reorthogonalization. `apply`
 * computes out = H * in. The locked vectors must be orthonormal.
 */
inline LanczosResult lanczos_lowest(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& apply, Eigen::Index dim,
    const std::vector<Eigen::VectorXd>& locked, const LanczosOptions& opt = {}) {
    auto deflate = [&](Eigen::VectorXd& v) {
        for (const auto& q : locked) v -= q.dot(v) * q;
    };

    // A fresh start per deflation level; reusing one start would leave it
    // with no weight in a degenerate manifold once its projection is locked.
    Eigen::VectorXd start(dim);
    CounterRng rng(derive_key(opt.start_seed, locked.size()));
    for (Eigen::Index i = 0; i < dim; ++i) start[i] = rng.uniform() - 0.5;
    deflate(start);
    if (start.norm() == 0.0) throw ConvergenceError("lanczos: empty deflated space", 0);
    start.normalize();

    const int m = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, dim - locked.size()));
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(m);
    Eigen::VectorXd w(dim);
    int matvecs = 0;

    LanczosResult best;
    for (int restart = 0; restart < opt.max_restarts; ++restart) {
        basis.clear();
        basis.push_back(start);
        std::vector<double> alpha, beta;
        for (int k = 0; k < m; ++k) {
            apply(basis[k], w);
            ++matvecs;
            const double a = basis[k].dot(w);
            alpha.push_back(a);
            // Two passes of Gram-Schmidt against the whole basis and the locked space.
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& q : basis) w -= q.dot(w) * q;
                deflate(w);
            }
            const double b = w.norm();
            if (k + 1 == m || b < 1e-14) break;
            beta.push_back(b);
            basis.push_back(w / b);
        }
        const int kdim = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(kdim, kdim);
        for (int i = 0; i < kdim; ++i) t(i, i) = alpha[i];
        for (int i = 0; i + 1 < kdim; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const Eigen::VectorXd y = es.eigenvectors().col(0);

        Eigen::VectorXd ritz = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < kdim; ++i) ritz += y[i] * basis[i];
        deflate(ritz);
        ritz.normalize();

        apply(ritz, w);
        ++matvecs;
        const double theta = ritz.dot(w);
        const double residual = (w - theta * ritz).norm();
        best = {theta, ritz, residual, matvecs};
        if (residual <= opt.residual_tol) return best;
        start = ritz;
    }
    throw ConvergenceError("lanczos: residual " + std::to_string(best.residual) +
                               " above tolerance " + std::to_string(opt.residual_tol),
                           best.iterations);
}

}  // namespace entcool
