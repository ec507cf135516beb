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

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "entcool/lanczos.hpp"
#include "entcool/quantum_state.hpp"

namespace entcool {

inline constexpr int kDefaultMaxSites = 21;

/// Transverse-field Ising ring H = J sum sx_j sx_{j+1} - h sum sz_j.
struct ChainSpec {
    int n_sites = 9;
    double coupling = 1.0;  // J
    double field = 1.0;     // h
    int max_sites = kDefaultMaxSites;

    void validate() const {
        if (n_sites < 3 || n_sites % 2 == 0) {
            throw std::invalid_argument("ChainSpec: n_sites must be odd and >= 3, got " +
                                        std::to_string(n_sites));
        }
        if (n_sites > max_sites) {
            throw std::invalid_argument("ChainSpec: n_sites " + std::to_string(n_sites) +
                                        " exceeds maximum " + std::to_string(max_sites));
        }
        if (!std::isfinite(coupling) || !std::isfinite(field)) {
            throw std::invalid_argument("ChainSpec: non-finite coupling or field");
        }
    }

    /// Upper bound on the spectral norm, N (|J| + |h|).
    double norm_bound() const noexcept { return n_sites * (std::abs(coupling) + std::abs(field)); }
};

enum class PhaseLabel { Paramagnetic, Ferromagnetic, FrustratedAFM };

inline std::string_view to_string(PhaseLabel p) noexcept {
    switch (p) {
        case PhaseLabel::Paramagnetic: return "PARA";
        case PhaseLabel::Ferromagnetic: return "FM";
        case PhaseLabel::FrustratedAFM: return "AFM";
    }
    return "?";
}

inline PhaseLabel classify_phase(const ChainSpec& spec) {
    if (!(spec.field > 0.0)) throw std::invalid_argument("classify_phase: requires h > 0");
    const double ratio = spec.coupling / spec.field;
    if (std::abs(ratio) == 1.0) {
        throw std::invalid_argument("classify_phase: |J/h| = 1 is the critical point");
    }
    if (std::abs(ratio) < 1.0) return PhaseLabel::Paramagnetic;
    return ratio < 0.0 ? PhaseLabel::Ferromagnetic : PhaseLabel::FrustratedAFM;
}

/**
 * H in the sigma^z product basis, stored as its diagonal plus the bond
 * flip masks. Every basis state couples to itself and to N partners
 * obtained by flipping both spins of one bond, each with amplitude J.
 */
class HamiltonianMatrix {
  public:
    explicit HamiltonianMatrix(const ChainSpec& spec) : spec_(spec) {
        spec.validate();
        const int n = spec.n_sites;
        const std::uint64_t dim = std::uint64_t{1} << n;
        diag_.resize(dim);
        for (std::uint64_t a = 0; a < dim; ++a) {
            diag_[a] = -spec.field * (n - 2 * std::popcount(a));
        }
        for (int j = 0; j < n; ++j) {
            flips_.push_back((std::uint64_t{1} << j) | (std::uint64_t{1} << ((j + 1) % n)));
        }
    }

    const ChainSpec& spec() const noexcept { return spec_; }
    Eigen::Index dimension() const noexcept { return static_cast<Eigen::Index>(diag_.size()); }
    const std::vector<std::uint64_t>& bond_flips() const noexcept { return flips_; }

    double entry(std::uint64_t a, std::uint64_t b) const {
        if (a >= diag_.size() || b >= diag_.size()) throw std::out_of_range("entry: index");
        if (a == b) return diag_[a];
        double v = 0.0;
        for (auto f : flips_)
            if ((a ^ b) == f) v += spec_.coupling;
        return v;
    }

    /// out = H * in.
    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
        const auto dim = static_cast<std::uint64_t>(diag_.size());
        out.resize(in.size());
        const double j = spec_.coupling;
        for (std::uint64_t a = 0; a < dim; ++a) {
            double acc = diag_[a] * in[a];
            for (auto f : flips_) acc += j * in[a ^ f];
            out[a] = acc;
        }
    }

    Eigen::MatrixXd dense() const {
        const Eigen::Index dim = dimension();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index a = 0; a < dim; ++a) {
            m(a, a) = diag_[a];
            for (auto f : flips_) m(a, a ^ static_cast<Eigen::Index>(f)) += spec_.coupling;
        }
        return m;
    }

  private:
    ChainSpec spec_;
    std::vector<double> diag_;
    std::vector<std::uint64_t> flips_;
};

inline HamiltonianMatrix build_hamiltonian(const ChainSpec& spec) { return HamiltonianMatrix(spec); }

struct GroundStateOptions {
    /// Gap below which levels count as degenerate; negative means 1e-10 * ||H||.
    double degeneracy_tol = -1.0;
    /// Largest N solved by dense diagonalization; Lanczos above.
    int dense_max_sites = 11;
    LanczosOptions lanczos{};
};

struct GroundState {
    double energy = 0.0;
    StateVector state;
    bool degenerate = false;
    int multiplicity = 1;
    double gap = 0.0;  // to the first level outside the ground manifold, if resolved
};

namespace detail {

/// Canonical unit vector in span(columns of v): the normalized projection of
/// the smallest-index basis state with weight in the span, then global sign
/// fixed so the first largest-magnitude amplitude is positive.
inline Eigen::VectorXd canonical_representative(const Eigen::MatrixXd& v) {
    const Eigen::Index dim = v.rows();
    Eigen::Index pick = -1;
    for (Eigen::Index a = 0; a < dim; ++a) {
        if (v.row(a).squaredNorm() > 1e-14) {
            pick = a;
            break;
        }
    }
    if (pick < 0) throw std::logic_error("canonical_representative: empty subspace");
    Eigen::VectorXd out = v * v.row(pick).transpose();
    out.normalize();
    const double peak = out.cwiseAbs().maxCoeff();
    for (Eigen::Index a = 0; a < dim; ++a) {
        if (std::abs(out[a]) >= peak * (1.0 - 1e-9)) {
            if (out[a] < 0) out = -out;
            break;
        }
    }
    return out;
}

inline StateVector to_state(int n, const Eigen::VectorXd& v) {
    std::vector<cplx> amps(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) amps[i] = v[i];
    return StateVector(n, std::move(amps));
}

}  // namespace detail

/**
 * Lowest eigenpair of H.
 *
 * When the gap to the next level is below the degeneracy tolerance the
 * whole near-degenerate manifold is resolved and a canonical member of it
 * is returned (see detail::canonical_representative), so the result does
 * not depend on which eigensolver produced the basis.
 */
inline GroundState ground_state(const HamiltonianMatrix& h, const GroundStateOptions& opt = {}) {
    const ChainSpec& spec = h.spec();
    const double hnorm = spec.norm_bound();
    const double tol = opt.degeneracy_tol >= 0.0 ? opt.degeneracy_tol : 1e-10 * hnorm;
    const Eigen::Index dim = h.dimension();

    std::vector<double> values;
    std::vector<Eigen::VectorXd> vectors;
    double gap = 0.0;
    bool gap_resolved = false;

    if (spec.n_sites <= opt.dense_max_sites) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
        if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0);
        const auto& ev = es.eigenvalues();
        Eigen::Index k = 0;
        while (k < dim && (k == 0 || ev[k] - ev[0] < tol)) {
            values.push_back(ev[k]);
            vectors.emplace_back(es.eigenvectors().col(k));
            ++k;
        }
        if (k < dim) {
            gap = ev[k] - ev[0];
            gap_resolved = true;
        }
    } else {
        LanczosOptions lo = opt.lanczos;
        lo.residual_tol = std::min(lo.residual_tol, 1e-10 * hnorm);
        auto apply = [&h](const Eigen::VectorXd& in, Eigen::VectorXd& out) { h.apply(in, out); };
        while (static_cast<Eigen::Index>(vectors.size()) < dim) {
            auto r = lanczos_lowest(apply, dim, vectors, lo);
            if (!vectors.empty() && r.value - values.front() >= tol) {
                gap = r.value - values.front();
                gap_resolved = true;
                break;
            }
            values.push_back(r.value);
            vectors.push_back(std::move(r.vector));
        }
    }

    Eigen::MatrixXd span(dim, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) span.col(static_cast<Eigen::Index>(i)) = vectors[i];
    // Re-orthonormalize; Lanczos vectors are orthogonal only to residual accuracy.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, span.cols());
    const Eigen::VectorXd v = detail::canonical_representative(q);

    GroundState gs;
    gs.energy = values.front();
    gs.state = detail::to_state(spec.n_sites, v);
    gs.multiplicity = static_cast<int>(vectors.size());
    gs.degenerate = gs.multiplicity > 1;
    gs.gap = gap_resolved ? gap : 0.0;
    return gs;
}

inline GroundState ground_state(const ChainSpec& spec, const GroundStateOptions& opt = {}) {
    return ground_state(build_hamiltonian(spec), opt);
}

}  // namespace entcool
