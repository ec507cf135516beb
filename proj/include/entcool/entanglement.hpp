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
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entcool/quantum_state.hpp"

namespace entcool {

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Contiguous run of `length` sites starting at `start`, wrapping around the ring.
struct BlockSpec {
    int start = 0;
    int length = 1;

    void validate(int n_sites) const {
        if (length < 1 || length > n_sites - 1) {
            throw std::invalid_argument("BlockSpec: length " + std::to_string(length) +
                                        " outside [1, N-1]");
        }
        if (start < 0 || start >= n_sites) {
            throw std::invalid_argument("BlockSpec: start " + std::to_string(start) + " out of range");
        }
    }

    bool contains(int site, int n_sites) const noexcept {
        return ((site - start) % n_sites + n_sites) % n_sites < length;
    }

    bool operator==(const BlockSpec&) const = default;
};

/// Eigenvalues of a reduced density matrix, sorted descending. Only the
/// eigenvalues of the smaller side of the bipartition are stored; the rest
/// are exactly zero.
struct RdmSpectrum {
    std::vector<double> eigenvalues;
    BlockSpec block;
};

inline constexpr double kNegativeEigenvalueSlack = 1e-12;

/**
 * Basis-index permutations that rotate site `s` to bit 0, one per offset.
 *
 * Gathering amplitudes through offset s lays the vector out as a
 * column-major 2^L x 2^(N-L) matrix with the block [s, s+L) on the rows,
 * for every L. Immutable once built; shared between trajectories.
 */
class RotationTable {
  public:
    explicit RotationTable(int n_sites) : n_(n_sites) {
        if (n_sites < 2 || n_sites > kMaxStateSites) {
            throw std::invalid_argument("RotationTable: bad site count");
        }
        const std::uint64_t dim = std::uint64_t{1} << n_sites;
        const std::uint64_t mask = dim - 1;
        perms_.resize(n_sites);
        for (int s = 0; s < n_sites; ++s) {
            auto& p = perms_[s];
            p.resize(dim);
            for (std::uint64_t y = 0; y < dim; ++y) {
                p[y] = static_cast<std::uint32_t>(s == 0 ? y : ((y << s) | (y >> (n_sites - s))) & mask);
            }
        }
    }

    int n_sites() const noexcept { return n_; }
    std::span<const std::uint32_t> offset(int s) const { return perms_.at(s); }

    static std::shared_ptr<const RotationTable> make(int n_sites) {
        return std::make_shared<const RotationTable>(n_sites);
    }

  private:
    int n_;
    std::vector<std::vector<std::uint32_t>> perms_;
};

namespace detail {

/// Amplitudes reshaped so the block occupies the rows.
inline Eigen::MatrixXcd block_matrix(const StateVector& state, const BlockSpec& block,
                                     const RotationTable* table) {
    const int n = state.n_sites();
    block.validate(n);
    const Eigen::Index rows = Eigen::Index{1} << block.length;
    const Eigen::Index cols = Eigen::Index{1} << (n - block.length);
    Eigen::MatrixXcd m(rows, cols);
    cplx* out = m.data();
    const auto amps = state.amplitudes();
    const std::uint64_t dim = state.size();
    if (table != nullptr) {
        const auto perm = table->offset(block.start);
        for (std::uint64_t y = 0; y < dim; ++y) out[y] = amps[perm[y]];
    } else {
        const int s = block.start;
        const std::uint64_t mask = dim - 1;
        for (std::uint64_t y = 0; y < dim; ++y) {
            const std::uint64_t x = s == 0 ? y : (((y << s) | (y >> (n - s))) & mask);
            out[y] = amps[x];
        }
    }
    return m;
}

/// Lower triangle of the Gram matrix on the smaller side of the reshaping.
inline Eigen::MatrixXcd small_side_gram(const Eigen::MatrixXcd& m) {
    if (m.rows() <= m.cols()) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m.rows(), m.rows());
        g.selfadjointView<Eigen::Lower>().rankUpdate(m);
        return g;
    }
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m.cols(), m.cols());
    g.selfadjointView<Eigen::Lower>().rankUpdate(m.adjoint());
    return g;
}

inline std::vector<double> clamp_spectrum(const Eigen::VectorXd& ev) {
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    for (auto& x : out) {
        if (x < -kNegativeEigenvalueSlack) {
            throw NumericalError("reduced density matrix eigenvalue " + std::to_string(x) +
                                 " below -1e-12");
        }
        if (x < 0.0) x = 0.0;
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace detail

inline RdmSpectrum block_rdm_spectrum(const StateVector& state, const BlockSpec& block,
                                      const RotationTable* table = nullptr) {
    const Eigen::MatrixXcd g = detail::small_side_gram(detail::block_matrix(state, block, table));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("block_rdm_spectrum: eigensolver failed");
    return {detail::clamp_spectrum(es.eigenvalues()), block};
}

/// Renyi-alpha entropy in bits; alpha = 1 is the von Neumann entropy.
inline double renyi_entropy(std::span<const double> eigenvalues, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("renyi_entropy: alpha must be finite and >= 0");
    }
    double s = 0.0;
    if (alpha == 1.0) {
        for (double l : eigenvalues)
            if (l > 0.0) s -= l * std::log2(l);
    } else if (alpha == 0.0) {
        const auto rank = std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                        [](double l) { return l > 0.0; });
        s = std::log2(static_cast<double>(rank));
    } else {
        double acc = 0.0;
        for (double l : eigenvalues)
            if (l > 0.0) acc += std::pow(l, alpha);
        s = std::log2(acc) / (1.0 - alpha);
    }
    return std::max(0.0, s);
}

inline double renyi_entropy(const RdmSpectrum& spectrum, double alpha) {
    return renyi_entropy(spectrum.eigenvalues, alpha);
}

/// Tr[rho_A^2] as the squared Frobenius norm of the small-side Gram matrix.
inline double block_purity(const StateVector& state, const BlockSpec& block,
                           const RotationTable* table = nullptr) {
    const Eigen::MatrixXcd g = detail::small_side_gram(detail::block_matrix(state, block, table));
    double diag = 0.0, off = 0.0;
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
        diag += std::norm(g(c, c));
        for (Eigen::Index r = c + 1; r < g.rows(); ++r) off += std::norm(g(r, c));
    }
    return diag + 2.0 * off;
}

inline double renyi2_via_purity(const StateVector& state, const BlockSpec& block,
                                const RotationTable* table = nullptr) {
    const double p = block_purity(state, block, table);
    const double floor = std::ldexp(1e-3, -state.n_sites());
    if (!(p >= floor)) {
        throw NumericalError("renyi2_via_purity: purity " + std::to_string(p) +
                             " is below the physical minimum");
    }
    return std::max(0.0, -std::log2(p));
}

/// Entropy of one block; the purity path for alpha = 2, the spectrum otherwise.
inline double block_entropy(const StateVector& state, const BlockSpec& block, double alpha,
                            const RotationTable* table = nullptr) {
    if (alpha == 2.0) return renyi2_via_purity(state, block, table);
    return renyi_entropy(block_rdm_spectrum(state, block, table), alpha);
}

// ---------------------------------------------------------------------------
// Averaged half-chain entropy
// ---------------------------------------------------------------------------

/// Entropies of the N half-chain blocks [l, l + (N-1)/2) and their mean.
struct EntropyCache {
    int n_sites = 0;
    double alpha = 2.0;
    std::vector<double> per_block;
    double average = 0.0;

    int block_length() const noexcept { return (n_sites - 1) / 2; }

    void refresh_average() noexcept {
        average = std::accumulate(per_block.begin(), per_block.end(), 0.0) /
                  static_cast<double>(per_block.size());
    }

    bool operator==(const EntropyCache&) const = default;
};

inline void require_odd_ring(int n) {
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("half-chain entropy needs an odd ring of >= 3 sites, got " +
                                    std::to_string(n));
    }
}

inline EntropyCache averaged_half_chain_entropy(const StateVector& state, double alpha,
                                                const RotationTable* table = nullptr) {
    const int n = state.n_sites();
    require_odd_ring(n);
    EntropyCache cache{n, alpha, std::vector<double>(n), 0.0};
    const int len = cache.block_length();
    for (int l = 0; l < n; ++l) cache.per_block[l] = block_entropy(state, {l, len}, alpha, table);
    cache.refresh_average();
    return cache;
}

/// The two half-chain blocks with an edge on bond {j, j+1}: the one
/// ending at site j and the one starting at site j + 1.
inline std::pair<int, int> blocks_cut_by_bond(int n_sites, int bond) {
    const int len = (n_sites - 1) / 2;
    const int ending = ((bond - len + 1) % n_sites + n_sites) % n_sites;
    const int starting = (bond + 1) % n_sites;
    return {ending, starting};
}

/// Recompute the two entries a gate on `bond` can change and refresh the mean.
inline void incremental_update(EntropyCache& cache, const StateVector& state, int bond,
                               const RotationTable* table = nullptr) {
    const int n = state.n_sites();
    if (cache.n_sites != n) throw std::invalid_argument("incremental_update: size mismatch");
    if (bond < 0 || bond >= n) throw std::out_of_range("incremental_update: bond out of range");
    const int len = cache.block_length();
    const auto [a, b] = blocks_cut_by_bond(n, bond);
    cache.per_block[a] = block_entropy(state, {a, len}, cache.alpha, table);
    cache.per_block[b] = block_entropy(state, {b, len}, cache.alpha, table);
    cache.refresh_average();
}

// ---------------------------------------------------------------------------
// Concurrence
// ---------------------------------------------------------------------------

/// Two-site reduced density matrix with local index 2*b_i + b_j.
inline Eigen::Matrix4cd two_site_rdm(const StateVector& state, int i, int j) {
    const int n = state.n_sites();
    if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
        throw std::invalid_argument("two_site_rdm: need distinct sites in range");
    }
    const std::uint64_t bi = std::uint64_t{1} << i;
    const std::uint64_t bj = std::uint64_t{1} << j;
    const auto amps = state.amplitudes();
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (std::uint64_t x = 0; x < state.size(); ++x) {
        if (x & (bi | bj)) continue;
        const std::uint64_t idx[4] = {x, x | bj, x | bi, x | bi | bj};
        cplx a[4];
        for (int k = 0; k < 4; ++k) a[k] = amps[idx[k]];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) rho(r, c) += a[r] * std::conj(a[c]);
    }
    return rho;
}

/**
 * Wootters concurrence of sites i and j.
 *
 * The square roots of the eigenvalues of rho (sy sy) rho* (sy sy) are
 * obtained from the Hermitian form sqrt(rho) rho~ sqrt(rho), which has
 * the same spectrum.
 */
inline double concurrence(const StateVector& state, int i, int j) {
    const Eigen::Matrix4cd rho = two_site_rdm(state, i, j);
    const Matrix4c yy = kron(pauli::y(), pauli::y());
    const Eigen::Matrix4cd flipped = yy * rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> rs(root * flipped * root,
                                                       Eigen::EigenvaluesOnly);
    Eigen::Vector4d mu = rs.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(mu.data(), mu.data() + 4, std::greater<>());
    return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

}  // namespace entcool
