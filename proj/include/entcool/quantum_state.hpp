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

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace entcool {

using cplx = std::complex<double>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;

inline constexpr int kMaxStateSites = 26;

/**
 * Pure state of a ring of spin-1/2 sites.
 *
 * Site j (0-based) is bit j of the basis index; a clear bit is spin up,
 * i.e. eigenvalue +1 of sigma^z.
 */
class StateVector {
  public:
    StateVector() = default;

    /// |0...0> (all spins up) on n sites.
    explicit StateVector(int n_sites) : n_(check_sites(n_sites)), amps_(std::size_t{1} << n_sites) {
        amps_[0] = 1.0;
    }

    StateVector(int n_sites, std::vector<cplx> amplitudes)
        : n_(check_sites(n_sites)), amps_(std::move(amplitudes)) {
        if (amps_.size() != (std::size_t{1} << n_)) {
            throw std::invalid_argument("StateVector: amplitude count " +
                                        std::to_string(amps_.size()) + " is not 2^" +
                                        std::to_string(n_));
        }
    }

    static StateVector basis(int n_sites, std::uint64_t index) {
        StateVector s(n_sites);
        if (index >= s.size()) throw std::out_of_range("StateVector::basis: index out of range");
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    /// (|0...0> + |1...1>) / sqrt(2).
    static StateVector ghz(int n_sites) {
        StateVector s(n_sites);
        s.amps_[0] = std::numbers::sqrt2 / 2;
        s.amps_[s.size() - 1] = std::numbers::sqrt2 / 2;
        return s;
    }

    /// Equal superposition of the n single-flip states.
    static StateVector w(int n_sites) {
        StateVector s(n_sites);
        s.amps_[0] = 0.0;
        const double a = 1.0 / std::sqrt(static_cast<double>(n_sites));
        for (int j = 0; j < n_sites; ++j) s.amps_[std::size_t{1} << j] = a;
        return s;
    }

    int n_sites() const noexcept { return n_; }
    std::size_t size() const noexcept { return amps_.size(); }

    std::span<cplx> amplitudes() noexcept { return amps_; }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    cplx& operator[](std::size_t i) noexcept { return amps_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return amps_[i]; }

    double norm() const noexcept {
        double acc = 0.0;
        for (const auto& a : amps_) acc += std::norm(a);
        return std::sqrt(acc);
    }

    void normalize() {
        const double nrm = norm();
        if (!(nrm > 0.0)) throw std::domain_error("StateVector::normalize: zero vector");
        const double inv = 1.0 / nrm;
        for (auto& a : amps_) a *= inv;
    }

    bool operator==(const StateVector&) const = default;

  private:
    static int check_sites(int n) {
        if (n < 1 || n > kMaxStateSites) {
            throw std::invalid_argument("StateVector: site count " + std::to_string(n) +
                                        " outside [1, " + std::to_string(kMaxStateSites) + "]");
        }
        return n;
    }

    int n_ = 0;
    std::vector<cplx> amps_;
};

// ---------------------------------------------------------------------------
// Gate generators
// ---------------------------------------------------------------------------

/// The six two-site generators. Kinds 1-3 commute with the z-parity.
enum class GateKind : int {
    ZI_IZ = 1,  // sz x 1 + 1 x sz
    XX = 2,     // sx x sx
    YY = 3,     // sy x sy
    XI_IX = 4,  // sx x 1 + 1 x sx
    YI_IY = 5,  // sy x 1 + 1 x sy
    ZZ = 6,     // sz x sz
};

enum class GateSet { Set1, Universal };

inline constexpr std::array<GateKind, 3> kSet1Kinds{GateKind::ZI_IZ, GateKind::XX, GateKind::YY};
inline constexpr std::array<GateKind, 6> kUniversalKinds{GateKind::ZI_IZ, GateKind::XX,
                                                         GateKind::YY,    GateKind::XI_IX,
                                                         GateKind::YI_IY, GateKind::ZZ};

inline std::span<const GateKind> kinds_of(GateSet set) noexcept {
    if (set == GateSet::Set1) return kSet1Kinds;
    return kUniversalKinds;
}

inline bool in_set1(GateKind k) noexcept { return static_cast<int>(k) <= 3; }

inline GateKind gate_kind_from_int(int k) {
    if (k < 1 || k > 6) throw std::invalid_argument("unknown gate kind " + std::to_string(k));
    return static_cast<GateKind>(k);
}

inline std::string_view to_string(GateSet s) noexcept {
    return s == GateSet::Set1 ? "set1" : "universal";
}

inline GateSet parse_gate_set(std::string_view s) {
    if (s == "set1" || s == "Set1" || s == "1") return GateSet::Set1;
    if (s == "universal" || s == "Universal" || s == "all") return GateSet::Universal;
    throw std::invalid_argument("unknown gate set '" + std::string(s) + "'");
}

namespace pauli {
inline Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }
inline Eigen::Matrix2cd x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}
inline Eigen::Matrix2cd y() {
    Eigen::Matrix2cd m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
inline Eigen::Matrix2cd z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

/// a (x) b with `a` acting on the first site of the pair (high local bit).
inline Matrix4c kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

/// Hermitian 4x4 generator h^(k) on the pair (first site, second site).
inline Matrix4c gate_generator(GateKind kind) {
    using namespace pauli;
    switch (kind) {
        case GateKind::ZI_IZ: return kron(z(), identity()) + kron(identity(), z());
        case GateKind::XX: return kron(x(), x());
        case GateKind::YY: return kron(y(), y());
        case GateKind::XI_IX: return kron(x(), identity()) + kron(identity(), x());
        case GateKind::YI_IY: return kron(y(), identity()) + kron(identity(), y());
        case GateKind::ZZ: return kron(z(), z());
    }
    throw std::invalid_argument("unknown gate kind");
}

/**
 * exp(i * dt * h^(k)) in closed form.
 *
 * Product generators square to the identity, so the exponential is
 * cos(dt) 1 + i sin(dt) h. Sum generators factor into a single-site
 * rotation on each site.
 */
inline Matrix4c two_site_unitary(GateKind kind, double dt) {
    if (!std::isfinite(dt)) throw std::invalid_argument("two_site_unitary: dt is not finite");
    const double c = std::cos(dt);
    const double s = std::sin(dt);
    const cplx is(0.0, s);
    auto single = [&](const Eigen::Matrix2cd& p) -> Eigen::Matrix2cd {
        return c * pauli::identity() + is * p;
    };
    switch (kind) {
        case GateKind::XX:
        case GateKind::YY:
        case GateKind::ZZ:
            return c * Matrix4c::Identity() + is * gate_generator(kind);
        case GateKind::ZI_IZ: {
            const auto r = single(pauli::z());
            return kron(r, r);
        }
        case GateKind::XI_IX: {
            const auto r = single(pauli::x());
            return kron(r, r);
        }
        case GateKind::YI_IY: {
            const auto r = single(pauli::y());
            return kron(r, r);
        }
    }
    throw std::invalid_argument("two_site_unitary: unknown gate kind");
}

/// The six unitaries for a fixed dt, indexed by kind - 1.
struct GateTable {
    double dt = std::numbers::pi / 10;
    std::array<Matrix4c, 6> unitaries;

    explicit GateTable(double step = std::numbers::pi / 10) : dt(step) {
        for (int k = 1; k <= 6; ++k) unitaries[k - 1] = two_site_unitary(static_cast<GateKind>(k), dt);
    }

    const Matrix4c& operator[](GateKind k) const noexcept {
        return unitaries[static_cast<int>(k) - 1];
    }
};

// ---------------------------------------------------------------------------
// Gate application
// ---------------------------------------------------------------------------

/// Shift bits at and above `pos` up by one, leaving a zero at `pos`.
constexpr std::uint64_t insert_zero_bit(std::uint64_t x, int pos) noexcept {
    const std::uint64_t low = x & ((std::uint64_t{1} << pos) - 1);
    return ((x >> pos) << (pos + 1)) | low;
}

/**
 * Apply a 4x4 unitary to sites (first, second) in place.
 *
 * Local index is 2*b_first + b_second. Runs over the 2^(N-2) spectator
 * configurations; no 2^N x 2^N operator is formed.
 */
inline void apply_two_site_pair(StateVector& state, const Matrix4c& u, int first, int second) {
    const int n = state.n_sites();
    if (first < 0 || first >= n || second < 0 || second >= n || first == second) {
        throw std::out_of_range("apply_two_site_pair: invalid site pair");
    }
    const std::uint64_t bf = std::uint64_t{1} << first;
    const std::uint64_t bs = std::uint64_t{1} << second;
    const int lo = std::min(first, second);
    const int hi = std::max(first, second);
    const std::uint64_t count = std::uint64_t{1} << (n - 2);

    cplx m[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m[r][c] = u(r, c);

    auto amps = state.amplitudes();
    for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t base = insert_zero_bit(insert_zero_bit(k, lo), hi);
        const std::uint64_t idx[4] = {base, base | bs, base | bf, base | bf | bs};
        const cplx a0 = amps[idx[0]], a1 = amps[idx[1]], a2 = amps[idx[2]], a3 = amps[idx[3]];
        for (int r = 0; r < 4; ++r) {
            amps[idx[r]] = m[r][0] * a0 + m[r][1] * a1 + m[r][2] * a2 + m[r][3] * a3;
        }
    }
}

/// Apply `u` on bond j = {j, j+1 mod N} (0-based), site j first.
inline void apply_two_site(StateVector& state, const Matrix4c& u, int bond) {
    const int n = state.n_sites();
    if (n < 2) throw std::out_of_range("apply_two_site: need at least two sites");
    if (bond < 0 || bond >= n) {
        throw std::out_of_range("apply_two_site: bond " + std::to_string(bond) +
                                " outside [0, " + std::to_string(n) + ")");
    }
    // For N = 2 the wraparound bond {1, 0} is a distinct ordering of the same pair.
    apply_two_site_pair(state, u, bond, (bond + 1) % n);
}

/// <psi| prod_j sigma^z_j |psi>.
inline double parity_expectation(const StateVector& state) {
    double acc = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t a = 0; a < amps.size(); ++a) {
        const double w = std::norm(amps[a]);
        acc += (std::popcount(a) & 1) ? -w : w;
    }
    return acc;
}

}  // namespace entcool
