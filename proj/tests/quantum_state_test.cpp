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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "entcool/quantum_state.hpp"
#include "oracles.hpp"

namespace entcool {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

double max_diff(const StateVector& a, const StateVector& b) {
    double d = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) d = std::max(d, std::abs(a[x] - b[x]));
    return d;
}

// Full 2^N operator with u on (first, second): U[y][x] = u[loc y][loc x]
// when the spectators agree.
Eigen::MatrixXcd embed(const Matrix4c& u, int first, int second, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    const std::uint64_t mask = (std::uint64_t{1} << first) | (std::uint64_t{1} << second);
    auto loc = [&](std::uint64_t x) { return 2 * ((x >> first) & 1) + ((x >> second) & 1); };
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint64_t y = 0; y < std::uint64_t(dim); ++y)
        for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x)
            if ((x & ~mask) == (y & ~mask)) full(y, x) = u(loc(y), loc(x));
    return full;
}

TEST(StateVector, Constructors) {
    StateVector s(3);
    EXPECT_EQ(s.size(), 8u);
    EXPECT_EQ(s[0], cplx(1.0));
    EXPECT_THROW(StateVector(3, std::vector<cplx>(7)), std::invalid_argument);
    EXPECT_THROW(StateVector(0), std::invalid_argument);
    EXPECT_THROW(StateVector::basis(3, 8), std::out_of_range);
    EXPECT_NEAR(StateVector::ghz(5).norm(), 1.0, 1e-15);
    EXPECT_NEAR(StateVector::w(5).norm(), 1.0, 1e-15);
}

TEST(GateSets, Membership) {
    EXPECT_EQ(kinds_of(GateSet::Set1).size(), 3u);
    EXPECT_EQ(kinds_of(GateSet::Universal).size(), 6u);
    for (auto k : kinds_of(GateSet::Set1)) EXPECT_TRUE(in_set1(k));
    EXPECT_FALSE(in_set1(GateKind::ZZ));
    EXPECT_EQ(parse_gate_set("set1"), GateSet::Set1);
    EXPECT_EQ(parse_gate_set(to_string(GateSet::Universal)), GateSet::Universal);
    EXPECT_THROW(parse_gate_set("set2"), std::invalid_argument);
    EXPECT_THROW(gate_kind_from_int(7), std::invalid_argument);
}

TEST(Gates, XXOnAllUp) {
    StateVector s(2);
    apply_two_site_pair(s, two_site_unitary(GateKind::XX, kPi / 10), 0, 1);
    EXPECT_NEAR(std::abs(s[0] - std::cos(kPi / 10)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[3] - I * std::sin(kPi / 10)), 0.0, 1e-15);
    EXPECT_EQ(s[1], cplx(0.0));
    EXPECT_EQ(s[2], cplx(0.0));
}

TEST(Gates, ZSumOnOppositeSpinsIsIdentity) {
    for (double dt : {0.1, kPi / 10, 1.3}) {
        for (std::uint64_t basis : {1u, 2u}) {
            auto s = StateVector::basis(2, basis);
            apply_two_site_pair(s, two_site_unitary(GateKind::ZI_IZ, dt), 0, 1);
            EXPECT_NEAR(max_diff(s, StateVector::basis(2, basis)), 0.0, 1e-15);
        }
    }
}

TEST(Gates, ClosedFormMatchesSeriesExponential) {
    for (int k = 1; k <= 6; ++k) {
        const auto kind = static_cast<GateKind>(k);
        const Eigen::MatrixXcd ref = oracle::expm(I * (kPi / 10) * Eigen::MatrixXcd(gate_generator(kind)));
        EXPECT_LE((two_site_unitary(kind, kPi / 10) - ref).cwiseAbs().maxCoeff(), 1e-12) << "kind " << k;
    }
}

TEST(Gates, Generators) {
    const Matrix4c g = gate_generator(GateKind::ZZ);
    EXPECT_EQ(g, Matrix4c(Eigen::Vector4cd(1, -1, -1, 1).asDiagonal()));
    for (int k = 1; k <= 6; ++k) {
        const Matrix4c h = gate_generator(static_cast<GateKind>(k));
        EXPECT_EQ((h - h.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Gates, Unitarity) {
    const GateTable t;
    for (int k = 1; k <= 6; ++k) {
        const auto& u = t[static_cast<GateKind>(k)];
        EXPECT_LE((u.adjoint() * u - Matrix4c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Apply, IdentityIsBitExact) {
    const auto s0 = oracle::random_state(7, 3);
    for (int b = 0; b < 7; ++b) {
        auto s = s0;
        apply_two_site(s, Matrix4c::Identity(), b);
        EXPECT_EQ(s, s0);
    }
}

TEST(Apply, BellPair) {
    StateVector s(2);
    apply_two_site_pair(s, two_site_unitary(GateKind::XX, kPi / 4), 0, 1);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s[0] - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[3] - I * r), 0.0, 1e-15);
}

TEST(Apply, MatchesFullOperatorOnEveryBond) {
    for (int n : {3, 5}) {
        const auto psi = oracle::random_state(n, 11 + n);
        for (int b = 0; b < n; ++b) {
            const auto u = oracle::random_unitary(100 + b);
            auto s = psi;
            apply_two_site(s, u, b);
            Eigen::VectorXcd v(psi.size());
            for (std::size_t x = 0; x < psi.size(); ++x) v[x] = psi[x];
            const Eigen::VectorXcd w = embed(u, b, (b + 1) % n, n) * v;
            for (std::size_t x = 0; x < psi.size(); ++x) EXPECT_NEAR(std::abs(s[x] - w[x]), 0.0, 1e-13);
        }
    }
}

// Wraparound bond {N-1, 0} versus relabeling the ring so it becomes {0, 1}.
TEST(Apply, WraparoundMatchesRelabeling) {
    for (int n : {5, 7, 9}) {
        const auto psi = oracle::random_state(n, 77 + n);
        const auto u = oracle::random_unitary(5 + n);
        auto direct = psi;
        apply_two_site(direct, u, n - 1);
        auto shifted = oracle::relabel(psi, 1);
        apply_two_site(shifted, u, 0);
        const auto back = oracle::relabel(shifted, -1);
        EXPECT_LE(max_diff(direct, back), 1e-13) << "N=" << n;
    }
}

TEST(Apply, RejectsBadBond) {
    StateVector s(5);
    EXPECT_THROW(apply_two_site(s, Matrix4c::Identity(), 5), std::out_of_range);
    EXPECT_THROW(apply_two_site(s, Matrix4c::Identity(), -1), std::out_of_range);
    EXPECT_THROW(apply_two_site_pair(s, Matrix4c::Identity(), 2, 2), std::out_of_range);
}

TEST(Parity, Examples) {
    EXPECT_EQ(parity_expectation(StateVector(3)), 1.0);
    EXPECT_EQ(parity_expectation(StateVector::basis(3, 1)), -1.0);
    EXPECT_NEAR(parity_expectation(StateVector::ghz(3)), 0.0, 1e-15);
}

TEST(Invariants, NormAfterOneGate) {
    const GateTable t;
    const auto psi = oracle::random_state(9, 1);
    for (int k = 1; k <= 6; ++k) {
        for (int b = 0; b < 9; ++b) {
            auto s = psi;
            apply_two_site(s, t[static_cast<GateKind>(k)], b);
            EXPECT_LE(std::abs(s.norm() - 1.0), 1e-12);
        }
    }
}

TEST(Invariants, NormAfterManyGates) {
    const GateTable t;
    auto s = oracle::random_state(7, 2);
    CounterRng rng(17);
    for (int i = 0; i < 100000; ++i) {
        const auto kind = static_cast<GateKind>(1 + rng.below(6));
        apply_two_site(s, t[kind], static_cast<int>(rng.below(7)));
    }
    EXPECT_LE(std::abs(s.norm() - 1.0), 1e-9);
}

TEST(Invariants, Set1ConservesParity) {
    const GateTable t;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto psi = oracle::random_state(7, 200 + seed);
        const double p0 = parity_expectation(psi);
        for (auto kind : kinds_of(GateSet::Set1)) {
            for (int b = 0; b < 7; ++b) {
                auto s = psi;
                apply_two_site(s, t[kind], b);
                EXPECT_LE(std::abs(parity_expectation(s) - p0), 1e-10);
            }
        }
    }
    // A kind outside Set1 does change it.
    auto s = StateVector(7);
    apply_two_site(s, t[GateKind::XI_IX], 0);
    EXPECT_LT(parity_expectation(s), 1.0 - 1e-3);
}

}  // namespace
}  // namespace entcool
