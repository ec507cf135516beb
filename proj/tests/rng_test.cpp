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
#include <array>
#include <set>

#include <gtest/gtest.h>

#include "entcool/rng.hpp"

namespace entcool {
namespace {

// Published SplitMix64 outputs for seed 1234567.
TEST(CounterRng, MatchesSplitMix64Reference) {
    CounterRng rng(1234567);
    EXPECT_EQ(rng(), 6457827717110365317ull);
    EXPECT_EQ(rng(), 3203168211198807973ull);
    EXPECT_EQ(rng(), 9817491932198370423ull);
    EXPECT_EQ(rng.counter(), 3u);
}

TEST(CounterRng, SplitIsPureAndDistinct) {
    const CounterRng base(42);
    auto a = base.split(3), b = base.split(3), c = base.split(4);
    EXPECT_EQ(a.key(), b.key());
    EXPECT_NE(a.key(), c.key());
    EXPECT_EQ(a(), b());
    EXPECT_EQ(base.counter(), 0u);
    EXPECT_EQ(trajectory_step_rng(42, 3, 9).key(), base.split(3).split(9).key());
}

TEST(CounterRng, UniformInUnitInterval) {
    CounterRng rng(9);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(CounterRng, BelowIsUnbiasedOverSmallRange) {
    CounterRng rng(5);
    std::array<int, 7> counts{};
    const int n = 70000;
    for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
    for (int c : counts) EXPECT_NEAR(c, n / 7, 400);
}

TEST(CounterRng, ManySplitsDoNotCollide) {
    std::set<std::uint64_t> keys;
    const CounterRng base(20221);
    for (std::uint64_t t = 0; t < 64; ++t)
        for (std::uint64_t s = 0; s < 1000; ++s) keys.insert(base.split(t).split(s).key());
    EXPECT_EQ(keys.size(), 64000u);
}

}  // namespace
}  // namespace entcool
