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

#include <cstdint>
#include <limits>

namespace entcool {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

/// Combine a key with a counter into a fresh key. Distinct (key, counter)
/// pairs give statistically independent outputs.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t counter) noexcept {
    return mix64(key ^ mix64(counter * kGolden + 0x632be59bd9b4e019ull));
}

/**
 * Counter-based random engine.
 *
 * The n-th output is a pure function of (key, n), so a stream can be
 * split into independent substreams with split() and any draw can be
 * reproduced without replaying its predecessors. Satisfies
 * UniformRandomBitGenerator.
 */
class CounterRng {
  public:
    using result_type = std::uint64_t;

    constexpr explicit CounterRng(std::uint64_t key = 0) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return mix64(key_ + kGolden * ++counter_); }

    /// Independent child stream labelled by `label`. Does not advance this stream.
    constexpr CounterRng split(std::uint64_t label) const noexcept {
        return CounterRng(derive_key(key_, label));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept {
        // Lemire's multiply-shift with rejection.
        for (;;) {
            const unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
            const auto low = static_cast<std::uint64_t>(m);
            if (low >= n || low >= (-n) % n) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t counter() const noexcept { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Stream for one Metropolis step of one trajectory.
inline CounterRng trajectory_step_rng(std::uint64_t base_seed, std::uint64_t trajectory,
                                      std::uint64_t step) noexcept {
    return CounterRng(base_seed).split(trajectory).split(step);
}

}  // namespace entcool
