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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "entcool/entanglement.hpp"
#include "entcool/quantum_state.hpp"
#include "entcool/rng.hpp"

namespace entcool {

struct CoolingConfig {
    GateSet gate_set = GateSet::Universal;
    int total_steps = 3000;
    int n_temperatures = 100;
    double t_high = 1e-4;
    double t_low = 1e-8;
    double alpha = 2.0;
    double dt = std::numbers::pi / 10;
    int n_trajectories = 24;
    std::uint64_t base_seed = 20221;
    int renorm_interval = 10000;

    void validate() const {
        if (!(t_high > t_low && t_low > 0.0)) {
            throw std::invalid_argument("CoolingConfig: need t_high > t_low > 0");
        }
        // total_steps = 0 is a valid "measure the initial state" run.
        if (n_temperatures < 1 || total_steps < 0 ||
            (total_steps > 0 && total_steps < n_temperatures)) {
            throw std::invalid_argument("CoolingConfig: need total_steps >= n_temperatures >= 1");
        }
        if (n_trajectories < 1) throw std::invalid_argument("CoolingConfig: need M >= 1");
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
            throw std::invalid_argument("CoolingConfig: alpha must be finite and >= 0");
        }
        if (!std::isfinite(dt)) throw std::invalid_argument("CoolingConfig: dt must be finite");
        if (renorm_interval < 1) throw std::invalid_argument("CoolingConfig: renorm_interval < 1");
    }
};

/// Log-evenly spaced temperatures from t_high down to t_low inclusive.
inline std::vector<double> temperature_grid(double t_high, double t_low, int n_temperatures) {
    if (n_temperatures < 1) throw std::invalid_argument("temperature_grid: n_temperatures < 1");
    std::vector<double> grid(n_temperatures);
    if (n_temperatures == 1) {
        grid[0] = t_high;
        return grid;
    }
    const double lh = std::log10(t_high);
    const double ll = std::log10(t_low);
    for (int k = 0; k < n_temperatures; ++k) {
        grid[k] = std::pow(10.0, lh + (ll - lh) * k / (n_temperatures - 1));
    }
    grid.front() = t_high;
    grid.back() = t_low;
    return grid;
}

/// Lengths of the contiguous step segments; earlier segments take the remainder.
inline std::vector<int> segment_lengths(int total_steps, int n_segments) {
    std::vector<int> out(n_segments, total_steps / n_segments);
    for (int k = 0; k < total_steps % n_segments; ++k) ++out[k];
    return out;
}

/// Temperature used at each of the total_steps steps.
inline std::vector<double> temperature_schedule(double t_high, double t_low, int n_temperatures,
                                                int total_steps) {
    if (total_steps < n_temperatures) {
        throw std::invalid_argument("temperature_schedule: total_steps < n_temperatures");
    }
    const auto grid = temperature_grid(t_high, t_low, n_temperatures);
    const auto lengths = segment_lengths(total_steps, n_temperatures);
    std::vector<double> out;
    out.reserve(total_steps);
    for (int k = 0; k < n_temperatures; ++k) out.insert(out.end(), lengths[k], grid[k]);
    return out;
}

/// min{1, exp(-delta / T)} against one uniform draw in [0, 1).
inline bool metropolis_accept(double delta, double temperature, double uniform) noexcept {
    if (delta <= 0.0) return true;
    return uniform < std::exp(-delta / temperature);
}

/// Per-trajectory scratch space, reused across steps.
struct StepWorkspace {
    std::vector<cplx> backup;
    std::vector<double> cache_backup;
};

struct StepOutcome {
    bool accepted = false;
    GateKind kind = GateKind::ZI_IZ;
    int bond = 0;
    double delta = 0.0;
};

/**
 * One Metropolis move: draw a kind uniformly from the active set and a bond
 * uniformly from all N bonds, apply the gate, update the two affected
 * cache entries and accept on the change of the averaged entropy. A
 * rejected move restores state and cache bit-exactly.
 */
inline StepOutcome metropolis_step(StateVector& state, EntropyCache& cache, CounterRng& rng,
                                   double temperature, GateSet gate_set, const GateTable& gates,
                                   StepWorkspace& ws, const RotationTable* table = nullptr) {
    const auto kinds = kinds_of(gate_set);
    StepOutcome out;
    out.kind = kinds[rng.below(kinds.size())];
    out.bond = static_cast<int>(rng.below(static_cast<std::uint64_t>(state.n_sites())));
    const double u = rng.uniform();

    const auto amps = state.amplitudes();
    ws.backup.assign(amps.begin(), amps.end());
    ws.cache_backup = cache.per_block;
    const double old_average = cache.average;

    apply_two_site(state, gates[out.kind], out.bond);
    incremental_update(cache, state, out.bond, table);
    out.delta = cache.average - old_average;
    out.accepted = metropolis_accept(out.delta, temperature, u);
    if (!out.accepted) {
        std::copy(ws.backup.begin(), ws.backup.end(), amps.begin());
        cache.per_block = ws.cache_backup;
        cache.average = old_average;
    }
    return out;
}

struct TrajectoryRecord {
    int trajectory_index = 0;
    std::uint64_t seed = 0;
    std::vector<double> entropy_trace;  // total_steps + 1 entries
    std::vector<bool> accept_trace;     // total_steps entries
    std::vector<RdmSpectrum> final_spectra;  // one half-chain block per offset
    int accepted_count = 0;

    bool operator==(const TrajectoryRecord& o) const {
        if (final_spectra.size() != o.final_spectra.size()) return false;
        for (std::size_t i = 0; i < final_spectra.size(); ++i) {
            if (final_spectra[i].eigenvalues != o.final_spectra[i].eigenvalues ||
                !(final_spectra[i].block == o.final_spectra[i].block))
                return false;
        }
        return trajectory_index == o.trajectory_index && seed == o.seed &&
               entropy_trace == o.entropy_trace && accept_trace == o.accept_trace &&
               accepted_count == o.accepted_count;
    }
};

inline std::uint64_t trajectory_seed(std::uint64_t base_seed, int trajectory_index) noexcept {
    return CounterRng(base_seed).split(static_cast<std::uint64_t>(trajectory_index)).key();
}

/**
 * Run one annealing trajectory. Step k draws from a stream keyed by
 * (base_seed, trajectory_index, k), so the record depends on nothing but
 * its inputs.
 */
inline TrajectoryRecord run_trajectory(const StateVector& initial, const CoolingConfig& config,
                                       int trajectory_index,
                                       std::shared_ptr<const RotationTable> table = nullptr) {
    config.validate();
    if (trajectory_index < 0 || trajectory_index >= config.n_trajectories) {
        throw std::out_of_range("run_trajectory: trajectory index out of range");
    }
    if (!table) table = RotationTable::make(initial.n_sites());

    const auto schedule = config.total_steps > 0
                              ? temperature_schedule(config.t_high, config.t_low,
                                                     config.n_temperatures, config.total_steps)
                              : std::vector<double>{};
    const GateTable gates(config.dt);
    const CounterRng traj_rng = CounterRng(config.base_seed).split(trajectory_index);

    TrajectoryRecord rec;
    rec.trajectory_index = trajectory_index;
    rec.seed = traj_rng.key();
    rec.entropy_trace.reserve(config.total_steps + 1);
    rec.accept_trace.reserve(config.total_steps);

    StateVector state = initial;
    EntropyCache cache = averaged_half_chain_entropy(state, config.alpha, table.get());
    rec.entropy_trace.push_back(cache.average);
    StepWorkspace ws;
    for (int step = 0; step < config.total_steps; ++step) {
        CounterRng rng = traj_rng.split(static_cast<std::uint64_t>(step));
        const auto o = metropolis_step(state, cache, rng, schedule[step], config.gate_set, gates,
                                       ws, table.get());
        rec.accept_trace.push_back(o.accepted);
        rec.accepted_count += o.accepted ? 1 : 0;
        if ((step + 1) % config.renorm_interval == 0) {
            state.normalize();
            cache = averaged_half_chain_entropy(state, config.alpha, table.get());
        }
        rec.entropy_trace.push_back(cache.average);
    }
    const int len = (state.n_sites() - 1) / 2;
    for (int l = 0; l < state.n_sites(); ++l) {
        rec.final_spectra.push_back(block_rdm_spectrum(state, {l, len}, table.get()));
    }
    return rec;
}

struct EnsembleResult {
    std::vector<double> mean_trace;
    std::vector<double> stderr_trace;
    std::vector<double> accept_rate;  // fraction of trajectories accepting at each step
    std::vector<TrajectoryRecord> per_trajectory;
    CoolingConfig config;
};

class TrajectoryFailure : public std::runtime_error {
  public:
    TrajectoryFailure(int index, const std::string& cause)
        : std::runtime_error("trajectory " + std::to_string(index) + " failed: " + cause),
          index_(index) {}
    int index() const noexcept { return index_; }

  private:
    int index_;
};

using ProgressCallback = std::function<void(int trajectory_index, int completed, int total)>;

/// Mean, standard error and acceptance rate over the trajectory records.
inline void aggregate(EnsembleResult& result) {
    const auto& recs = result.per_trajectory;
    const std::size_t m = recs.size();
    const std::size_t len = recs.front().entropy_trace.size();
    result.mean_trace.assign(len, 0.0);
    result.stderr_trace.assign(len, 0.0);
    result.accept_rate.assign(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
        double sum = 0.0;
        for (const auto& r : recs) sum += r.entropy_trace[k];
        const double mean = sum / static_cast<double>(m);
        double var = 0.0;
        if (m > 1) {
            for (const auto& r : recs) var += (r.entropy_trace[k] - mean) * (r.entropy_trace[k] - mean);
            var /= static_cast<double>(m - 1);
        }
        result.mean_trace[k] = mean;
        result.stderr_trace[k] = std::sqrt(var / static_cast<double>(m));
        if (k > 0) {
            int acc = 0;
            for (const auto& r : recs) acc += r.accept_trace[k - 1] ? 1 : 0;
            result.accept_rate[k] = static_cast<double>(acc) / static_cast<double>(m);
        }
    }
}

/**
 * Run M independent trajectories on `workers` threads. The result does not
 * depend on the worker count or on scheduling order.
 */
inline EnsembleResult run_ensemble(const StateVector& initial, const CoolingConfig& config,
                                   int workers = 1, const ProgressCallback& progress = {}) {
    config.validate();
    const int m = config.n_trajectories;
    auto table = RotationTable::make(initial.n_sites());

    EnsembleResult result;
    result.config = config;
    result.per_trajectory.resize(m);

    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::atomic<bool> abort{false};
    std::mutex mu;
    int failed_index = -1;
    std::string failed_cause;

    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= m || abort.load()) return;
            try {
                result.per_trajectory[i] = run_trajectory(initial, config, i, table);
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                if (failed_index < 0 || i < failed_index) {
                    failed_index = i;
                    failed_cause = e.what();
                }
                abort.store(true);
                return;
            }
            const int c = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(mu);
                progress(i, c, m);
            }
        }
    };

    const int n_workers = std::clamp(workers, 1, m);
    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    }
    if (failed_index >= 0) throw TrajectoryFailure(failed_index, failed_cause);

    aggregate(result);
    return result;
}

/**
 * Steps before the trace leaves the tolerance band around trace[0]:
 * the first k with |trace[k] - trace[0]| > tolerance * trace[0], or the
 * trace length if it never does (also when trace[0] is zero).
 */
struct PlateauResult {
    std::size_t length = 0;
    bool defined = true;  // false when trace[0] == 0
};

inline PlateauResult plateau_length(const std::vector<double>& trace, double tolerance = 0.05) {
    if (trace.empty()) throw std::invalid_argument("plateau_length: empty trace");
    if (trace[0] == 0.0) return {trace.size(), false};
    const double band = tolerance * std::abs(trace[0]);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (std::abs(trace[k] - trace[0]) > band) return {k, true};
    }
    return {trace.size(), true};
}

}  // namespace entcool
