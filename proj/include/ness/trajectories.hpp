// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ness/generators.hpp"

namespace ness {

enum class TrajectoryScheme { Euler, WaitingTime };

struct TrajectoryConfig {
    double dt = 0.01;
    double t_final = 1.0;
    int n_traj = 100;
    std::uint64_t seed = 0;
    TrajectoryScheme scheme = TrajectoryScheme::Euler;
    int n_samples = 20;       // samples at t_final * k / n_samples, k = 0..n_samples
    int threads = 1;
    bool keep_states = false; // store the final state of each trajectory
};

struct JumpEvent {
    double t;
    int channel;
};

struct TrajectoryRecord {
    std::vector<JumpEvent> jumps;
    RMat samples;  // (sample, observable)
    Vec final_state;
};

struct EnsembleResult {
    std::vector<double> times;
    RMat mean;    // (sample, observable)
    RMat sem;   // standard error of the mean
    std::vector<TrajectoryRecord> records;
};

// H - (i/2) sum_k rate_k A_k^dag A_k.
SpMat effective_hamiltonian(const GeneratorBundle& g);

EnsembleResult run_ensemble(const GeneratorBundle& g, const Vec& psi0, const TrajectoryConfig& cfg,
                            const std::vector<SpMat>& observables);

// Empirical p_n of the number of jumps on the given channels up to time t (all channels if empty).
RVec count_statistics(const std::vector<TrajectoryRecord>& records, const std::vector<int>& channels,
                      double t);

// Newline-delimited JSON events {"traj":i,"t":..,"channel":k}.
void write_events(std::ostream& os, const std::vector<TrajectoryRecord>& records);

} // namespace ness
