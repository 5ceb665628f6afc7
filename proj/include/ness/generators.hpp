// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ness/baths.hpp"
#include "ness/model.hpp"

namespace ness {

// rate * (A rho B^dag * phase - 1/2 {B^dag A, rho}); GKSL channels have A == B.
struct JumpChannel {
    SpMat A, B;
    double rate = 0.0;
    bool paired = false;   // A != B (Redfield)
    int bath = -1;         // -1: not attached to a reservoir (dephasing, custom)
    double particle = 0.0; // net change of the system particle number
    double energy = 0.0;   // energy entering the system
    cplx phase = 1.0;      // counting-field factor on the sandwich term
    std::string label;
};

enum class GeneratorKind { LME, GME, Redfield, Custom };

struct GeneratorBundle {
    GeneratorKind kind = GeneratorKind::Custom;
    SpMat H;  // system Hamiltonian plus Lamb shift / Redfield correction
    std::vector<JumpChannel> channels;
    Eigen::Index dim = 0;
    std::optional<HamiltonianSpec> model;
    std::vector<BathSpec> baths;
    bool energy_counting = true;  // false for non-secular bundles without microscopic weights
    SpMat H_system;               // Hamiltonian without reservoir corrections
    std::vector<SpMat> bath_H;    // per-bath Hermitian corrections, H = H_system + sum bath_H

    bool gksl() const;
};

enum class CounterKind { Particle, Energy, Activity };
struct Counter {
    CounterKind kind = CounterKind::Particle;
    int bath = 0;
};

// Local frequency at which an LME bath evaluates its occupation.
double local_frequency(const HamiltonianSpec& H, const BathSpec& b);

GeneratorBundle make_bundle(const SpMat& H, const std::vector<SpMat>& jumps,
                            const std::vector<double>& rates);

GeneratorBundle build_lme(const HamiltonianSpec& H, const std::vector<BathSpec>& baths);

struct GmeOptions {
    std::optional<double> secular_tol;  // default 1e-9 * spectral range
    bool lamb_shift = true;             // skipped automatically for wideband densities
};
GeneratorBundle build_gme(const HamiltonianSpec& H, const std::vector<BathSpec>& baths,
                          const GmeOptions& opt = {});

struct RedfieldOptions {
    bool principal_value = false;
    std::optional<double> secular_tol;  // only used to label Bohr components for counting
};
GeneratorBundle build_redfield(const HamiltonianSpec& H, const std::vector<BathSpec>& baths,
                               const RedfieldOptions& opt = {});

GeneratorBundle add_dephasing(const GeneratorBundle& g, double Gamma, std::vector<int> sites = {});

GeneratorBundle tilt(const GeneratorBundle& g, const Counter& c, double chi);

// Counting weight of a channel for counter c (0 when the channel is not counted).
double counting_weight(const JumpChannel& ch, const Counter& c);

// Coordinate-sparse text dump of the channel list.
std::string dump(const GeneratorBundle& g);

} // namespace ness
