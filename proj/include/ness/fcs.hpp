// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ness/generators.hpp"

namespace ness {

struct FcsOptions {
    double continuation_step = 0.05;
    double fd_step1 = 1e-5;   // central first difference
    double fd_step2 = 1e-3;   // central 5-point second difference
    double crossing_ratio = 0.95;  // overlap ratio flagging a branch crossing
};

// Dominant eigenvalue of the tilted generator, continued from lambda(0) = 0
// (chi reduced to [-pi, pi] for integer-weight counters).
cplx dominant_eigenvalue(const GeneratorBundle& g, const Counter& c, double chi, const FcsOptions& opt = {});

// lambda_dom over a chi grid, continued along the grid (grid must contain or start near 0).
std::vector<cplx> cgf_sweep(const GeneratorBundle& g, const Counter& c, const std::vector<double>& chis,
                            const FcsOptions& opt = {});

// -i tr(L'(0) rho).
double mean_current(const GeneratorBundle& g, const Counter& c);

// -tr(L''(0) rho) - 2i tr(L'(0) sigma), L sigma = i L'(0) rho + I rho, tr sigma = 0.
double noise(const GeneratorBundle& g, const Counter& c);

// Finite-difference cumulants -i lambda'(0) and -lambda''(0).
double fd_mean(const GeneratorBundle& g, const Counter& c, const FcsOptions& opt = {});
double fd_noise(const GeneratorBundle& g, const Counter& c, const FcsOptions& opt = {});

} // namespace ness
