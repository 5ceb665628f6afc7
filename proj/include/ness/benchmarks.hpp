// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ness/exact.hpp"
#include "ness/generators.hpp"

namespace ness {

// Double dot h = [[eps, hc], [hc, eps]] between two wideband fermionic leads.
struct DoubleDotSpec {
    double eps = 1.0;
    double hc = 0.05;
    double Gamma = 0.05;  // Gamma_L = Gamma_R
    double beta = 1.0;
    double mu_L = 1.0;
    double mu_R = -1.0;
};

HamiltonianSpec double_dot_model(const DoubleDotSpec& s);
std::vector<BathSpec> double_dot_baths(const DoubleDotSpec& s);

// C_ij = tr(rho c_j^dag c_i) of a fermionic many-body state.
Mat covariance_from_state(const Mat& rho, const HamiltonianSpec& H);

struct ValidityPoint {
    double hc, Gamma;
    double D_LME, D_GME, D_RED;
    double I_EX, I_LME, I_GME, I_RED;
    double residual;  // largest steady-state residual of the three master equations
};

// Trace distances between exact and master-equation stationary single-particle density matrices.
ValidityPoint validity_point(const DoubleDotSpec& s);

struct RelaxationSpec {
    double eps = 1.0;
    double tau = 1.0;
    double tau_a = 0.1;
    double beta = 1.0;
    double mu = 1.0;
    double n0 = 0.0;  // initial dot occupation
};

// Dot occupation for a lead of N sites at the given times (exact single-particle propagation).
std::vector<double> dot_occupation_exact(const RelaxationSpec& s, int N, const std::vector<double>& times);

// Same from the local master equation with rate 2 tau_a^2 / tau (the band-center spectral density).
std::vector<double> dot_occupation_lme(const RelaxationSpec& s, const std::vector<double>& times);

} // namespace ness
