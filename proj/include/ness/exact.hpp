// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ness/types.hpp"

namespace ness {

// Semi-infinite-chain lead truncated to N sites, in its diagonal (star) form.
struct LeadSpec {
    double eps = 0.0;
    double tau = 1.0;
    double tau_a = 0.1;
    int N = 100;
    double beta = 1.0;
    double mu = 0.0;
    int site = 1;  // system site the lead couples to (1-based)
};

struct LeadModes {
    RVec energies;   // eps - 2 tau cos(pi k / (N + 1))
    RVec couplings;  // tau_a sqrt(2 / (N + 1)) sin(pi k / (N + 1))
};
LeadModes lead_modes(const LeadSpec& lead);

struct ExactSetup {
    Mat h;                     // system single-particle matrix (N <= 4 sites)
    std::vector<LeadSpec> leads;
    Mat C0;                    // initial system covariance C_ij = <d_j^dag d_i>
    Eigen::Index max_modes = 20000;
};

struct ExactTrace {
    std::vector<Mat> system;      // system covariance at each time
    std::vector<double> total_n;  // total particle number of system + leads
};

ExactTrace exact_evolution(const ExactSetup& setup, const std::vector<double>& times);

// Laplace-domain lead self-energy (tau_a^2 / 2 tau^2)(sqrt(1 + 4 tau^2 / (z + i eps)^2) - 1)(z + i eps).
cplx self_energy(const LeadSpec& lead, cplx z);

// Pole sum sum_k |t_k|^2 / (z + i eps_k) of the truncated lead.
cplx self_energy_modes(const LeadSpec& lead, cplx z);

struct WidebandLead {
    int site = 1;
    double Gamma = 0.0;
    std::function<double(double)> f;
};

// Stationary covariance C_ij = <d_j^dag d_i> of a system coupled to wideband leads.
Mat wideband_steady(const Mat& h, const std::vector<WidebandLead>& leads, double tol = 1e-8);

// Retarded Green's function (w - h + i Sigma_a Gamma_a P_a / 2)^{-1}.
Mat retarded_green(const Mat& h, const std::vector<WidebandLead>& leads, double w);

// T(w) = Gamma_L Gamma_R |G_{LR}(w)|^2 for two wideband leads.
double wideband_transmission(const Mat& h, const WidebandLead& left, const WidebandLead& right, double w);

// (1/2 pi) int T(w) (f_L - f_R) dw.
double landauer_current(const std::function<double(double)>& T, const std::function<double(double)>& fL,
                        const std::function<double(double)>& fR, std::vector<double> breakpoints = {},
                        double tol = 1e-10);

// Single-particle density matrix of the double dot, normalized by total occupation,
// with entry (i, j) = <d_i^dag d_j>.
Mat single_particle_density(const Mat& C);

} // namespace ness
