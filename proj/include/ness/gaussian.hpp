// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ness/baths.hpp"
#include "ness/model.hpp"

namespace ness {

// dC/dt = -(W C + C W^dag) + D - Deph(C), with C_ij = <a_j^dag a_i>.
struct LyapunovSystem {
    Mat h;
    Mat W;
    Mat D;
    RVec dephasing;  // per-site rates; off-diagonal C_ij decays with (G_i + G_j)
    Statistics statistics = Statistics::Fermion;
};

struct CovarianceState {
    Mat C;
    Statistics statistics = Statistics::Fermion;
    double residual = 0.0;
};

// Local baths only: gamma^+ = gamma n, gamma^- = gamma (1 -+ n).
LyapunovSystem build_lyapunov(const Mat& h, const std::vector<BathSpec>& baths,
                              Statistics stats = Statistics::Fermion);

LyapunovSystem with_dephasing(LyapunovSystem sys, double Gamma);

// Smallest real part of the spectrum of W.
double stability_margin(const Mat& W);

// Bartels-Stewart solve of W X + X W^dag = F.
Mat solve_lyapunov(const Mat& W, const Mat& F);

CovarianceState solve_steady(const LyapunovSystem& sys);
CovarianceState solve_steady_dephasing(const LyapunovSystem& sys);

std::vector<CovarianceState> evolve_covariance(const LyapunovSystem& sys, const Mat& C0,
                                               const std::vector<double>& times);

// Particle current from site i to i+1 (1-based).
double covariance_current(const Mat& C, const Mat& h, int i);

// Residual max|-(WC + CW^dag) + D - Deph(C)|.
double covariance_residual(const LyapunovSystem& sys, const Mat& C);

} // namespace ness
