// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ness/types.hpp"

namespace ness {

// Boundary-driven XX chain, equal rates gamma: magnetization current and profile.
double xx_current(double gamma, double J, double f1, double fL);

struct XXProfile {
    double m_star;  // f1 + fL - 1
    double first;   // <sigma^z_1>
    double last;    // <sigma^z_L>
    RVec sites;     // <sigma^z_i>, i = 1..L
};
XXProfile xx_profile(double gamma, double J, double f1, double fL, int L);

// Tight-binding chain (hopping J) with bulk dephasing Gamma: particle current from site 1 to L.
double xx_dephasing_current(double gamma, double Gamma, double J, int L, double n1, double nL);

// (2/g) (B^{L-1})_00 / (B^L)_00 with the (L+1)-dimensional tridiagonal B; units of
// H = (1/2) sum sigma.sigma and jump rates 4g.
double heisenberg_mps_formula(double g, int L);

// Same current for the XXZ chain (coupling J, Delta = 1) driven by sqrt(gamma) sigma^+_1 and
// sqrt(gamma) sigma^-_L, with the magnetization current -2J <sx sy' - sy sx'>.
double heisenberg_mps_current(double gamma, int L, double J = 1.0);

} // namespace ness
