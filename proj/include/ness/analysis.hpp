// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ness/types.hpp"

namespace ness {

enum class Regime { Ballistic, Superdiffusive, Diffusive, Subdiffusive, Localized, Undetermined };

std::string regime_name(Regime r);

struct FitOptions {
    std::optional<double> L_min;  // default max(8, 2 * first size)
    std::optional<double> L_max;
    double anchor_tol = 0.1;      // half-width around alpha = 0 and alpha = 1
    double exp_preference = 10.0; // exponential fit wins when its residual is this much smaller
    double monotone_tol = 1e-6;   // allowed relative increase of the current with L
    double confidence = 0.95;
};

struct TransportFit {
    double alpha = 0.0;
    double alpha_lo = 0.0, alpha_hi = 0.0;  // confidence interval
    Regime regime = Regime::Undetermined;
    double L_min = 0.0, L_max = 0.0;
    double r2 = 0.0;
    double nu = 0.0;                   // 1 / (alpha + 1)
    std::optional<double> L0;          // localization length when the exponential fit is preferred
    double power_residual = 0.0;       // sum of squared log residuals
    double exp_residual = 0.0;
    int points = 0;
};

// J ~ L^{-alpha}, or J ~ exp(-L / L0) when that fits markedly better.
TransportFit fit_exponent(const std::vector<double>& sizes, const std::vector<double>& currents,
                          const FitOptions& opt = {});

// Label of an exponent with thresholds +-tol around the integer anchors.
Regime classify(double alpha, double tol = 0.1);

struct Crossover {
    double L_Gamma;  // Gamma^{-1/(alpha0+1)}
    double c_Gamma;  // c0 Gamma^{(alpha0-1)/(alpha0+1)}
    double exponent_c;  // (alpha0-1)/(alpha0+1)
};
Crossover dephasing_crossover(double alpha0, double Gamma, double c0 = 1.0);

// Piecewise I(Gamma, L): c0 / L^alpha0 below L_Gamma, c_Gamma / L above.
double crossover_current(double alpha0, double Gamma, double L, double c0 = 1.0);

struct Rectification {
    double R;  // -J_f / J_b
    double C;  // |(J_f + J_b) / (J_f - J_b)|
};
Rectification rectification(double J_f, double J_b);

} // namespace ness
