// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ness/types.hpp"

namespace ness {

struct SpectralDensity {
    enum class Kind { Wideband, SemiElliptic, Tabulated };
    Kind kind = Kind::Wideband;
    double Gamma = 0.0;                // Wideband
    double eps = 0.0, tau = 1.0, tau_a = 0.0;  // SemiElliptic
    std::vector<double> grid, values;  // Tabulated

    static SpectralDensity wideband(double G);
    static SpectralDensity semi_elliptic(double eps, double tau, double tau_a);
    static SpectralDensity tabulated(std::vector<double> w, std::vector<double> g);
    static SpectralDensity from_csv(const std::string& path);

    // Finite support [lo, hi]; nullopt for Wideband.
    std::optional<std::pair<double, double>> support() const;
};

enum class BathStatistics { Fermion, Boson, Magnetization };

struct BathSpec {
    BathStatistics statistics = BathStatistics::Fermion;
    int site = 1;
    double gamma = 0.0;                 // LME rate
    std::optional<SpectralDensity> sd;  // GME / Redfield
    double beta = 1.0;
    double mu = 0.0;
    std::optional<double> target;       // occupation f (or n), or eta for Magnetization
    std::optional<double> omega;        // local frequency at which LME occupations are evaluated
};

double fermi(double x);
double occupation(const BathSpec& b, double w);

double rate(const SpectralDensity& sd, double w);

struct GoldenRates {
    double absorb;
    double emit;
};
GoldenRates golden_rule_rates(const SpectralDensity& sd, const BathSpec& b, double w);

// (1/2pi) P int dE G(E) weight(E) / (w - E) over the support of sd.
double principal_value(const SpectralDensity& sd, const std::function<double(double)>& weight,
                       double w);

// Lamb-shift coefficients (S_emit, S_absorb) at Bohr frequency w.
std::pair<double, double> lamb_coefficients(const SpectralDensity& sd, const BathSpec& b, double w);

struct ReactionCoordinate {
    double Omega1;
    double lambda1;
};
ReactionCoordinate reaction_coordinate(const SpectralDensity& sd);

// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);
// Same on the real line.
double integrate_real_line(const std::function<double(double)>& f, double tol = 1e-10);

} // namespace ness
