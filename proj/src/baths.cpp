// SPDX-License-Identifier: Apache-2.0
#include "ness/baths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ness {

SpectralDensity SpectralDensity::wideband(double G)
{
    require(G >= 0.0, "wideband rate must be >= 0");
    SpectralDensity sd;
    sd.kind = Kind::Wideband;
    sd.Gamma = G;
    return sd;
}

SpectralDensity SpectralDensity::semi_elliptic(double eps, double tau, double tau_a)
{
    require(tau > 0.0, "lead hopping tau must be > 0");
    SpectralDensity sd;
    sd.kind = Kind::SemiElliptic;
    sd.eps = eps;
    sd.tau = tau;
    sd.tau_a = tau_a;
    return sd;
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> w, std::vector<double> g)
{
    require(w.size() == g.size() && w.size() >= 2, "tabulated spectral density needs >= 2 points");
    require(std::is_sorted(w.begin(), w.end()), "tabulated grid must be increasing");
    for (double v : g) require(v >= 0.0, "tabulated spectral density must be >= 0");
    SpectralDensity sd;
    sd.kind = Kind::Tabulated;
    sd.grid = std::move(w);
    sd.values = std::move(g);
    return sd;
}

SpectralDensity SpectralDensity::from_csv(const std::string& path)
{
    std::ifstream in(path);
    require(bool(in), "cannot open spectral density file " + path);
    std::vector<double> w, g;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b;
        if (ss >> a >> b) {
            w.push_back(a);
            g.push_back(b);
        }
    }
    return tabulated(std::move(w), std::move(g));
}

std::optional<std::pair<double, double>> SpectralDensity::support() const
{
    switch (kind) {
    case Kind::Wideband:
        return std::nullopt;
    case Kind::SemiElliptic:
        return std::make_pair(eps - 2.0 * tau, eps + 2.0 * tau);
    case Kind::Tabulated:
        return std::make_pair(grid.front(), grid.back());
    }
    return std::nullopt;
}

double fermi(double x)
{
    if (x > 0.0) {
        double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double occupation(const BathSpec& b, double w)
{
    if (b.statistics == BathStatistics::Magnetization) {
        require(b.target.has_value(), "magnetization-target bath needs a target eta");
        require(*b.target >= -1.0 && *b.target <= 1.0, "eta must lie in [-1, 1]");
        return 0.5 * (1.0 + *b.target);
    }
    if (b.target) return *b.target;
    double x = b.beta * (w - b.mu);
    if (b.statistics == BathStatistics::Fermion) return fermi(x);
    require(x > 0.0, "bosonic occupation requires beta (omega - mu) > 0");
    return 1.0 / std::expm1(x);
}

double rate(const SpectralDensity& sd, double w)
{
    switch (sd.kind) {
    case SpectralDensity::Kind::Wideband:
        return sd.Gamma;
    case SpectralDensity::Kind::SemiElliptic: {
        double u = (w - sd.eps) / (2.0 * sd.tau);
        if (std::abs(u) >= 1.0) return 0.0;
        return 2.0 * sd.tau_a * sd.tau_a / sd.tau * std::sqrt(1.0 - u * u);
    }
    case SpectralDensity::Kind::Tabulated: {
        const auto& x = sd.grid;
        require(w >= x.front() && w <= x.back(),
                "frequency outside tabulated spectral-density grid (no extrapolation)");
        auto it = std::upper_bound(x.begin(), x.end(), w);
        if (it == x.end()) return sd.values.back();
        size_t k = size_t(it - x.begin());
        double t = (w - x[k - 1]) / (x[k] - x[k - 1]);
        return (1.0 - t) * sd.values[k - 1] + t * sd.values[k];
    }
    }
    return 0.0;
}

GoldenRates golden_rule_rates(const SpectralDensity& sd, const BathSpec& b, double w)
{
    if (b.statistics == BathStatistics::Boson) {
        require(w != 0.0, "bosonic golden-rule rates undefined at zero frequency");
        // Odd continuation: G(-w) = -G(w), n(-w) = -(1 + n(w)).
        double aw = std::abs(w);
        double G = rate(sd, aw);
        BathSpec t = b;
        t.target.reset();
        double n = occupation(t, aw);
        if (w > 0.0) return {G * n, G * (n + 1.0)};
        return {G * (n + 1.0), G * n};
    }
    double G = rate(sd, w);
    double f = occupation(b, w);
    return {G * f, G * (1.0 - f)};
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol)
{
    if (a == b) return 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double err = 0.0;
    return GK::integrate(f, a, b, 20, tol, &err);
}

double integrate_real_line(const std::function<double(double)>& f, double tol)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double err = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    return GK::integrate(f, -inf, inf, 20, tol, &err);
}

namespace {

// Integral of g over the support of sd; semi-elliptic edges via w = eps + 2 tau sin(theta).
double integrate_support(const SpectralDensity& sd, const std::function<double(double)>& g,
                         std::vector<double> breaks = {})
{
    auto sup = sd.support();
    require(sup.has_value(), "integral over an unbounded spectral density");
    if (sd.kind == SpectralDensity::Kind::SemiElliptic) {
        auto h = [&](double th) {
            return g(sd.eps + 2.0 * sd.tau * std::sin(th)) * 2.0 * sd.tau * std::cos(th);
        };
        std::vector<double> pts{-kPi / 2};
        for (double w : breaks) {
            double u = (w - sd.eps) / (2.0 * sd.tau);
            if (std::abs(u) < 1.0) pts.push_back(std::asin(u));
        }
        pts.push_back(kPi / 2);
        std::sort(pts.begin(), pts.end());
        double s = 0.0;
        for (size_t k = 0; k + 1 < pts.size(); ++k) s += integrate(h, pts[k], pts[k + 1]);
        return s;
    }
    std::vector<double> pts(sd.grid.begin(), sd.grid.end());
    for (double w : breaks)
        if (w > sup->first && w < sup->second) pts.push_back(w);
    std::sort(pts.begin(), pts.end());
    double s = 0.0;
    auto clamped = [&](double w) { return g(std::clamp(w, sup->first, sup->second)); };
    for (size_t k = 0; k + 1 < pts.size(); ++k) s += integrate(clamped, pts[k], pts[k + 1]);
    return s;
}

} // namespace

double principal_value(const SpectralDensity& sd, const std::function<double(double)>& weight,
                       double w)
{
    auto sup = sd.support();
    require(sup.has_value(), "principal value of a wideband density diverges");
    auto [a, b] = *sup;
    bool inside = w > a && w < b;
    double g0 = inside ? rate(sd, w) * weight(w) : 0.0;
    auto integrand = [&](double e) {
        double d = w - e;
        if (d == 0.0) return 0.0;
        return (rate(sd, e) * weight(e) - g0) / d;
    };
    double s = integrate_support(sd, integrand, {w});
    if (inside && g0 != 0.0) s += g0 * std::log(std::abs((w - a) / (w - b)));
    return s / (2.0 * kPi);
}

std::pair<double, double> lamb_coefficients(const SpectralDensity& sd, const BathSpec& b, double w)
{
    if (b.statistics == BathStatistics::Boson) {
        auto ne = [&](double e) {
            if (e <= 0.0) return 0.0;
            BathSpec t = b;
            t.target.reset();
            return 1.0 + occupation(t, e);
        };
        auto na = [&](double e) { return ne(e) - (e > 0.0 ? 1.0 : 0.0); };
        return {principal_value(sd, ne, w), principal_value(sd, na, w)};
    }
    auto fe = [&](double e) { return 1.0 - occupation(b, e); };
    auto fa = [&](double e) { return occupation(b, e); };
    return {principal_value(sd, fe, w), principal_value(sd, fa, w)};
}

ReactionCoordinate reaction_coordinate(const SpectralDensity& sd)
{
    auto sup = sd.support();
    require(sup.has_value(), "reaction coordinate needs a spectral density with finite support");
    if (sup->first <= 0.0) {
        bool zero_inside = sup->first <= 0.0 && sup->second >= 0.0 && rate(sd, 0.0) > 0.0;
        require(!zero_inside, "spectral density non-vanishing at w=0: int G/w diverges");
        require(false, "reaction coordinate needs support on w > 0");
    }
    double m1 = integrate_support(sd, [&](double w) { return w * rate(sd, w); });
    double mm1 = integrate_support(sd, [&](double w) { return rate(sd, w) / w; });
    require(m1 > 0.0 && mm1 > 0.0, "reaction coordinate integrals must be positive");
    double Omega = std::sqrt(m1 / mm1);
    double lam = std::sqrt(m1 / (2.0 * kPi * Omega));
    return {Omega, lam};
}

} // namespace ness
