// SPDX-License-Identifier: Apache-2.0
#include "ness/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

namespace ness {

std::string regime_name(Regime r)
{
    switch (r) {
    case Regime::Ballistic: return "ballistic";
    case Regime::Superdiffusive: return "superdiffusive";
    case Regime::Diffusive: return "diffusive";
    case Regime::Subdiffusive: return "subdiffusive";
    case Regime::Localized: return "localized";
    case Regime::Undetermined: return "undetermined";
    }
    return "undetermined";
}

Regime classify(double a, double tol)
{
    if (std::abs(a) <= tol) return Regime::Ballistic;
    if (std::abs(a - 1.0) <= tol) return Regime::Diffusive;
    if (a > tol && a < 1.0 - tol) return Regime::Superdiffusive;
    if (a > 1.0 + tol) return Regime::Subdiffusive;
    return Regime::Undetermined;
}

namespace {

struct Line {
    double slope, intercept, ssr, r2, slope_se;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Line l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    l.ssr = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (l.intercept + l.slope * x[i]);
        l.ssr += r * r;
    }
    l.r2 = syy > 0.0 ? 1.0 - l.ssr / syy : 1.0;
    l.slope_se = x.size() > 2 ? std::sqrt(l.ssr / (n - 2.0) / sxx) : 0.0;
    return l;
}

} // namespace

TransportFit fit_exponent(const std::vector<double>& sizes, const std::vector<double>& currents,
                          const FitOptions& opt)
{
    require(sizes.size() == currents.size(), "sizes and currents differ in length");
    require(!sizes.empty(), "no data to fit");
    for (size_t i = 0; i < sizes.size(); ++i) {
        require(sizes[i] > 0.0, "sizes must be positive");
        require(currents[i] > 0.0 && std::isfinite(currents[i]), "currents must be positive and finite");
        if (i) require(sizes[i] > sizes[i - 1], "sizes must be strictly increasing");
    }
    TransportFit fit;
    fit.L_min = opt.L_min.value_or(std::max(8.0, 2.0 * sizes.front()));
    fit.L_max = opt.L_max.value_or(std::numeric_limits<double>::infinity());
    std::vector<double> lx, x, y;
    std::vector<size_t> used;
    for (size_t i = 0; i < sizes.size(); ++i)
        if (sizes[i] >= fit.L_min && sizes[i] <= fit.L_max) {
            used.push_back(i);
            x.push_back(sizes[i]);
            lx.push_back(std::log(sizes[i]));
            y.push_back(std::log(currents[i]));
        }
    require(used.size() >= 4, "fit window holds fewer than 4 sizes");
    for (size_t k = 1; k < used.size(); ++k) {
        double prev = currents[used[k - 1]], cur = currents[used[k]];
        if (cur > prev * (1.0 + opt.monotone_tol)) {
            std::ostringstream os;
            os.precision(10);
            os << "current is not monotone in L: J(" << sizes[used[k]] << ") = " << cur << " > J("
               << sizes[used[k - 1]] << ") = " << prev;
            throw ValidationError(os.str());
        }
    }
    fit.points = int(used.size());
    Line pw = least_squares(lx, y);
    Line ex = least_squares(x, y);
    fit.alpha = -pw.slope;
    fit.r2 = pw.r2;
    fit.power_residual = pw.ssr;
    fit.exp_residual = ex.ssr;
    boost::math::students_t dist(double(used.size()) - 2.0);
    double q = boost::math::quantile(dist, 0.5 + 0.5 * opt.confidence);
    fit.alpha_lo = fit.alpha - q * pw.slope_se;
    fit.alpha_hi = fit.alpha + q * pw.slope_se;
    fit.nu = 1.0 / (fit.alpha + 1.0);
    const double floor = 1e-20 * double(used.size());
    if (pw.ssr > floor && ex.ssr * opt.exp_preference <= pw.ssr && ex.slope < 0.0) {
        fit.L0 = -1.0 / ex.slope;
        fit.regime = Regime::Localized;
        fit.r2 = ex.r2;
    } else {
        fit.regime = classify(fit.alpha, opt.anchor_tol);
    }
    return fit;
}

Crossover dephasing_crossover(double alpha0, double Gamma, double c0)
{
    require(Gamma > 0.0, "dephasing rate must be > 0");
    require(alpha0 > -1.0, "alpha0 must exceed -1");
    Crossover c;
    c.L_Gamma = std::pow(Gamma, -1.0 / (alpha0 + 1.0));
    c.exponent_c = (alpha0 - 1.0) / (alpha0 + 1.0);
    c.c_Gamma = c0 * std::pow(Gamma, c.exponent_c);
    return c;
}

double crossover_current(double alpha0, double Gamma, double L, double c0)
{
    require(L > 0.0, "L must be > 0");
    auto c = dephasing_crossover(alpha0, Gamma, c0);
    return L <= c.L_Gamma ? c0 / std::pow(L, alpha0) : c.c_Gamma / L;
}

Rectification rectification(double J_f, double J_b)
{
    require(!(J_f == 0.0 && J_b == 0.0), "rectification undefined for J_f = J_b = 0");
    require(J_f * J_b <= 0.0, "forward and backward currents must have opposite signs");
    Rectification r;
    r.R = J_b == 0.0 ? std::numeric_limits<double>::infinity() : -J_f / J_b;
    r.C = std::abs((J_f + J_b) / (J_f - J_b));
    return r;
}

} // namespace ness
