// SPDX-License-Identifier: Apache-2.0
#include "ness/analytic.hpp"

#include <cmath>
#include <vector>

namespace ness {

double xx_current(double gamma, double J, double f1, double fL)
{
    require(gamma > 0.0, "gamma must be > 0");
    return 16.0 * gamma * J * J / (16.0 * J * J + gamma * gamma) * (f1 - fL);
}

XXProfile xx_profile(double gamma, double J, double f1, double fL, int L)
{
    require(L >= 2, "profile needs L >= 2");
    require(J != 0.0, "profile needs J != 0");
    XXProfile p;
    p.m_star = f1 + fL - 1.0;
    double shift = gamma / (16.0 * J * J) * xx_current(gamma, J, f1, fL);
    p.first = p.m_star + shift;
    p.last = p.m_star - shift;
    p.sites = RVec::Constant(L, p.m_star);
    p.sites(0) = p.first;
    p.sites(L - 1) = p.last;
    return p;
}

double xx_dephasing_current(double gamma, double Gamma, double J, int L, double n1, double nL)
{
    require(gamma > 0.0 && Gamma >= 0.0 && L >= 2, "need gamma > 0, Gamma >= 0, L >= 2");
    return 2.0 * gamma * J * J * (n1 - nL) /
           (4.0 * J * J + gamma * gamma + 2.0 * gamma * Gamma * (L - 1.0));
}

double heisenberg_mps_formula(double gamma, int L)
{
    require(gamma > 0.0, "gamma must be > 0");
    require(L >= 2, "L must be >= 2");
    using R = long double;
    const int n = L + 1;
    const R g = gamma;
    std::vector<R> diag(static_cast<size_t>(n)), sup(diag), sub(diag);
    for (int k = 0; k < n; ++k) {
        diag[size_t(k)] = 2.0L * (R(k) * k + 1.0L / (4.0L * g * g));
        sup[size_t(k)] = k + 1 < n ? R(k + 1) * R(k + 1) : 0.0L;      // B_{k,k+1}
        sub[size_t(k)] = k >= 1 ? R(k - 1) * R(k - 1) + 1.0L / (g * g) : 0.0L;  // B_{k,k-1}
    }
    // v_m = B^m e_0 with per-step rescaling; only (B^{L-1})_00 / (B^L)_00 is needed.
    std::vector<R> v(static_cast<size_t>(n), 0.0L), w(v);
    v[0] = 1.0L;
    R prev0 = 1.0L;
    for (int m = 1; m <= L; ++m) {
        for (int k = 0; k < n; ++k) {
            R s = diag[size_t(k)] * v[size_t(k)];
            if (k + 1 < n) s += sup[size_t(k)] * v[size_t(k + 1)];
            if (k >= 1) s += sub[size_t(k)] * v[size_t(k - 1)];
            w[size_t(k)] = s;
        }
        R scale = 0.0L;
        for (R x : w) scale = std::max(scale, std::abs(x));
        if (!(scale > 0.0L) || !std::isfinite(double(scale))) throw SolverError("matrix power overflow");
        if (m == L) {
            R ratio = prev0 / w[0];
            double J = double(2.0L / g * ratio);
            if (!std::isfinite(J)) throw SolverError("matrix power overflow");
            return J;
        }
        for (int k = 0; k < n; ++k) v[size_t(k)] = w[size_t(k)] / scale;
        prev0 = v[0];
    }
    return 0.0;
}

double heisenberg_mps_current(double gamma, int L, double J)
{
    require(J > 0.0, "J must be > 0");
    return 2.0 * J * heisenberg_mps_formula(gamma / (8.0 * J), L);
}

} // namespace ness
