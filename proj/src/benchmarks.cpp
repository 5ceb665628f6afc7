// SPDX-License-Identifier: Apache-2.0
#include "ness/benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "ness/liouville.hpp"

namespace ness {

HamiltonianSpec double_dot_model(const DoubleDotSpec& s)
{
    HamiltonianSpec H;
    H.family = Family::TightBinding;
    H.L = 2;
    H.statistics = Statistics::Fermion;
    Mat h(2, 2);
    h << s.eps, s.hc, s.hc, s.eps;
    H.hopping = h;
    return H;
}

std::vector<BathSpec> double_dot_baths(const DoubleDotSpec& s)
{
    BathSpec l;
    l.statistics = BathStatistics::Fermion;
    l.site = 1;
    l.gamma = s.Gamma;
    l.sd = SpectralDensity::wideband(s.Gamma);
    l.beta = s.beta;
    l.mu = s.mu_L;
    BathSpec r = l;
    r.site = 2;
    r.mu = s.mu_R;
    return {l, r};
}

Mat covariance_from_state(const Mat& rho, const HamiltonianSpec& H)
{
    const int L = H.L;
    std::vector<SpMat> c;
    for (int i = 1; i <= L; ++i) c.push_back(site_operator(SiteOp::Annihilate, i, H));
    Mat C(L, L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) C(i, j) = (rho * Mat(SpMat(c[size_t(j)].adjoint() * c[size_t(i)]))).trace();
    return C;
}

ValidityPoint validity_point(const DoubleDotSpec& s)
{
    auto H = double_dot_model(s);
    auto baths = double_dot_baths(s);
    ValidityPoint p{};
    p.hc = s.hc;
    p.Gamma = s.Gamma;
    auto fL = [&](double w) { return fermi(s.beta * (w - s.mu_L)); };
    auto fR = [&](double w) { return fermi(s.beta * (w - s.mu_R)); };
    const Mat h = *H.hopping;
    WidebandLead left{1, s.Gamma, fL}, right{2, s.Gamma, fR};
    Mat Cex = wideband_steady(h, {left, right});
    Mat rho_ex = single_particle_density(Cex);
    auto T = [&](double w) { return wideband_transmission(h, left, right, w); };
    std::vector<double> pts{s.eps - s.hc, s.eps + s.hc, s.mu_L, s.mu_R};
    p.I_EX = landauer_current(T, fL, fR, pts, 1e-11);
    auto solve = [&](const GeneratorBundle& g, double& D, double& I) {
        auto ss = steady_state(g);
        p.residual = std::max(p.residual, ss.residual);
        Mat C = covariance_from_state(ss.rho, H);
        D = trace_distance(rho_ex, single_particle_density(C));
        I = dissipative_current(ss.rho, g, 0, total_number(H)).value;
    };
    solve(build_lme(H, baths), p.D_LME, p.I_LME);
    GmeOptions go;
    go.lamb_shift = false;
    solve(build_gme(H, baths, go), p.D_GME, p.I_GME);
    RedfieldOptions ro;
    ro.principal_value = false;
    solve(build_redfield(H, baths, ro), p.D_RED, p.I_RED);
    return p;
}

std::vector<double> dot_occupation_exact(const RelaxationSpec& s, int N, const std::vector<double>& times)
{
    ExactSetup setup;
    setup.h = Mat::Constant(1, 1, s.eps);
    LeadSpec lead;
    lead.eps = s.eps;
    lead.tau = s.tau;
    lead.tau_a = s.tau_a;
    lead.N = N;
    lead.beta = s.beta;
    lead.mu = s.mu;
    lead.site = 1;
    setup.leads = {lead};
    setup.C0 = Mat::Constant(1, 1, s.n0);
    auto tr = exact_evolution(setup, times);
    std::vector<double> out;
    for (const auto& C : tr.system) out.push_back(C(0, 0).real());
    return out;
}

std::vector<double> dot_occupation_lme(const RelaxationSpec& s, const std::vector<double>& times)
{
    HamiltonianSpec H;
    H.family = Family::TightBinding;
    H.L = 1;
    H.hopping = Mat::Constant(1, 1, s.eps);
    BathSpec b;
    b.statistics = BathStatistics::Fermion;
    b.site = 1;
    b.gamma = 2.0 * s.tau_a * s.tau_a / s.tau;
    b.beta = s.beta;
    b.mu = s.mu;
    auto g = build_lme(H, {b});
    Mat rho0 = Mat::Zero(2, 2);
    rho0(0, 0) = 1.0 - s.n0;
    rho0(1, 1) = s.n0;
    auto states = evolve(liouvillian(g), rho0, times);
    const SpMat n = site_operator(SiteOp::Number, 1, H);
    std::vector<double> out;
    for (const auto& r : states) out.push_back(expect(r, n));
    return out;
}

} // namespace ness
