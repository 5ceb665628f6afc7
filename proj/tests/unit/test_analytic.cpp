// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ness/analytic.hpp"
#include "ness/gaussian.hpp"
#include "ness/generators.hpp"
#include "ness/liouville.hpp"

using namespace ness;

namespace {

GeneratorBundle driven_chain(int L, double J, double Delta, double gamma, double eta1, double etaL)
{
    HamiltonianSpec H;
    H.family = Family::XXZ;
    H.L = L;
    H.J = J;
    H.Delta = Delta;
    BathSpec a;
    a.statistics = BathStatistics::Magnetization;
    a.site = 1;
    a.gamma = gamma;
    a.target = eta1;
    BathSpec b = a;
    b.site = L;
    b.target = etaL;
    return build_lme(H, {a, b});
}

double magnetization_current(const GeneratorBundle& g, const Mat& rho, int k)
{
    const auto& H = *g.model;
    return bond_current(rho, bond_hamiltonian(H, k), site_operator(SiteOp::Z, k, H), site_operator(SiteOp::Z, k + 1, H));
}

} // namespace

TEST_CASE("XX closed form")
{
    CHECK(xx_current(1.0, 1.0, 1.0, 0.0) == doctest::Approx(16.0 / 17.0).epsilon(1e-15));
    CHECK(xx_current(0.7, 1.2, 0.4, 0.4) == 0.0);
    auto p = xx_profile(0.7, 1.2, 0.4, 0.4, 5);
    for (int i = 0; i < 5; ++i) CHECK(p.sites(i) == doctest::Approx(-0.2));
    CHECK_THROWS_AS(xx_current(0.0, 1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("XX closed form matches the Liouvillian for L = 2..6")
{
    for (int L = 2; L <= 6; ++L) {
        double gamma = 0.8, J = 1.1, f1 = 0.9, fL = 0.25;
        auto g = driven_chain(L, J, 0.0, gamma, 2.0 * f1 - 1.0, 2.0 * fL - 1.0);
        auto ss = steady_state(g);
        CHECK(std::abs(magnetization_current(g, ss.rho, 1) - xx_current(gamma, J, f1, fL)) < 1e-9);
        auto p = xx_profile(gamma, J, f1, fL, L);
        for (int i = 1; i <= L; ++i)
            CHECK(std::abs(expect(ss.rho, site_operator(SiteOp::Z, i, *g.model)) - p.sites(i - 1)) < 1e-9);
    }
}

TEST_CASE("dephasing closed form")
{
    CHECK(xx_dephasing_current(1.0, 1.0, 1.0, 2, 1.0, 0.0) == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
    CHECK(xx_dephasing_current(0.5, 0.0, 1.0, 30, 1.0, 0.0) == doctest::Approx(1.0 / (4.0 + 0.25)).epsilon(1e-15));
    HamiltonianSpec s;
    s.family = Family::TightBinding;
    s.J = 0.9;
    for (int L : {2, 3, 10, 57, 200}) {
        s.L = L;
        BathSpec a, b;
        a.site = 1;
        a.gamma = 0.6;
        a.target = 0.75;
        b = a;
        b.site = L;
        b.target = 0.15;
        Mat h = single_particle_matrix(s);
        auto ss = solve_steady(with_dephasing(build_lyapunov(h, {a, b}), 0.4));
        double want = xx_dephasing_current(0.6, 0.4, 0.9, L, 0.75, 0.15);
        CHECK(std::abs(covariance_current(ss.C, h, 1) - want) < 1e-9);
    }
}

TEST_CASE("Heisenberg formula matches the Liouvillian")
{
    for (double J : {1.0, 1.7}) {
        for (double gamma : {0.5, 1.0, 2.0}) {
            for (int L : {2, 4}) {
                auto g = driven_chain(L, J, 1.0, gamma, 1.0, -1.0);
                auto ss = steady_state(g);
                CHECK(std::abs(magnetization_current(g, ss.rho, 1) - heisenberg_mps_current(gamma, L, J)) < 1e-8);
            }
        }
    }
}

TEST_CASE("Heisenberg scaling regimes")
{
    double a = heisenberg_mps_formula(10.0, 64) * 64.0 * 64.0;
    double b = heisenberg_mps_formula(10.0, 512) * 512.0 * 512.0;
    CHECK(b / a == doctest::Approx(1.0).epsilon(0.1));
    double s8 = heisenberg_mps_current(0.1, 8, 1.0), s64 = heisenberg_mps_current(0.1, 64, 1.0);
    CHECK(s64 / s8 > 0.85);
    CHECK(std::isfinite(heisenberg_mps_formula(10.0, 2000)));
    CHECK_THROWS_AS(heisenberg_mps_formula(1.0, 1), ValidationError);
}
