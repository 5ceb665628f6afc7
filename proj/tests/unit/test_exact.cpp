// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ness/baths.hpp"
#include "ness/benchmarks.hpp"
#include "ness/exact.hpp"

using namespace ness;

TEST_CASE("lead modes")
{
    LeadSpec l;
    l.eps = 0.3;
    l.tau = 0.8;
    l.tau_a = 0.2;
    l.N = 40;
    auto m = lead_modes(l);
    CHECK(m.energies.minCoeff() > l.eps - 2.0 * l.tau);
    CHECK(m.energies.maxCoeff() < l.eps + 2.0 * l.tau);
    CHECK(m.couplings.squaredNorm() == doctest::Approx(l.tau_a * l.tau_a).epsilon(1e-12));
    // The star modes diagonalize the open chain.
    Mat chain = Mat::Zero(l.N, l.N);
    for (int i = 0; i < l.N; ++i) chain(i, i) = l.eps;
    for (int i = 0; i + 1 < l.N; ++i) chain(i, i + 1) = chain(i + 1, i) = -l.tau;
    Eigen::SelfAdjointEigenSolver<Mat> es(chain);
    RVec e = m.energies;
    std::sort(e.data(), e.data() + e.size());
    CHECK((es.eigenvalues() - e).cwiseAbs().maxCoeff() < 1e-12);
    l.N = 0;
    CHECK_THROWS_AS(lead_modes(l), ValidationError);
}

TEST_CASE("decoupled dot keeps its occupation")
{
    RelaxationSpec s;
    s.tau_a = 0.0;
    s.n0 = 0.3;
    auto n = dot_occupation_exact(s, 50, {0.0, 3.0, 40.0});
    for (double v : n) CHECK(v == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("relaxation toward half filling and particle conservation")
{
    RelaxationSpec s;
    std::vector<double> times;
    for (int k = 0; k <= 40; ++k) times.push_back(5.0 * k);
    auto n = dot_occupation_exact(s, 400, times);
    CHECK(n.front() == doctest::Approx(0.0));
    CHECK(std::abs(n.back() - 0.5) < 0.01);

    ExactSetup setup;
    setup.h = Mat::Constant(1, 1, s.eps);
    setup.C0 = Mat::Zero(1, 1);
    LeadSpec lead;
    lead.N = 60;
    lead.mu = 0.3;
    setup.leads = {lead};
    auto tr = exact_evolution(setup, {0.0, 1.0, 10.0, 100.0});
    for (double t : tr.total_n) CHECK(std::abs(t - tr.total_n[0]) < 1e-10);
    for (const auto& C : tr.system) {
        double v = C(0, 0).real();
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("weak-coupling relaxation follows the local master equation")
{
    RelaxationSpec s;
    std::vector<double> times;
    for (int k = 0; k <= 60; ++k) times.push_back(1.0 * k);
    auto ex = dot_occupation_exact(s, 400, times);
    auto lme = dot_occupation_lme(s, times);
    for (size_t k = 0; k < times.size(); ++k)
        if (times[k] > 5.0) CHECK(std::abs(ex[k] - lme[k]) < 0.01);
}

TEST_CASE("self-energy")
{
    LeadSpec l;
    l.eps = 0.7;
    l.tau = 1.1;
    l.tau_a = 0.3;
    cplx z(5e3, 2e3);
    cplx s = self_energy(l, z);
    CHECK(std::abs(s * (z + I1 * l.eps) / (l.tau_a * l.tau_a) - 1.0) < 1e-5);
    cplx c = self_energy(l, cplx(1e-12, -l.eps));
    CHECK(std::abs(c - cplx(l.tau_a * l.tau_a / l.tau)) < 1e-9);
    l.tau_a = 0.0;
    CHECK(std::abs(self_energy(l, cplx(0.3, 0.2))) == 0.0);
    l.tau_a = 0.3;
    CHECK_THROWS_AS(self_energy(l, cplx(0.0, -l.eps)), ValidationError);
    // Finite leads approach the closed form away from the real frequency axis.
    l.N = 4000;
    cplx z2(0.4, 0.1);
    CHECK(std::abs(self_energy_modes(l, z2) - self_energy(l, z2)) < 1e-6);
}

TEST_CASE("wideband stationary covariance")
{
    Mat h(2, 2);
    h << 1.0, 0.2, 0.2, 1.0;
    auto fermi_at = [](double beta, double mu) { return [=](double w) { return fermi(beta * (w - mu)); }; };
    std::vector<WidebandLead> eq = {{1, 0.1, fermi_at(1.0, 0.4)}, {2, 0.2, fermi_at(1.0, 0.4)}};
    Mat C = wideband_steady(h, eq);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Mat want = es.eigenvectors() *
               es.eigenvalues().unaryExpr([](double e) { return fermi(e - 0.4); }).cast<cplx>().asDiagonal() *
               es.eigenvectors().adjoint();
    // Broadened levels: equilibrium only up to O(Gamma) smearing.
    CHECK(max_abs(C - want) < 0.02);
    CHECK(std::abs(C(0, 1).imag()) < 1e-9);

    Mat h0 = Mat::Zero(2, 2);
    std::vector<WidebandLead> ph = {{1, 0.3, fermi_at(1.0, 1.0)}, {2, 0.3, fermi_at(1.0, -1.0)}};
    Mat C0 = wideband_steady(h0, ph);
    CHECK(C0(0, 0).real() + C0(1, 1).real() == doctest::Approx(1.0).epsilon(1e-8));
    Eigen::SelfAdjointEigenSolver<Mat> ce(C0);
    CHECK(ce.eigenvalues().minCoeff() > -1e-10);
    CHECK(ce.eigenvalues().maxCoeff() < 1.0 + 1e-10);
    CHECK(max_abs(C0 - C0.adjoint()) == 0.0);
    CHECK_THROWS_AS(wideband_steady(h0, {}), ValidationError);
}

TEST_CASE("Landauer current")
{
    const double G = 0.3, eps = 0.2;
    auto T = [&](double w) { return G * G / ((w - eps) * (w - eps) + G * G); };
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    CHECK(landauer_current(T, one, zero, {eps - 1.0, eps, eps + 1.0}) == doctest::Approx(G / 2.0).epsilon(1e-8));
    auto f = [](double w) { return fermi(w); };
    CHECK(std::abs(landauer_current(T, f, f)) < 1e-15);
    auto bad = [](double) { return 1.5; };
    CHECK_THROWS_AS(landauer_current(bad, one, zero), ValidationError);
}

TEST_CASE("wideband transmission equals the stationary current")
{
    for (double hc : {0.01, 0.05, 0.09}) {
        for (double G : {0.01, 0.05}) {
            DoubleDotSpec s;
            s.hc = hc;
            s.Gamma = G;
            auto p = validity_point(s);
            Mat h(2, 2);
            h << s.eps, s.hc, s.hc, s.eps;
            WidebandLead L{1, G, [&](double w) { return fermi(s.beta * (w - s.mu_L)); }};
            WidebandLead R{2, G, [&](double w) { return fermi(s.beta * (w - s.mu_R)); }};
            Mat C = wideband_steady(h, {L, R});
            double bond = -2.0 * (h(0, 1) * C(1, 0)).imag();
            CHECK(std::abs(bond - p.I_EX) < 1e-8);
        }
    }
}
