// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ness/analytic.hpp"
#include "ness/benchmarks.hpp"
#include "ness/gaussian.hpp"
#include "ness/generators.hpp"
#include "ness/liouville.hpp"

using namespace ness;

namespace {

Mat uniform_chain(int L, double J)
{
    HamiltonianSpec s;
    s.family = Family::TightBinding;
    s.L = L;
    s.J = J;
    return single_particle_matrix(s);
}

std::vector<BathSpec> boundary(int L, double gamma, double n1, double nL)
{
    BathSpec a, b;
    a.site = 1;
    a.gamma = gamma;
    a.target = n1;
    b = a;
    b.site = L;
    b.target = nL;
    return {a, b};
}

} // namespace

TEST_CASE("Lyapunov system assembly")
{
    auto sys = build_lyapunov(uniform_chain(5, 1.0), boundary(5, 0.6, 0.7, 0.2));
    RVec d = sys.D.diagonal().real();
    CHECK(d(0) == doctest::Approx(0.42));
    CHECK(d(4) == doctest::Approx(0.12));
    CHECK(d.segment(1, 3).isZero());
    CHECK(max_abs(Mat(sys.D.imag().cast<cplx>())) == 0.0);

    Mat h = uniform_chain(3, 0.5);
    auto bare = build_lyapunov(h, {});
    CHECK(max_abs(bare.W - I1 * h) == 0.0);
    CHECK(bare.D.isZero());
    CHECK_THROWS_AS(solve_steady(bare), SolverError);

    Mat h2 = uniform_chain(2, 1.0);
    std::vector<BathSpec> one = {boundary(2, 0.8, 0.3, 0.3)[0]};
    auto f = build_lyapunov(h2, one, Statistics::Fermion);
    auto b = build_lyapunov(h2, one, Statistics::Boson);
    // Damping (gamma^- +- gamma^+)/2: fermions gamma/2, bosons gamma/2 as well but via the opposite sign of gamma^+.
    CHECK(f.W(0, 0).real() == doctest::Approx(0.5 * (0.8 * 0.7 + 0.8 * 0.3)));
    CHECK(b.W(0, 0).real() == doctest::Approx(0.5 * (0.8 * 1.3 - 0.8 * 0.3)));
    Mat nonherm = h2;
    nonherm(0, 1) = 3.0;
    CHECK_THROWS_AS(build_lyapunov(nonherm, one), ValidationError);
}

TEST_CASE("Toeplitz steady state of the uniform chain")
{
    double gamma = 0.7, J = 1.3, n1 = 0.9, nL = 0.2;
    int L = 7;
    Mat h = uniform_chain(L, J);
    auto ss = solve_steady(build_lyapunov(h, boundary(L, gamma, n1, nL)));
    CHECK(ss.residual < 1e-10);
    double x = gamma * J * (nL - n1) / (gamma * gamma + 4.0 * J * J);
    for (int j = 0; j + 1 < L; ++j) {
        CHECK(std::abs(std::abs(ss.C(j + 1, j)) - std::abs(x)) < 1e-12);
        CHECK(std::abs(ss.C(j + 1, j).real()) < 1e-12);
        CHECK(std::abs(ss.C(j + 1, j) - ss.C(1, 0)) < 1e-12);
        CHECK(covariance_current(ss.C, h, j + 1) == doctest::Approx(2.0 * J * std::abs(x)).epsilon(1e-12));
    }
    for (int j = 1; j + 1 < L; ++j) CHECK(ss.C(j, j).real() == doctest::Approx(0.5 * (n1 + nL)).epsilon(1e-12));
    CHECK(covariance_current(ss.C, h, 1) == doctest::Approx(xx_dephasing_current(gamma, 0.0, J, L, n1, nL)).epsilon(1e-12));

    auto eq = solve_steady(build_lyapunov(h, boundary(L, gamma, 0.35, 0.35)));
    CHECK(max_abs(eq.C - 0.35 * Mat::Identity(L, L)) < 1e-12);
    CHECK(std::abs(covariance_current(eq.C, h, 3)) < 1e-14);
}

TEST_CASE("dephasing steady state")
{
    Mat h2 = uniform_chain(2, 1.0);
    auto d2 = solve_steady(with_dephasing(build_lyapunov(h2, boundary(2, 1.0, 1.0, 0.0)), 1.0));
    CHECK(covariance_current(d2.C, h2, 1) == doctest::Approx(2.0 / 7.0).epsilon(1e-12));

    Mat h = uniform_chain(12, 0.8);
    auto sys = build_lyapunov(h, boundary(12, 0.5, 0.6, 0.1));
    auto a = solve_steady(sys);
    auto b = solve_steady_dephasing(with_dephasing(sys, 0.0));
    CHECK(max_abs(a.C - b.C) < 1e-12);

    const int L = 50;
    Mat h50 = uniform_chain(L, 1.0);
    auto d = solve_steady(with_dephasing(build_lyapunov(h50, boundary(L, 1.0, 0.8, 0.2)), 0.5));
    CHECK(d.residual < 1e-10);
    // Bulk occupations fall on a straight line.
    double slope = (d.C(L - 2, L - 2) - d.C(1, 1)).real() / (L - 3);
    double worst = 0.0;
    for (int i = 1; i < L - 1; ++i) worst = std::max(worst, std::abs(d.C(i, i).real() - d.C(1, 1).real() - slope * (i - 1)));
    CHECK(worst < 1e-8);
    double j0 = covariance_current(d.C, h50, 1);
    for (int i = 1; i < L; ++i) CHECK(std::abs(covariance_current(d.C, h50, i) - j0) < 1e-10);
    CHECK(j0 == doctest::Approx(xx_dephasing_current(1.0, 0.5, 1.0, L, 0.8, 0.2)).epsilon(1e-9));
    // Particle balance at the first site: bath inflow equals the bond current.
    double inflow = 1.0 * (0.8 - d.C(0, 0).real());
    CHECK(inflow == doctest::Approx(j0).epsilon(1e-9));
}

TEST_CASE("dephasing leaves the diagonal untouched")
{
    auto sys = with_dephasing(build_lyapunov(Mat::Zero(3, 3), {}), 0.4);
    Mat C0(3, 3);
    C0 << 0.2, 0.1 + 0.3 * I1, 0.05, 0.1 - 0.3 * I1, 0.5, -0.2 * I1, 0.05, 0.2 * I1, 0.7;
    auto out = evolve_covariance(sys, C0, {1.5});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx want = i == j ? C0(i, j) : C0(i, j) * std::exp(-0.8 * 1.5);
            CHECK(std::abs(out[0].C(i, j) - want) < 1e-10);
        }
}

TEST_CASE("covariance evolution")
{
    Mat h = uniform_chain(4, 1.0);
    auto sys = build_lyapunov(h, boundary(4, 0.8, 0.9, 0.1));
    Mat C0 = Mat::Zero(4, 4);
    C0(1, 1) = 1.0;
    auto out = evolve_covariance(sys, C0, {0.0, 2.0, 300.0});
    CHECK(max_abs(out[0].C - C0) < 1e-14);
    CHECK(max_abs(out[1].C - out[1].C.adjoint()) < 1e-14);
    CHECK(max_abs(out[2].C - solve_steady(sys).C) < 1e-8);

    auto dsys = with_dephasing(sys, 0.3);
    auto dout = evolve_covariance(dsys, C0, {0.0, 400.0});
    CHECK(max_abs(dout[0].C - C0) < 1e-14);
    CHECK(max_abs(dout[1].C - solve_steady(dsys).C) < 1e-8);

    Mat h1 = Mat::Zero(1, 1);
    BathSpec b;
    b.gamma = 0.6;
    b.target = 0.3;
    auto single = build_lyapunov(h1, {b});
    Mat c1 = Mat::Constant(1, 1, 0.9);
    auto s = evolve_covariance(single, c1, {0.0, 0.5, 1.7});
    for (double t : {0.0, 0.5, 1.7}) {
        size_t k = t == 0.0 ? 0 : (t == 0.5 ? 1 : 2);
        CHECK(s[k].C(0, 0).real() == doctest::Approx(0.3 + 0.6 * std::exp(-0.6 * t)).epsilon(1e-12));
    }
}

TEST_CASE("Lyapunov solver against a direct residual")
{
    Mat h = uniform_chain(6, 0.9);
    h(2, 2) = 0.4;
    auto sys = build_lyapunov(h, boundary(6, 0.5, 0.7, 0.3));
    Mat X = solve_lyapunov(sys.W, sys.D);
    CHECK(max_abs(sys.W * X + X * sys.W.adjoint() - sys.D) < 1e-12);
    CHECK(stability_margin(sys.W) > 0.0);
}

TEST_CASE("many-body covariance with dephasing")
{
    HamiltonianSpec H;
    H.family = Family::TightBinding;
    H.L = 4;
    H.J = 1.0;
    auto baths = boundary(4, 0.9, 0.8, 0.1);
    auto g = add_dephasing(build_lme(H, baths), 0.6);
    Mat C = covariance_from_state(steady_state(g).rho, H);
    auto cov = solve_steady(with_dephasing(build_lyapunov(single_particle_matrix(H), baths), 0.3));
    CHECK(max_abs(C - cov.C) < 1e-8);
}

TEST_CASE("dephasing solve with long-range correlations")
{
    // Disorder and a long-range hop make the steady covariance dense.
    const int L = 10;
    HamiltonianSpec s;
    s.family = Family::TightBinding;
    s.L = L;
    s.potential.kind = PotentialSpec::Kind::Disorder;
    s.potential.h = 1.5;
    s.potential.seed = 9;
    Mat h = single_particle_matrix(s);
    Mat far = h;
    far(0, 6) = far(6, 0) = 0.3;
    for (const Mat& hm : {h, far}) {
        auto sys = with_dephasing(build_lyapunov(hm, boundary(L, 0.7, 0.9, 0.2)), 0.4);
        sys.dephasing(3) = 1.1;
        auto st = solve_steady(sys);
        // Dense vectorized reference on all L^2 entries.
        Mat A = Mat::Zero(L * L, L * L);
        for (int k = 0; k < L * L; ++k) {
            Mat E = Mat::Zero(L, L);
            E(k % L, k / L) = 1.0;
            Mat img = -(sys.W * E + E * sys.W.adjoint());
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j)
                    if (i != j) img(i, j) -= (sys.dephasing(i) + sys.dephasing(j)) * E(i, j);
            A.col(k) = img.reshaped();
        }
        Vec x = A.partialPivLu().solve(Vec(-sys.D.reshaped()));
        Mat ref = x.reshaped(L, L);
        CHECK(max_abs(st.C - ref) < 1e-12);
        CHECK(st.residual < 1e-12);
        CHECK(std::abs(st.C(0, L - 1)) > 1e-6);
    }
}
