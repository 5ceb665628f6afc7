// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "ness/baths.hpp"

using namespace ness;

TEST_CASE("occupation functions")
{
    BathSpec b;
    b.beta = 2.0;
    b.mu = 0.3;
    CHECK(occupation(b, 0.3) == doctest::Approx(0.5).epsilon(1e-15));
    b.beta = 1.0;
    b.mu = 0.0;
    CHECK(occupation(b, std::log(3.0)) == doctest::Approx(0.25).epsilon(1e-14));
    BathSpec bos;
    bos.statistics = BathStatistics::Boson;
    bos.beta = 1.0;
    CHECK(occupation(bos, 800.0) < 1e-300);
    CHECK(occupation(bos, 1.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(occupation(bos, -0.5), ValidationError);
    CHECK_THROWS_AS(occupation(bos, 0.0), ValidationError);
    BathSpec m;
    m.statistics = BathStatistics::Magnetization;
    m.target = -0.4;
    CHECK(occupation(m, 7.0) == doctest::Approx(0.3).epsilon(1e-15));
    m.target = 1.5;
    CHECK_THROWS_AS(occupation(m, 0.0), ValidationError);
}

TEST_CASE("spectral densities")
{
    auto se = SpectralDensity::semi_elliptic(1.0, 0.5, 0.2);
    CHECK(rate(se, 1.0) == doctest::Approx(2.0 * 0.04 / 0.5).epsilon(1e-15));
    CHECK(rate(se, 2.0) == 0.0);
    CHECK(rate(se, 0.0) == 0.0);
    CHECK(rate(se, 5.0) == 0.0);
    CHECK(rate(se, 1.99) > 0.0);
    auto sup = se.support();
    REQUIRE(sup.has_value());
    CHECK(sup->first == doctest::Approx(0.0));
    CHECK(sup->second == doctest::Approx(2.0));
    auto wb = SpectralDensity::wideband(0.3);
    for (double w : {-100.0, 0.0, 3.0}) CHECK(rate(wb, w) == 0.3);
    CHECK(!wb.support().has_value());
    auto tab = SpectralDensity::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 0.5});
    CHECK(rate(tab, 0.5) == doctest::Approx(0.5));
    CHECK(rate(tab, 1.5) == doctest::Approx(0.75));
    CHECK_THROWS_AS(rate(tab, 2.5), ValidationError);
    CHECK_THROWS_AS(SpectralDensity::tabulated({0.0, 1.0}, {1.0, -1.0}), ValidationError);
}

TEST_CASE("tabulated density from CSV")
{
    const char* path = "test_baths_sd.csv";
    {
        std::ofstream f(path);
        f << "omega,gamma\n0,0\n1,2\n2,0\n";
    }
    auto sd = SpectralDensity::from_csv(path);
    CHECK(rate(sd, 0.5) == doctest::Approx(1.0));
    std::remove(path);
}

TEST_CASE("semi-elliptic sum rule")
{
    auto se = SpectralDensity::semi_elliptic(0.4, 0.7, 0.3);
    double s = integrate([&](double w) { return rate(se, w); }, 0.4 - 1.4, 0.4 + 1.4, 1e-12);
    CHECK(s / (2.0 * kPi) == doctest::Approx(0.09).epsilon(1e-8));
}

TEST_CASE("golden-rule rates")
{
    auto wb = SpectralDensity::wideband(0.6);
    BathSpec b;
    b.beta = 3.0;
    b.mu = 0.2;
    auto r = golden_rule_rates(wb, b, 0.2);
    CHECK(r.absorb == doctest::Approx(0.3));
    CHECK(r.emit == doctest::Approx(0.3));
    b.beta = 1.0;
    b.mu = 0.0;
    r = golden_rule_rates(wb, b, 1.0);
    CHECK(r.emit / r.absorb == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    b.beta = 1e6;
    CHECK(golden_rule_rates(wb, b, 0.1).absorb < 1e-300);
}

TEST_CASE("detailed balance on 100 random tuples")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    auto wb = SpectralDensity::wideband(1.3);
    for (int k = 0; k < 100; ++k) {
        BathSpec b;
        b.beta = 0.1 + 2.0 * (U(rng) + 2.0) / 4.0;
        b.mu = U(rng);
        double w = U(rng);
        auto r = golden_rule_rates(wb, b, w);
        CHECK(std::abs(r.emit / r.absorb / std::exp(b.beta * (w - b.mu)) - 1.0) < 1e-12);
        BathSpec bos;
        bos.statistics = BathStatistics::Boson;
        bos.beta = b.beta;
        double wb2 = std::abs(w) + 0.05;
        for (double s : {1.0, -1.0}) {
            auto rb = golden_rule_rates(wb, bos, s * wb2);
            CHECK(std::abs(rb.emit / rb.absorb / std::exp(bos.beta * s * wb2) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("reaction coordinate")
{
    double a = 0.5, b = 2.0;
    auto box = SpectralDensity::tabulated({a, b}, {1.0, 1.0});
    auto rc = reaction_coordinate(box);
    double m1 = 0.5 * (b * b - a * a), mm1 = std::log(b / a);
    CHECK(rc.Omega1 * rc.Omega1 == doctest::Approx(m1 / mm1).epsilon(1e-8));
    CHECK(rc.lambda1 * rc.lambda1 == doctest::Approx(m1 / (2.0 * kPi * rc.Omega1)).epsilon(1e-8));

    auto narrow = reaction_coordinate(SpectralDensity::semi_elliptic(5.0, 0.01, 0.1));
    CHECK(narrow.Omega1 == doctest::Approx(5.0).epsilon(1e-4));

    auto one = reaction_coordinate(SpectralDensity::semi_elliptic(3.0, 0.5, 0.1));
    auto two = reaction_coordinate(SpectralDensity::semi_elliptic(3.0, 0.5, 0.1 * std::sqrt(2.0)));
    CHECK(two.Omega1 == doctest::Approx(one.Omega1).epsilon(1e-10));
    CHECK(two.lambda1 * two.lambda1 == doctest::Approx(2.0 * one.lambda1 * one.lambda1).epsilon(1e-10));

    CHECK_THROWS_AS(reaction_coordinate(SpectralDensity::semi_elliptic(0.0, 1.0, 0.1)), ValidationError);
    CHECK_THROWS_AS(reaction_coordinate(SpectralDensity::wideband(1.0)), ValidationError);
}

TEST_CASE("principal value of a constant box")
{
    auto box = SpectralDensity::tabulated({-1.0, 1.0}, {1.0, 1.0});
    double w = 0.3;
    double pv = principal_value(box, [](double) { return 1.0; }, w);
    CHECK(pv == doctest::Approx(std::log((w + 1.0) / (1.0 - w)) / (2.0 * kPi)).epsilon(1e-8));
}
