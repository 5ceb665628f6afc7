// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ness/model.hpp"

using namespace ness;

namespace {

RVec eigenvalues(const SpMat& H)
{
    Eigen::SelfAdjointEigenSolver<Mat> es{Mat(H)};
    return es.eigenvalues();
}

HamiltonianSpec xxz(int L, double J, double Delta, double h = 0.0)
{
    HamiltonianSpec s;
    s.family = Family::XXZ;
    s.L = L;
    s.J = J;
    s.Delta = Delta;
    s.potential.h = h;
    return s;
}

} // namespace

TEST_CASE("two-site XX spectrum")
{
    RVec e = eigenvalues(build_hamiltonian(xxz(2, 1.0, 0.0)));
    REQUIRE(e.size() == 4);
    CHECK(e(0) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(std::abs(e(1)) < 1e-12);
    CHECK(std::abs(e(2)) < 1e-12);
    CHECK(e(3) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("single site is a pure field")
{
    for (double J : {0.3, 1.0}) {
        for (double D : {0.0, 2.0}) {
            Mat H = Mat(build_hamiltonian(xxz(1, J, D, 0.7)));
            REQUIRE(H.rows() == 2);
            CHECK(std::abs(H(0, 0) - cplx(-0.7)) < 1e-14);
            CHECK(std::abs(H(1, 1) - cplx(0.7)) < 1e-14);
            CHECK(std::abs(H(0, 1)) < 1e-14);
        }
    }
}

TEST_CASE("open tight-binding dispersion")
{
    HamiltonianSpec s;
    s.family = Family::TightBinding;
    s.L = 3;
    s.J = 0.8;
    Mat h = single_particle_matrix(s);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    std::vector<double> want;
    for (int k = 1; k <= 3; ++k) want.push_back(2.0 * s.J * std::cos(kPi * k / 4.0));
    std::sort(want.begin(), want.end());
    for (int k = 0; k < 3; ++k) CHECK(es.eigenvalues()(k) == doctest::Approx(want[k]).epsilon(1e-12));
}

TEST_CASE("builders are Hermitian with the right dimension")
{
    std::vector<HamiltonianSpec> specs;
    specs.push_back(xxz(4, 1.0, 0.5, 0.2));
    HamiltonianSpec xyz = xxz(3, 1.0, 0.0);
    xyz.family = Family::XYZ;
    xyz.Jx = 1.0;
    xyz.Jy = 0.4;
    xyz.Jz = 0.7;
    specs.push_back(xyz);
    HamiltonianSpec tb;
    tb.family = Family::TightBinding;
    tb.L = 4;
    tb.potential.kind = PotentialSpec::Kind::Disorder;
    tb.potential.h = 1.0;
    tb.potential.seed = 5;
    specs.push_back(tb);
    HamiltonianSpec bos = tb;
    bos.statistics = Statistics::Boson;
    bos.L = 3;
    bos.boson_cutoff = 3;
    specs.push_back(bos);
    for (const auto& s : specs) {
        SpMat H = build_hamiltonian(s);
        CHECK(H.rows() == hilbert_dim(s));
        CHECK(max_abs(Mat(H) - Mat(H).adjoint()) < 1e-12);
    }
    CHECK(hilbert_dim(bos) == 64);
}

TEST_CASE("dimension cap and hopping validation")
{
    HamiltonianSpec s = xxz(20, 1.0, 0.0);
    CHECK_THROWS_AS(build_hamiltonian(s), ValidationError);
    HamiltonianSpec tb;
    tb.family = Family::TightBinding;
    tb.L = 2;
    Mat h(2, 2);
    h << 0.0, 1.0, 0.5, 0.0;
    tb.hopping = h;
    CHECK_THROWS_AS(build_hamiltonian(tb), ValidationError);
}

TEST_CASE("fermionic algebra")
{
    for (int L = 2; L <= 4; ++L) {
        HamiltonianSpec s = xxz(L, 1.0, 0.0);
        s.family = Family::TightBinding;
        Mat Id = Mat::Identity(hilbert_dim(s), hilbert_dim(s));
        for (int i = 1; i <= L; ++i) {
            Mat ci = Mat(site_operator(SiteOp::Annihilate, i, s));
            Mat z = Mat(site_operator(SiteOp::Z, i, s));
            CHECK(max_abs(ci.adjoint() * ci - 0.5 * (Id + z)) < 1e-14);
            for (int j = 1; j <= L; ++j) {
                Mat cj = Mat(site_operator(SiteOp::Annihilate, j, s));
                Mat anti = ci * cj.adjoint() + cj.adjoint() * ci;
                CHECK(max_abs(anti - (i == j ? Id : Mat::Zero(Id.rows(), Id.cols()))) < 1e-14);
                CHECK(max_abs(ci * cj + cj * ci) < 1e-14);
            }
        }
    }
    HamiltonianSpec s3 = xxz(3, 1.0, 0.0);
    Mat pm = Mat(site_operator(SiteOp::Plus, 2, s3) * site_operator(SiteOp::Minus, 2, s3));
    CHECK(max_abs(pm - Mat(site_operator(SiteOp::Number, 2, s3))) < 1e-14);
    CHECK_THROWS_AS(site_operator(SiteOp::X, 4, s3), ValidationError);
    CHECK_THROWS_AS(site_operator(SiteOp::X, 0, s3), ValidationError);
}

TEST_CASE("potentials")
{
    PotentialSpec aah;
    aah.kind = PotentialSpec::Kind::AAH;
    aah.lambda = 1.0;
    CHECK(potential_values(aah, 3)(0) == doctest::Approx(2.0 * std::cos(2.0 * kPi * kGolden)).epsilon(1e-14));
    CHECK(potential_values(aah, 1)(0) == doctest::Approx(-1.4747).epsilon(1e-4));
    aah.alphaQ = 1.0;
    CHECK_THROWS_AS(potential_values(aah, 3), ValidationError);

    PotentialSpec fib;
    fib.kind = PotentialSpec::Kind::Fibonacci;
    fib.h = 1.0;
    RVec v = potential_values(fib, 55);
    for (int l = 0; l < 55; ++l) CHECK(std::abs(std::abs(v(l)) - 0.5) < 1e-15);
    // Golden-mean Sturmian word: no two consecutive "0" letters, "1" frequency 1/g.
    int ones = 0;
    for (int l = 0; l < 55; ++l) {
        if (v(l) > 0) ++ones;
        if (l > 0) CHECK(!(v(l) < 0 && v(l - 1) < 0));
    }
    CHECK(double(ones) / 55.0 == doctest::Approx(1.0 / kGolden).epsilon(0.05));

    PotentialSpec dis;
    dis.kind = PotentialSpec::Kind::Disorder;
    dis.h = 0.8;
    dis.seed = 11;
    RVec d1 = potential_values(dis, 200), d2 = potential_values(dis, 200);
    CHECK(d1 == d2);
    CHECK(d1.cwiseAbs().maxCoeff() <= 0.8);

    PotentialSpec zero;
    CHECK(potential_values(zero, 6).isZero());
}

TEST_CASE("XX spectrum equals the free-fermion many-body spectrum")
{
    for (int L = 2; L <= 6; ++L) {
        HamiltonianSpec s = xxz(L, 0.9, 0.0);
        s.potential.kind = PotentialSpec::Kind::Disorder;
        s.potential.h = 0.6;
        s.potential.seed = std::uint64_t(L);
        RVec many = eigenvalues(build_hamiltonian(s));
        Eigen::SelfAdjointEigenSolver<Mat> sp(single_particle_matrix(s));
        RVec e = sp.eigenvalues();
        std::vector<double> sums;
        for (int m = 0; m < (1 << L); ++m) {
            double E = -0.5 * e.sum();
            for (int k = 0; k < L; ++k)
                if (m >> k & 1) E += e(k);
            sums.push_back(E);
        }
        std::sort(sums.begin(), sums.end());
        double err = 0.0;
        for (int m = 0; m < (1 << L); ++m) err = std::max(err, std::abs(sums[m] - many(m)));
        CHECK(err < 1e-10);
    }
}

TEST_CASE("magnetization conservation")
{
    HamiltonianSpec s = xxz(4, 1.0, 0.7, 0.3);
    Mat H = Mat(build_hamiltonian(s));
    Mat N = Mat(total_number(s));
    CHECK(max_abs(H * N - N * H) < 1e-12);
    s.family = Family::XYZ;
    s.Jx = 1.0;
    s.Jy = 0.5;
    s.Jz = 0.2;
    H = Mat(build_hamiltonian(s));
    CHECK(max_abs(H * N - N * H) > 1e-3);
}

TEST_CASE("nearest-neighbour structure")
{
    HamiltonianSpec s = xxz(4, 1.0, 0.4, 0.1);
    SpMat H = build_hamiltonian(s);
    SpMat sum = onsite_hamiltonian(s, 1);
    for (int k = 2; k <= 4; ++k) sum += onsite_hamiltonian(s, k);
    for (int k = 1; k < 4; ++k) sum += bond_hamiltonian(s, k);
    CHECK(max_abs(Mat(H - sum)) < 1e-14);
    CHECK_THROWS_AS(bond_hamiltonian(s, 4), ValidationError);
}
