// SPDX-License-Identifier: Apache-2.0
#include "ness/model.hpp"

#include <cmath>
#include <random>

namespace ness {

namespace {

SpMat local_matrix(SiteOp kind, int d)
{
    Mat m = Mat::Zero(d, d);
    switch (kind) {
    case SiteOp::X:
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        break;
    case SiteOp::Y:
        m(0, 1) = I1;
        m(1, 0) = -I1;
        break;
    case SiteOp::Z:
        m(0, 0) = -1.0;
        m(1, 1) = 1.0;
        break;
    case SiteOp::Plus:
        m(1, 0) = 1.0;
        break;
    case SiteOp::Minus:
        m(0, 1) = 1.0;
        break;
    case SiteOp::Number:
        for (int n = 0; n < d; ++n) m(n, n) = n;
        break;
    case SiteOp::Annihilate:
        for (int n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(double(n));
        break;
    case SiteOp::Create:
        for (int n = 1; n < d; ++n) m(n, n - 1) = std::sqrt(double(n));
        break;
    }
    return to_sparse(m);
}

Eigen::Index ipow(Eigen::Index b, int e)
{
    Eigen::Index r = 1;
    for (int k = 0; k < e; ++k) r *= b;
    return r;
}

// Embed a local operator at site i (1-based); sites below i carry `below`.
SpMat embed(const SpMat& op, int i, int L, int d, const SpMat& below_site)
{
    SpMat below = identity(1);
    for (int k = 1; k < i; ++k) below = kron(below_site, below);
    SpMat out = kron(op, below);
    return kron(identity(ipow(d, L - i)), out);
}

SpMat embed(const SpMat& op, int i, int L, int d)
{
    return embed(op, i, L, d, identity(d));
}

void check_site(int i, const HamiltonianSpec& spec)
{
    require(i >= 1 && i <= spec.L,
            "site index " + std::to_string(i) + " out of range [1, " + std::to_string(spec.L) + "]");
}

} // namespace

bool is_bosonic(const HamiltonianSpec& spec)
{
    return spec.family == Family::TightBinding && spec.statistics == Statistics::Boson;
}

bool is_spin(const HamiltonianSpec& spec)
{
    return spec.family != Family::TightBinding;
}

int local_dim(const HamiltonianSpec& spec)
{
    return is_bosonic(spec) ? spec.boson_cutoff + 1 : 2;
}

Eigen::Index hilbert_dim(const HamiltonianSpec& spec)
{
    return ipow(local_dim(spec), spec.L);
}

RVec potential_values(const PotentialSpec& p, int L)
{
    require(L >= 1, "L must be >= 1");
    RVec v(L);
    switch (p.kind) {
    case PotentialSpec::Kind::Uniform:
        v.setConstant(p.h);
        break;
    case PotentialSpec::Kind::Disorder: {
        require(p.h >= 0.0, "disorder half-width must be >= 0");
        std::mt19937_64 rng(p.seed);
        std::uniform_real_distribution<double> u(-p.h, p.h);
        for (int l = 0; l < L; ++l) v(l) = p.h > 0.0 ? u(rng) : 0.0;
        break;
    }
    case PotentialSpec::Kind::AAH:
        require(std::abs(p.alphaQ) < 1.0, "AAH alphaQ must satisfy |alphaQ| < 1");
        for (int l = 1; l <= L; ++l) {
            double c = std::cos(2.0 * kPi * p.betaQ * l + p.phi);
            v(l - 1) = p.lambda * 2.0 * c / (1.0 - p.alphaQ * c);
        }
        break;
    case PotentialSpec::Kind::Fibonacci:
        for (int l = 1; l <= L; ++l) {
            double V = std::floor((l + 1) * kGolden) - std::floor(l * kGolden) - 1.0;
            v(l - 1) = 0.5 * p.h * (2.0 * V - 1.0);
        }
        break;
    }
    return v;
}

Mat single_particle_matrix(const HamiltonianSpec& spec)
{
    const int L = spec.L;
    RVec pot = potential_values(spec.potential, L);
    Mat h = Mat::Zero(L, L);
    if (spec.family == Family::TightBinding) {
        if (spec.hopping) {
            require(spec.hopping->rows() == L && spec.hopping->cols() == L,
                    "hopping matrix must be L x L");
            require(max_abs(*spec.hopping - spec.hopping->adjoint()) < 1e-12,
                    "hopping matrix is not Hermitian");
            h = *spec.hopping;
        } else {
            for (int i = 0; i + 1 < L; ++i) h(i, i + 1) = h(i + 1, i) = -spec.J;
        }
        for (int i = 0; i < L; ++i) h(i, i) += pot(i);
        return h;
    }
    bool xx = spec.family == Family::XXZ ? spec.Delta == 0.0
                                         : (spec.Jz == 0.0 && spec.Jx == spec.Jy);
    require(xx, "single-particle form exists only for XX spin chains");
    double J = spec.family == Family::XXZ ? spec.J : spec.Jx;
    for (int i = 0; i + 1 < L; ++i) h(i, i + 1) = h(i + 1, i) = -2.0 * J;
    for (int i = 0; i < L; ++i) h(i, i) = 2.0 * pot(i);
    return h;
}

SiteOp parse_site_op(const std::string& s)
{
    if (s == "x" || s == "sx") return SiteOp::X;
    if (s == "y" || s == "sy") return SiteOp::Y;
    if (s == "z" || s == "sz") return SiteOp::Z;
    if (s == "+" || s == "sp") return SiteOp::Plus;
    if (s == "-" || s == "sm") return SiteOp::Minus;
    if (s == "n" || s == "number") return SiteOp::Number;
    if (s == "c" || s == "a" || s == "annihilate") return SiteOp::Annihilate;
    if (s == "cdag" || s == "adag" || s == "create") return SiteOp::Create;
    throw ValidationError("unknown site operator '" + s + "'");
}

SpMat site_operator(SiteOp kind, int i, const HamiltonianSpec& spec)
{
    check_site(i, spec);
    const int d = local_dim(spec);
    require(hilbert_dim(spec) <= spec.max_dim, "Hilbert-space dimension exceeds max_dim");
    if (is_bosonic(spec)) {
        require(kind == SiteOp::Number || kind == SiteOp::Annihilate || kind == SiteOp::Create,
                "Pauli operators are undefined for bosonic sites");
        return embed(local_matrix(kind, d), i, spec.L, d);
    }
    if (kind == SiteOp::Annihilate || kind == SiteOp::Create) {
        SpMat string = local_matrix(SiteOp::Z, 2) * cplx(-1.0);
        SpMat loc = local_matrix(kind == SiteOp::Annihilate ? SiteOp::Minus : SiteOp::Plus, 2);
        return embed(loc, i, spec.L, 2, string);
    }
    if (kind == SiteOp::Number) return embed(local_matrix(SiteOp::Number, 2), i, spec.L, 2);
    return embed(local_matrix(kind, 2), i, spec.L, 2);
}

SpMat coupling_operator(const HamiltonianSpec& spec, int i)
{
    if (is_spin(spec)) return site_operator(SiteOp::Minus, i, spec);
    return site_operator(SiteOp::Annihilate, i, spec);
}

SpMat total_number(const HamiltonianSpec& spec)
{
    SpMat n(hilbert_dim(spec), hilbert_dim(spec));
    for (int i = 1; i <= spec.L; ++i) n += site_operator(SiteOp::Number, i, spec);
    return n;
}

SpMat bond_hamiltonian(const HamiltonianSpec& spec, int k)
{
    require(k >= 1 && k < spec.L, "bond index out of range");
    if (spec.family == Family::TightBinding) {
        Mat h = single_particle_matrix(spec);
        SpMat a = site_operator(SiteOp::Annihilate, k, spec);
        SpMat b = site_operator(SiteOp::Annihilate, k + 1, spec);
        SpMat ad = a.adjoint(), bd = b.adjoint();
        SpMat out = h(k - 1, k) * (ad * b) + h(k, k - 1) * (bd * a);
        return out;
    }
    double jx, jy, jz;
    if (spec.family == Family::XXZ) {
        jx = jy = spec.J;
        jz = spec.J * spec.Delta;
    } else {
        jx = spec.Jx;
        jy = spec.Jy;
        jz = spec.Jz;
    }
    auto op = [&](SiteOp s, int i) { return site_operator(s, i, spec); };
    SpMat out = -jx * (op(SiteOp::X, k) * op(SiteOp::X, k + 1))
              - jy * (op(SiteOp::Y, k) * op(SiteOp::Y, k + 1))
              - jz * (op(SiteOp::Z, k) * op(SiteOp::Z, k + 1));
    return out;
}

SpMat onsite_hamiltonian(const HamiltonianSpec& spec, int k)
{
    check_site(k, spec);
    if (spec.family == Family::TightBinding) {
        Mat h = single_particle_matrix(spec);
        return h(k - 1, k - 1) * site_operator(SiteOp::Number, k, spec);
    }
    RVec pot = potential_values(spec.potential, spec.L);
    return pot(k - 1) * site_operator(SiteOp::Z, k, spec);
}

SpMat build_hamiltonian(const HamiltonianSpec& spec)
{
    require(spec.L >= 1, "L must be >= 1");
    require(!is_bosonic(spec) || spec.boson_cutoff >= 1, "boson cutoff must be >= 1");
    require(hilbert_dim(spec) <= spec.max_dim,
            "Hilbert-space dimension " + std::to_string(hilbert_dim(spec)) + " exceeds max_dim " +
                std::to_string(spec.max_dim));
    const Eigen::Index dim = hilbert_dim(spec);
    SpMat H(dim, dim);
    if (spec.family == Family::TightBinding) {
        Mat h = single_particle_matrix(spec);
        std::vector<SpMat> a(spec.L);
        for (int i = 0; i < spec.L; ++i) a[i] = site_operator(SiteOp::Annihilate, i + 1, spec);
        for (int i = 0; i < spec.L; ++i)
            for (int j = 0; j < spec.L; ++j)
                if (h(i, j) != cplx(0.0)) H += h(i, j) * SpMat(SpMat(a[i].adjoint()) * a[j]);
    } else {
        for (int k = 1; k < spec.L; ++k) H += bond_hamiltonian(spec, k);
        for (int k = 1; k <= spec.L; ++k) H += onsite_hamiltonian(spec, k);
    }
    H.prune(cplx(0.0));
    return H;
}

} // namespace ness
