// SPDX-License-Identifier: Apache-2.0
#include "ness/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include "ness/krylov.hpp"

namespace ness {

namespace {

Mat dephasing_term(const RVec& G, const Mat& C)
{
    Mat out = Mat::Zero(C.rows(), C.cols());
    if (G.size() == 0) return out;
    for (Eigen::Index j = 0; j < C.cols(); ++j)
        for (Eigen::Index i = 0; i < C.rows(); ++i)
            if (i != j) out(i, j) = (G(i) + G(j)) * C(i, j);
    return out;
}

Mat drift(const LyapunovSystem& sys, const Mat& C)
{
    SpMat W = to_sparse(sys.W);
    Mat WC = W * C;
    Mat CW = Mat(W * C.adjoint()).adjoint();
    return -(WC + CW) + sys.D - dephasing_term(sys.dephasing, C);
}

bool has_dephasing(const LyapunovSystem& sys)
{
    return sys.dephasing.size() > 0 && sys.dephasing.cwiseAbs().maxCoeff() > 0.0;
}

} // namespace

LyapunovSystem build_lyapunov(const Mat& h, const std::vector<BathSpec>& baths, Statistics stats)
{
    require(h.rows() == h.cols(), "single-particle matrix must be square");
    require(max_abs(h - h.adjoint()) < 1e-12, "single-particle matrix must be Hermitian");
    const Eigen::Index L = h.rows();
    LyapunovSystem sys;
    sys.h = h;
    sys.statistics = stats;
    RVec gp = RVec::Zero(L), gm = RVec::Zero(L);
    for (const auto& b : baths) {
        require(b.site >= 1 && b.site <= L, "bath attached to non-existent site " + std::to_string(b.site));
        require(b.gamma >= 0.0, "bath rate gamma must be >= 0");
        double w = b.omega.value_or(h(b.site - 1, b.site - 1).real());
        double n = occupation(b, w);
        gp(b.site - 1) += b.gamma * n;
        gm(b.site - 1) += b.gamma * (stats == Statistics::Fermion ? 1.0 - n : 1.0 + n);
    }
    RVec damp = stats == Statistics::Fermion ? RVec(0.5 * (gm + gp)) : RVec(0.5 * (gm - gp));
    sys.W = I1 * h;
    sys.W.diagonal() += damp.cast<cplx>();
    sys.D = gp.cast<cplx>().asDiagonal();
    sys.dephasing = RVec::Zero(L);
    return sys;
}

LyapunovSystem with_dephasing(LyapunovSystem sys, double Gamma)
{
    require(Gamma >= 0.0, "dephasing rate must be >= 0");
    sys.dephasing = RVec::Constant(sys.h.rows(), Gamma);
    return sys;
}

double stability_margin(const Mat& W)
{
    Eigen::ComplexEigenSolver<Mat> es(W, false);
    return es.eigenvalues().real().minCoeff();
}

Mat solve_lyapunov(const Mat& W, const Mat& F)
{
    const Eigen::Index n = W.rows();
    Eigen::ComplexSchur<Mat> schur(W);
    if (schur.info() != Eigen::Success) throw SolverError("Schur decomposition failed");
    const Mat& T = schur.matrixT();
    const Mat& U = schur.matrixU();
    Mat G = U.adjoint() * F * U;
    Mat X = Mat::Zero(n, n);
    Mat A = T;
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        Vec rhs = G.col(j);
        for (Eigen::Index k = j + 1; k < n; ++k) rhs -= std::conj(T(j, k)) * X.col(k);
        A.diagonal() = T.diagonal().array() + std::conj(T(j, j));
        X.col(j) = A.triangularView<Eigen::Upper>().solve(rhs);
    }
    return U * X * U.adjoint();
}

double covariance_residual(const LyapunovSystem& sys, const Mat& C)
{
    return max_abs(drift(sys, C));
}

CovarianceState solve_steady(const LyapunovSystem& sys)
{
    if (has_dephasing(sys)) return solve_steady_dephasing(sys);
    double margin = stability_margin(sys.W);
    if (!(margin > 1e-13))
        throw SolverError("W is not strictly stable (min Re eig = " + std::to_string(margin) +
                          "): no unique steady covariance");
    CovarianceState out;
    out.statistics = sys.statistics;
    out.C = solve_lyapunov(sys.W, sys.D);
    out.C = 0.5 * (out.C + out.C.adjoint());
    out.residual = covariance_residual(sys, out.C);
    return out;
}

namespace {

// Nested-dissection numbering of the upper-triangle cells of an L x L grid.
void dissect(Eigen::Index i0, Eigen::Index i1, Eigen::Index j0, Eigen::Index j1,
             std::vector<std::pair<Eigen::Index, Eigen::Index>>& cells)
{
    Eigen::Index di = i1 - i0, dj = j1 - j0;
    if (di <= 0 || dj <= 0 || i0 >= j1) return;
    if (di * dj <= 16) {
        for (Eigen::Index j = j0; j < j1; ++j)
            for (Eigen::Index i = i0; i < i1; ++i)
                if (i <= j) cells.emplace_back(i, j);
        return;
    }
    if (di >= dj) {
        Eigen::Index m = i0 + di / 2;
        dissect(i0, m, j0, j1, cells);
        dissect(m + 1, i1, j0, j1, cells);
        for (Eigen::Index j = std::max(j0, m); j < j1; ++j) cells.emplace_back(m, j);
    } else {
        Eigen::Index m = j0 + dj / 2;
        dissect(i0, i1, j0, m, cells);
        dissect(i0, i1, m + 1, j1, cells);
        for (Eigen::Index i = i0; i < std::min(i1, m + 1); ++i) cells.emplace_back(i, m);
    }
}

} // namespace

namespace {

using Cells = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

// Solves the dephased steady-state equations with C restricted to the given cells (zero elsewhere).
Mat solve_on_cells(const LyapunovSystem& sys, const Cells& cells)
{
    const Eigen::Index L = sys.h.rows();
    RVec G = sys.dephasing.size() ? sys.dephasing : RVec::Zero(L);
    // Hermitian C as real unknowns: Re C_ij, Im C_ij for i < j and C_ii.
    std::vector<int> re(size_t(L * L), -1), im(size_t(L * L), -1);
    int n = 0;
    for (auto [i, j] : cells) {
        re[size_t(i * L + j)] = n++;
        if (i != j) im[size_t(i * L + j)] = n++;
    }
    SpMat Ws = to_sparse(sys.W);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size_t(n) * 24);
    std::vector<std::pair<std::pair<Eigen::Index, Eigen::Index>, cplx>> img;
    // Image of a Hermitian basis element X = z E_ab + conj(z) E_ba under C -> -(WC + CW^dag) - Deph(C).
    auto image = [&](Eigen::Index a, Eigen::Index b, cplx z) {
        img.clear();
        auto put = [&](Eigen::Index p, Eigen::Index q, cplx v) {
            if (p <= q) img.push_back({{p, q}, v});
        };
        auto elem = [&](Eigen::Index r, Eigen::Index c, cplx v) {
            for (SpMat::InnerIterator it(Ws, r); it; ++it) put(it.row(), c, -it.value() * v);
            for (SpMat::InnerIterator it(Ws, c); it; ++it) put(r, it.row(), -std::conj(it.value()) * v);
            if (r != c) put(r, c, -(G(r) + G(c)) * v);
        };
        elem(a, b, z);
        if (a != b) elem(b, a, std::conj(z));
    };
    auto emit = [&](int col) {
        for (auto& [pq, v] : img) {
            auto [p, q] = pq;
            size_t c = size_t(p * L + q);
            if (re[c] < 0) continue;
            trip.emplace_back(re[c], col, v.real());
            if (p != q) trip.emplace_back(im[c], col, v.imag());
        }
    };
    for (auto [i, j] : cells) {
        size_t c = size_t(i * L + j);
        image(i, j, 1.0);
        emit(re[c]);
        if (i != j) {
            image(i, j, I1);
            emit(im[c]);
        }
    }
    Eigen::SparseMatrix<double> M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();
    RVec rhs = RVec::Zero(n);
    for (auto [i, j] : cells) {
        size_t c = size_t(i * L + j);
        rhs(re[c]) = -sys.D(i, j).real();
        if (i != j) rhs(im[c]) = -sys.D(i, j).imag();
    }
    RVec x;
    if (L <= 2000) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::NaturalOrdering<int>> lu;
        lu.isSymmetric(true);
        lu.compute(M);
        if (lu.info() != Eigen::Success)
            throw SolverError("dephasing covariance system is singular (" + lu.lastErrorMessage() + ")");
        x = lu.solve(rhs);
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
        solver.setTolerance(1e-14);
        solver.setMaxIterations(int(std::min<Eigen::Index>(100000, 10 * n)));
        solver.compute(M);
        x = solver.solve(rhs);
        if (solver.info() != Eigen::Success)
            throw SolverError("iterative dephasing covariance solve did not converge");
    }
    if (!x.allFinite()) throw SolverError("dephasing covariance system is singular");
    Mat C = Mat::Zero(L, L);
    for (auto [i, j] : cells) {
        size_t c = size_t(i * L + j);
        cplx v = x(re[c]);
        if (i != j) v += I1 * x(im[c]);
        C(i, j) = v;
        C(j, i) = std::conj(v);
    }
    return C;
}

} // namespace

CovarianceState solve_steady_dephasing(const LyapunovSystem& sys)
{
    const Eigen::Index L = sys.h.rows();
    CovarianceState out;
    out.statistics = sys.statistics;
    // Banded ansatz |i - j| <= K, accepted only when the full residual is at roundoff level.
    const double scale = std::max({max_abs(sys.W), max_abs(sys.D), 1.0});
    Eigen::Index K = 1;
    for (Eigen::Index i = 0; i < L; ++i)
        for (Eigen::Index j = i + 1; j < L; ++j)
            if (sys.W(i, j) != 0.0 || sys.W(j, i) != 0.0 || sys.D(i, j) != 0.0) K = std::max(K, j - i);
    for (; 4 * K <= L; K *= 2) {
        Cells band;
        for (Eigen::Index i = 0; i < L; ++i)
            for (Eigen::Index j = i; j <= std::min(L - 1, i + K); ++j) band.emplace_back(i, j);
        try {
            out.C = solve_on_cells(sys, band);
        } catch (const SolverError&) {
            continue;
        }
        out.residual = covariance_residual(sys, out.C);
        if (out.residual < 1e-13 * scale) return out;
    }
    Cells cells;
    cells.reserve(size_t(L * (L + 1) / 2));
    dissect(0, L, 0, L, cells);
    out.C = solve_on_cells(sys, cells);
    out.residual = covariance_residual(sys, out.C);
    return out;
}


std::vector<CovarianceState> evolve_covariance(const LyapunovSystem& sys, const Mat& C0,
                                               const std::vector<double>& times)
{
    const Eigen::Index L = sys.h.rows();
    require(C0.rows() == L && C0.cols() == L, "initial covariance dimension mismatch");
    for (size_t k = 0; k < times.size(); ++k) {
        require(times[k] >= 0.0, "times must be >= 0");
        if (k) require(times[k] >= times[k - 1], "times must be nondecreasing");
    }
    std::vector<CovarianceState> out;
    auto push = [&](Mat C) {
        C = 0.5 * (C + C.adjoint());
        CovarianceState s;
        s.statistics = sys.statistics;
        s.residual = covariance_residual(sys, C);
        s.C = std::move(C);
        out.push_back(std::move(s));
    };
    if (!has_dephasing(sys) && stability_margin(sys.W) > 1e-13) {
        Mat Cinf = solve_lyapunov(sys.W, sys.D);
        Mat dC = C0 - Cinf;
        for (double t : times) {
            Mat E = (-sys.W * t).exp();
            push(Cinf + E * dC * E.adjoint());
        }
        return out;
    }
    // Affine flow on (vec C, 1) by Krylov exponentials.
    const Eigen::Index n = L * L;
    Vec v(n + 1);
    v.head(n) = Eigen::Map<const Vec>(C0.data(), n);
    v(n) = 1.0;
    MatVec mv = [&](const Vec& x, Vec& y) {
        Mat C = Eigen::Map<const Mat>(x.data(), L, L);
        Mat dC = -(sys.W * C + C * sys.W.adjoint()) + x(n) * sys.D - dephasing_term(sys.dephasing, C);
        y.resize(n + 1);
        y.head(n) = Eigen::Map<const Vec>(dC.data(), n);
        y(n) = 0.0;
    };
    double anorm = 2.0 * sys.W.cwiseAbs().rowwise().sum().maxCoeff() + sys.D.cwiseAbs().maxCoeff() +
                   2.0 * (sys.dephasing.size() ? sys.dephasing.maxCoeff() : 0.0);
    double t_prev = 0.0;
    for (double t : times) {
        if (t > t_prev) v = expmv(mv, anorm, v, t - t_prev);
        t_prev = t;
        push(Eigen::Map<const Mat>(v.data(), L, L) / v(n));
    }
    return out;
}

double covariance_current(const Mat& C, const Mat& h, int i)
{
    require(i >= 1 && i < h.rows(), "bond index out of range");
    Eigen::Index a = i - 1, b = i;
    return -2.0 * (h(a, b) * C(b, a)).imag();
}

} // namespace ness
