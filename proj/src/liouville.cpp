// SPDX-License-Identifier: Apache-2.0
#include "ness/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>

namespace ness {

namespace {

Eigen::Index side(Eigen::Index n)
{
    auto d = Eigen::Index(std::llround(std::sqrt(double(n))));
    require(d * d == n, "vector length is not a perfect square");
    return d;
}

void add_channel(SpMat& L, const JumpChannel& ch, Eigen::Index d)
{
    SpMat Id = identity(d);
    SpMat BdA = SpMat(ch.B.adjoint()) * ch.A;
    SpMat sandwich = kron(SpMat(ch.B.conjugate()), ch.A);
    L += (ch.rate * ch.phase) * sandwich;
    L -= (0.5 * ch.rate) * kron(Id, BdA);
    L -= (0.5 * ch.rate) * kron(SpMat(BdA.transpose()), Id);
}

SpMat commutator_super(const SpMat& H, Eigen::Index d)
{
    SpMat Id = identity(d);
    return cplx(0.0, -1.0) * (kron(Id, H) - kron(SpMat(H.transpose()), Id));
}

void add_channel_action(Mat& out, const JumpChannel& ch, const Mat& rho)
{
    Mat A = ch.A, B = ch.B;
    Mat BdA = B.adjoint() * A;
    out += (ch.rate * ch.phase) * (A * rho * B.adjoint());
    out -= (0.5 * ch.rate) * (BdA * rho + rho * BdA);
}

Mat hermitian_log(const Mat& rho)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
    RVec l = es.eigenvalues().unaryExpr([](double x) { return std::log(std::max(x, 1e-300)); });
    return es.eigenvectors() * l.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

SpMat replace_trace_row(const SpMat& L)
{
    const Eigen::Index n = L.rows();
    const Eigen::Index d = side(n);
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(size_t(L.nonZeros() + d));
    for (int k = 0; k < L.outerSize(); ++k)
        for (SpMat::InnerIterator it(L, k); it; ++it)
            if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index i = 0; i < d; ++i) trip.emplace_back(0, i * (d + 1), 1.0);
    SpMat M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();
    return M;
}

Mat finish_state(const Vec& x)
{
    Mat rho = devectorize(x);
    rho = 0.5 * (rho + rho.adjoint());
    cplx tr = rho.trace();
    if (std::abs(tr) == 0.0) throw SolverError("steady state has zero trace");
    return rho / tr.real();
}

} // namespace

Vec vectorize(const Mat& rho)
{
    return Eigen::Map<const Vec>(rho.data(), rho.size());
}

Mat devectorize(const Vec& v)
{
    const Eigen::Index d = side(v.size());
    return Eigen::Map<const Mat>(v.data(), d, d);
}

SpMat liouvillian(const GeneratorBundle& g)
{
    const Eigen::Index d = g.dim;
    SpMat L = commutator_super(g.H, d);
    for (const auto& ch : g.channels)
        if (ch.rate != 0.0) add_channel(L, ch, d);
    L.prune(cplx(0.0));
    L.makeCompressed();
    return L;
}

SpMat bath_superoperator(const GeneratorBundle& g, int bath)
{
    const Eigen::Index d = g.dim;
    SpMat L(d * d, d * d);
    if (bath >= 0 && size_t(bath) < g.bath_H.size()) L += commutator_super(g.bath_H[size_t(bath)], d);
    for (const auto& ch : g.channels)
        if (ch.bath == bath && ch.rate != 0.0) add_channel(L, ch, d);
    L.makeCompressed();
    return L;
}

SpMat jump_derivative(const GeneratorBundle& g, const Counter& c, int k)
{
    const Eigen::Index d = g.dim;
    SpMat out(d * d, d * d);
    for (const auto& ch : g.channels) {
        double w = counting_weight(ch, c);
        if (w == 0.0 || ch.rate == 0.0) continue;
        cplx f = std::pow(I1 * w, k) * ch.rate * ch.phase;
        out += f * kron(SpMat(ch.B.conjugate()), ch.A);
    }
    out.makeCompressed();
    return out;
}

Mat apply(const GeneratorBundle& g, const Mat& rho)
{
    Mat H = g.H;
    Mat out = -I1 * (H * rho - rho * H);
    for (const auto& ch : g.channels) add_channel_action(out, ch, rho);
    return out;
}

Mat apply_bath(const GeneratorBundle& g, int bath, const Mat& rho)
{
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    if (bath >= 0 && size_t(bath) < g.bath_H.size()) {
        Mat K = g.bath_H[size_t(bath)];
        out += -I1 * (K * rho - rho * K);
    }
    for (const auto& ch : g.channels)
        if (ch.bath == bath) add_channel_action(out, ch, rho);
    return out;
}

SingularSolver::SingularSolver(const SpMat& L) : d_(side(L.rows()))
{
    lu_.compute(replace_trace_row(L));
    if (lu_.info() != Eigen::Success)
        throw SolverError("steady-state system is singular: the null space of the generator is not one-dimensional");
}

Vec SingularSolver::solve(const Vec& rhs, cplx trace_value) const
{
    Vec b = rhs;
    b(0) = trace_value;
    Vec x = lu_.solve(b);
    if (!x.allFinite()) throw SolverError("steady-state solve produced non-finite values");
    return x;
}

SteadyState steady_state(const SpMat& L, const SteadyOptions& opt)
{
    const Eigen::Index n = L.rows();
    require(L.cols() == n, "Liouvillian must be square");
    const Eigen::Index d = side(n);
    Vec tr_row = Vec::Zero(n);
    for (Eigen::Index i = 0; i < d; ++i) tr_row(i * (d + 1)) = 1.0;
    {
        Vec leak = SpMat(L.adjoint()) * tr_row;
        require(leak.cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, norm_inf(L)),
                "generator is not trace preserving");
    }
    SteadyState out;
    Vec x;
    if (opt.method == SteadyMethod::Variational) {
        SpMat LdL = SpMat(L.adjoint()) * L;
        SpMat M = LdL + SpMat((tr_row * tr_row.adjoint()).sparseView());
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu(M);
        if (lu.info() != Eigen::Success) throw SolverError("variational steady-state system is singular");
        x = lu.solve(tr_row);
    } else if (opt.method == SteadyMethod::Iterative) {
        SpMat M = replace_trace_row(L);
        Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<cplx>> solver;
        solver.setTolerance(opt.tol);
        solver.setMaxIterations(int(std::max<Eigen::Index>(1000, 10 * n)));
        solver.compute(M);
        Vec b = Vec::Zero(n);
        b(0) = 1.0;
        x = solver.solve(b);
        if (solver.info() != Eigen::Success) throw SolverError("iterative steady-state solve did not converge");
    } else {
        SpMat M = replace_trace_row(L);
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu(M);
        if (lu.info() != Eigen::Success)
            throw SolverError("steady state is not unique: generator null space has dimension > 1");
        Vec b = Vec::Zero(n);
        b(0) = 1.0;
        x = lu.solve(b);
        if (!x.allFinite())
            throw SolverError("steady state is not unique: generator null space has dimension > 1");
        if (opt.check_uniqueness) {
            // Inverse iteration on the bordered matrix estimates its smallest singular value.
            Vec y = Vec::Ones(n) / std::sqrt(double(n));
            for (int i = 0; i < n % 7 + 3; ++i) y(i % n) += 0.1 * (i + 1);
            y.normalize();
            double growth = 0.0;
            for (int it = 0; it < 12; ++it) {
                Vec z = lu.solve(y);
                growth = z.norm();
                if (!std::isfinite(growth)) break;
                y = z / growth;
            }
            double scale = std::max(1.0, norm_inf(M));
            if (!std::isfinite(growth) || growth * scale > 1e13)
                throw SolverError("steady state is not unique: generator null space has dimension > 1");
        }
    }
    out.rho = finish_state(x);
    out.residual = (L * vectorize(out.rho)).norm();
    if (opt.compute_gap) {
        auto sp = spectrum(L, 2);
        if (sp.values.size() >= 2) out.gap = std::abs(sp.values(1).real());
    }
    return out;
}

SteadyState steady_state(const GeneratorBundle& g, const SteadyOptions& opt)
{
    return steady_state(liouvillian(g), opt);
}

namespace {

SpectrumResult sort_spectrum(const Vec& vals, const Mat* R)
{
    std::vector<Eigen::Index> idx(size_t(vals.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (vals(a).real() != vals(b).real()) return vals(a).real() > vals(b).real();
        return vals(a).imag() > vals(b).imag();
    });
    SpectrumResult out;
    out.values.resize(vals.size());
    Mat Rs;
    if (R) Rs.resize(R->rows(), R->cols());
    for (size_t k = 0; k < idx.size(); ++k) {
        out.values(Eigen::Index(k)) = vals(idx[k]);
        if (R) Rs.col(Eigen::Index(k)) = R->col(idx[k]);
    }
    if (R) out.right = Rs;
    int zeros = 0;
    for (Eigen::Index k = 0; k < out.values.size(); ++k) {
        double re = std::abs(out.values(k).real()), im = std::abs(out.values(k).imag());
        if (re < 1e-10 && im < 1e-10) ++zeros;
        if (re < 1e-10 && im > 1e-10) out.purely_imaginary_flag = true;
    }
    if (zeros > 1) out.purely_imaginary_flag = true;
    return out;
}

} // namespace

SpectrumResult spectrum(const SpMat& L, int k, bool vectors)
{
    const Eigen::Index n = L.rows();
    if (k <= 0 || k >= n - 1) {
        require(n <= 4096, "full spectrum only for d^2 <= 4096; request k extremal rapidities instead");
        Eigen::ComplexEigenSolver<Mat> es(Mat(L), vectors);
        if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed");
        Mat R;
        if (vectors) R = es.eigenvectors();
        auto out = sort_spectrum(es.eigenvalues(), vectors ? &R : nullptr);
        if (vectors) {
            Mat Sinv = out.right->inverse();
            out.left = Sinv.adjoint();
        }
        return out;
    }
    // Shift-invert Arnoldi around a small positive shift.
    const double sigma = 1e-3 * std::max(1.0, norm_inf(L)) * 0.7310585786300049;
    SpMat S = L - sigma * identity(n);
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu(S);
    if (lu.info() != Eigen::Success) throw SolverError("shift-invert factorization failed");
    const int m = int(std::min<Eigen::Index>(n, std::max(2 * k + 20, 40)));
    Mat V = Mat::Zero(n, m + 1);
    Mat H = Mat::Zero(m + 1, m);
    Vec v0 = Vec::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) v0(i) += 0.01 * double((i * 7919) % 101);
    V.col(0) = v0.normalized();
    int mm = m;
    for (int j = 0; j < m; ++j) {
        Vec p = lu.solve(Vec(V.col(j)));
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                cplx c = V.col(i).dot(p);
                H(i, j) += c;
                p -= c * V.col(i);
            }
        double s = p.norm();
        H(j + 1, j) = s;
        if (s < 1e-14) {
            mm = j + 1;
            break;
        }
        V.col(j + 1) = p / s;
    }
    Eigen::ComplexEigenSolver<Mat> es(H.topLeftCorner(mm, mm), vectors);
    if (es.info() != Eigen::Success) throw SolverError("Arnoldi Ritz eigensolver failed");
    Vec theta = es.eigenvalues();
    std::vector<Eigen::Index> idx(size_t(theta.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::abs(theta(a)) > std::abs(theta(b)); });
    int kk = std::min<int>(k, int(idx.size()));
    Vec vals(kk);
    Mat R;
    if (vectors) R.resize(n, kk);
    for (int i = 0; i < kk; ++i) {
        vals(i) = sigma + 1.0 / theta(idx[size_t(i)]);
        if (vectors) R.col(i) = (V.leftCols(mm) * es.eigenvectors().col(idx[size_t(i)])).normalized();
    }
    return sort_spectrum(vals, vectors ? &R : nullptr);
}

std::vector<Mat> evolve(const SpMat& L, const Mat& rho0, const std::vector<double>& times,
                        const EvolveOptions& opt)
{
    require(rho0.rows() == rho0.cols() && rho0.rows() * rho0.rows() == L.rows(),
            "initial state dimension does not match generator");
    require(std::abs(rho0.trace() - cplx(1.0)) < 1e-9, "initial state must have unit trace");
    for (size_t k = 0; k < times.size(); ++k) {
        require(times[k] >= 0.0, "times must be >= 0");
        if (k) require(times[k] >= times[k - 1], "times must be nondecreasing");
    }
    std::vector<Mat> out;
    Vec v = vectorize(rho0);
    if (opt.spectral && L.rows() <= 4096) {
        Eigen::ComplexEigenSolver<Mat> es{Mat(L)};
        Mat S = es.eigenvectors();
        Eigen::PartialPivLU<Mat> lu(S);
        double cond = S.norm() * lu.inverse().norm();
        if (es.info() == Eigen::Success && cond < 1e10) {
            Vec c = lu.solve(v);
            for (double t : times) {
                Vec e = (es.eigenvalues() * t).array().exp();
                out.push_back(devectorize(S * e.cwiseProduct(c)));
            }
            return out;
        }
    }
    const double anorm = norm_inf(L);
    MatVec mv = [&](const Vec& x, Vec& y) { y.noalias() = L * x; };
    ExpmvOptions eo;
    eo.rtol = opt.rtol;
    eo.atol = opt.atol;
    double t_prev = 0.0;
    for (double t : times) {
        if (t > t_prev) v = expmv(mv, anorm, v, t - t_prev, eo);
        t_prev = t;
        out.push_back(devectorize(v));
    }
    return out;
}

std::vector<Mat> perturbative_steady(const SpMat& L0, const SpMat& L1, int order)
{
    require(order >= 0, "perturbative order must be >= 0");
    require(L0.rows() == L1.rows() && L0.cols() == L1.cols(), "L0 and L1 dimensions differ");
    auto ss = steady_state(L0);
    SingularSolver solver(L0);
    const Eigen::Index d = solver.dim();
    std::vector<Mat> out{ss.rho};
    Vec prev = vectorize(ss.rho);
    for (int k = 1; k <= order; ++k) {
        Vec rhs = -(L1 * prev);
        cplx tr = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) tr += rhs(i * (d + 1));
        if (std::abs(tr) > 1e-10 * std::max(1.0, rhs.norm()))
            throw SolverError("perturbation is not trace preserving: recursion inconsistent");
        prev = solver.solve(rhs, 0.0);
        out.push_back(devectorize(prev));
    }
    return out;
}

double expect(const Mat& rho, const SpMat& O)
{
    return (Mat(O) * rho).trace().real();
}

Flow dissipative_current(const Mat& rho, const GeneratorBundle& g, int bath, const SpMat& O)
{
    require(bath >= 0 && size_t(bath) < g.baths.size(), "bath index out of range");
    Mat D = apply_bath(g, bath, rho);
    Mat Od = O;
    Mat Hs = g.H_system;
    bool conserved = max_abs(Hs * Od - Od * Hs) < 1e-10 * std::max(1.0, max_abs(Hs));
    return {(Od * D).trace().real(), conserved};
}

double bond_current(const Mat& rho, const SpMat& H_bond, const SpMat& O_k, const SpMat& O_k1)
{
    SpMat tot = O_k + O_k1;
    SpMat c = H_bond * tot - tot * H_bond;
    double err = c.nonZeros() ? Mat(c).cwiseAbs().maxCoeff() : 0.0;
    require(err < 1e-10, "bond Hamiltonian does not conserve O_k + O_{k+1}: no local current exists");
    SpMat comm = H_bond * O_k - O_k * H_bond;
    return (-I1 * (Mat(comm) * rho).trace()).real();
}

double entropy_production(const Mat& rho, const GeneratorBundle& g, EntropyMode mode, bool check_mode)
{
    require(g.model.has_value(), "entropy production needs a model-backed generator");
    const auto& H = *g.model;
    if (check_mode) {
        if (mode == EntropyMode::Global)
            require(g.kind == GeneratorKind::GME,
                    "global entropy production needs a global (GME) generator; use local currents for LMEs");
        else
            require(g.kind == GeneratorKind::LME,
                    "local entropy production needs a local (LME) generator; use global currents for GMEs");
    }
    Mat logr = hermitian_log(rho);
    double dS = -(apply(g, rho) * logr).trace().real();
    double flux = 0.0;
    if (mode == EntropyMode::Global) {
        Mat Hs = g.H_system;
        Mat N = total_number(H);
        for (size_t nu = 0; nu < g.baths.size(); ++nu) {
            const auto& b = g.baths[nu];
            Mat D = apply_bath(g, int(nu), rho);
            double JE = (Hs * D).trace().real();
            double JN = (N * D).trace().real();
            flux += b.beta * (JE - b.mu * JN);
        }
    } else {
        for (size_t nu = 0; nu < g.baths.size(); ++nu) {
            const auto& b = g.baths[nu];
            double x;
            if (b.target || b.statistics == BathStatistics::Magnetization) {
                double f = occupation(b, 0.0);
                require(f > 0.0 && (is_bosonic(H) || f < 1.0),
                        "entropy production diverges for fully polarizing baths");
                x = is_bosonic(H) ? std::log1p(1.0 / f) : std::log((1.0 - f) / f);
            } else {
                x = b.beta * (local_frequency(H, b) - b.mu);
            }
            Mat n = site_operator(SiteOp::Number, b.site, H);
            Mat D = apply_bath(g, int(nu), rho);
            flux += x * (n * D).trace().real();
        }
    }
    return dS - flux;
}

double trace_distance(const Mat& a, const Mat& b)
{
    Mat d = a - b;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace ness
