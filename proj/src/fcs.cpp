// SPDX-License-Identifier: Apache-2.0
#include "ness/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ness/liouville.hpp"

namespace ness {

namespace {

struct Branch {
    cplx value;
    Vec vec;
};

constexpr Eigen::Index kDenseLimit = 4096;

Branch initial_branch(const SpMat& L0)
{
    auto ss = steady_state(L0);
    Vec v = vectorize(ss.rho);
    return {cplx(0.0), v.normalized()};
}

// One continuation step: eigenpair of L nearest the previous branch.
Branch follow(const SpMat& L, const Branch& prev, const FcsOptions& opt)
{
    const Eigen::Index n = L.rows();
    if (n <= kDenseLimit) {
        Eigen::ComplexEigenSolver<Mat> es(Mat(L), true);
        if (es.info() != Eigen::Success) throw SolverError("tilted-generator eigensolver failed");
        Eigen::Index best = -1, second = -1;
        double o1 = -1.0, o2 = -1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            double o = std::abs(prev.vec.dot(es.eigenvectors().col(k).normalized()));
            if (o > o1) {
                o2 = o1;
                second = best;
                o1 = o;
                best = k;
            } else if (o > o2) {
                o2 = o;
                second = k;
            }
        }
        const double scale = std::max(1.0, norm_inf(L));
        if (second >= 0 && o2 > opt.crossing_ratio * o1 &&
            std::abs(es.eigenvalues()(best) - es.eigenvalues()(second)) < 1e-3 * scale)
            throw SolverError("eigenvalue branch crossing detected during counting-field continuation (overlaps " +
                              std::to_string(o1) + ", " + std::to_string(o2) + ")");
        return {es.eigenvalues()(best), es.eigenvectors().col(best).normalized()};
    }
    // Shifted inverse iteration from the previous pair.
    const double scale = std::max(1.0, norm_inf(L));
    cplx shift = prev.value + 1e-7 * scale;
    SpMat S = L - shift * identity(n);
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu(S);
    if (lu.info() != Eigen::Success) throw SolverError("tilted-generator shift factorization failed");
    Vec v = prev.vec;
    cplx lam = prev.value;
    for (int it = 0; it < 200; ++it) {
        Vec w = lu.solve(v);
        w.normalize();
        cplx nl = w.dot(L * w);
        double change = std::abs(nl - lam);
        lam = nl;
        v = w;
        if ((L * v - lam * v).norm() < 1e-12 * scale && change < 1e-13 * scale) break;
    }
    if (std::abs(v.dot(prev.vec)) < 0.5)
        throw SolverError("eigenvalue branch crossing detected during counting-field continuation");
    return {lam, v};
}

cplx eigen_at(const GeneratorBundle& g, const Counter& c, Branch b, double from, double to,
              const FcsOptions& opt)
{
    if (to == from) return b.value;
    const int steps = std::max(1, int(std::ceil(std::abs(to - from) / opt.continuation_step)));
    for (int s = 1; s <= steps; ++s) {
        double chi = from + (to - from) * s / steps;
        b = follow(liouvillian(tilt(g, c, chi)), b, opt);
    }
    return b.value;
}

// Integer jump weights make the tilted generator 2 pi periodic in chi.
double reduce_chi(const Counter& c, double chi)
{
    if (c.kind == CounterKind::Energy) return chi;
    return std::remainder(chi, 2.0 * kPi);
}

} // namespace

cplx dominant_eigenvalue(const GeneratorBundle& g, const Counter& c, double chi, const FcsOptions& opt)
{
    chi = reduce_chi(c, chi);
    if (chi == 0.0) return 0.0;
    tilt(g, c, 0.0);
    return eigen_at(g, c, initial_branch(liouvillian(g)), 0.0, chi, opt);
}

std::vector<cplx> cgf_sweep(const GeneratorBundle& g, const Counter& c, const std::vector<double>& chis,
                            const FcsOptions& opt)
{
    std::vector<cplx> out(chis.size());
    if (chis.empty()) return out;
    tilt(g, c, 0.0);
    Branch start = initial_branch(liouvillian(g));
    // Continue outward from 0 in both directions so each value follows the physical branch.
    std::vector<size_t> idx(chis.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (int sign : {1, -1}) {
        std::vector<size_t> side;
        for (size_t i : idx)
            if ((sign > 0 && chis[i] >= 0.0) || (sign < 0 && chis[i] < 0.0)) side.push_back(i);
        std::sort(side.begin(), side.end(), [&](size_t a, size_t b) { return std::abs(chis[a]) < std::abs(chis[b]); });
        Branch b = start;
        double at = 0.0;
        for (size_t i : side) {
            const double to = chis[i];
            if (to != at) {
                const int steps = std::max(1, int(std::ceil(std::abs(to - at) / opt.continuation_step)));
                for (int s = 1; s <= steps; ++s)
                    b = follow(liouvillian(tilt(g, c, at + (to - at) * s / steps)), b, opt);
                at = to;
            }
            out[i] = b.value;
        }
    }
    return out;
}

double mean_current(const GeneratorBundle& g, const Counter& c)
{
    tilt(g, c, 0.0);
    auto ss = steady_state(g);
    Vec r = vectorize(ss.rho);
    SpMat d1 = jump_derivative(g, c, 1);
    cplx tr = devectorize(d1 * r).trace();
    return (-I1 * tr).real();
}

double noise(const GeneratorBundle& g, const Counter& c)
{
    tilt(g, c, 0.0);
    SpMat L = liouvillian(g);
    auto ss = steady_state(L);
    Vec r = vectorize(ss.rho);
    SpMat d1 = jump_derivative(g, c, 1), d2 = jump_derivative(g, c, 2);
    Vec d1r = d1 * r;
    cplx I = -I1 * devectorize(d1r).trace();
    Vec rhs = I1 * d1r + I * r;
    const cplx t = devectorize(rhs).trace();
    if (std::abs(t) > 1e-9 * std::max(1.0, rhs.norm()))
        throw SolverError("noise equation has an inconsistent right-hand side");
    SingularSolver solver(L);
    Vec sigma = solver.solve(rhs, 0.0);
    cplx val = -devectorize(d2 * r).trace() - 2.0 * I1 * devectorize(d1 * sigma).trace();
    return val.real();
}

double fd_mean(const GeneratorBundle& g, const Counter& c, const FcsOptions& opt)
{
    const double h = opt.fd_step1;
    cplx d = (dominant_eigenvalue(g, c, h, opt) - dominant_eigenvalue(g, c, -h, opt)) / (2.0 * h);
    return (-I1 * d).real();
}

double fd_noise(const GeneratorBundle& g, const Counter& c, const FcsOptions& opt)
{
    const double h = opt.fd_step2;
    cplx p1 = dominant_eigenvalue(g, c, h, opt), m1 = dominant_eigenvalue(g, c, -h, opt);
    cplx p2 = dominant_eigenvalue(g, c, 2 * h, opt), m2 = dominant_eigenvalue(g, c, -2 * h, opt);
    cplx d2 = (-p2 + 16.0 * p1 + 16.0 * m1 - m2) / (12.0 * h * h);
    return (-d2).real();
}

} // namespace ness
