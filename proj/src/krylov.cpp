// SPDX-License-Identifier: Apache-2.0
#include "ness/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace ness {

double norm_inf(const SpMat& A)
{
    RVec rows = RVec::Zero(A.rows());
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) rows(it.row()) += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

namespace {

double round_step(double t)
{
    if (!(t > 0.0) || !std::isfinite(t)) return t;
    double s = std::pow(10.0, std::floor(std::log10(t)) - 1.0);
    return std::ceil(t / s) * s;
}

} // namespace

// Adapted from the Expokit zexpv scheme (Sidje 1998).
Vec expmv(const MatVec& A, double anorm, const Vec& v, double t, const ExpmvOptions& opt)
{
    const Eigen::Index n = v.size();
    if (t == 0.0 || n == 0) return v;
    double beta = v.norm();
    if (beta == 0.0) return v;
    if (!(anorm > 0.0)) anorm = 1.0;
    const int m = int(std::min<Eigen::Index>(opt.krylov_dim, n));
    const double tol = opt.atol + opt.rtol * beta;
    const double btol = 1e-12 * beta;
    const double gamma = 0.9, delta = 1.2;
    const double sgn = t > 0 ? 1.0 : -1.0;
    const double t_out = std::abs(t);
    const double rndoff = anorm * std::numeric_limits<double>::epsilon();

    double fact = std::pow((m + 1.0) / std::exp(1.0), m + 1.0) * std::sqrt(2.0 * kPi * (m + 1.0));
    double xm = 1.0 / m;
    double t_new = round_step((1.0 / anorm) * std::pow((fact * tol) / (4.0 * beta * anorm), xm));
    double t_now = 0.0;
    Vec w = v;
    int steps = 0;
    while (t_now < t_out) {
        if (++steps > opt.max_steps) throw SolverError("Krylov propagation exceeded step budget");
        double t_step = std::min(t_out - t_now, t_new);
        Mat V = Mat::Zero(n, m + 1);
        Mat H = Mat::Zero(m + 2, m + 2);
        V.col(0) = w / beta;
        int k1 = 2, mb = m;
        Vec p(n);
        for (int j = 0; j < m; ++j) {
            A(V.col(j), p);
            for (int i = 0; i <= j; ++i) {
                H(i, j) = V.col(i).dot(p);
                p -= H(i, j) * V.col(i);
            }
            // Second Gram-Schmidt pass keeps the basis orthogonal for non-normal A.
            for (int i = 0; i <= j; ++i) {
                cplx c = V.col(i).dot(p);
                H(i, j) += c;
                p -= c * V.col(i);
            }
            double s = p.norm();
            if (s < btol) {
                k1 = 0;
                mb = j + 1;
                t_step = t_out - t_now;
                break;
            }
            H(j + 1, j) = s;
            V.col(j + 1) = p / s;
        }
        double avnorm = 0.0;
        if (k1 != 0) {
            H(m + 1, m) = 1.0;
            A(V.col(m), p);
            avnorm = p.norm();
        }
        Mat F;
        double err_loc = 0.0;
        for (int reject = 0;; ++reject) {
            int mx = mb + k1;
            Mat Hs = (sgn * t_step) * H.topLeftCorner(mx, mx);
            F = Hs.exp();
            if (k1 == 0) {
                err_loc = btol;
                break;
            }
            double phi1 = std::abs(beta * F(m, 0));
            double phi2 = std::abs(beta * F(m + 1, 0) * avnorm);
            if (phi1 > 10.0 * phi2) {
                err_loc = phi2;
                xm = 1.0 / m;
            } else if (phi1 > phi2) {
                err_loc = (phi1 * phi2) / (phi1 - phi2);
                xm = 1.0 / m;
            } else {
                err_loc = phi1;
                xm = 1.0 / (m - 1 > 0 ? m - 1 : 1);
            }
            if (err_loc <= delta * t_step * tol / t_out || reject > 50) break;
            t_step = round_step(gamma * t_step * std::pow(t_step * tol / (t_out * err_loc), xm));
        }
        int mx = mb + std::max(0, k1 - 1);
        w = V.leftCols(mx) * (beta * F.col(0).head(mx));
        beta = w.norm();
        t_now += t_step;
        double ratio = err_loc > 0.0 ? t_step * tol / (t_out * err_loc) : 2.0;
        t_new = round_step(gamma * t_step * std::pow(ratio, xm));
        if (!(t_new > 0.0) || !std::isfinite(t_new)) t_new = t_out - t_now;
        (void)rndoff;
        if (beta == 0.0) break;
    }
    return w;
}

} // namespace ness
