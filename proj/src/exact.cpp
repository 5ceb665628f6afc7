// SPDX-License-Identifier: Apache-2.0
#include "ness/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ness/baths.hpp"

namespace ness {

LeadModes lead_modes(const LeadSpec& lead)
{
    require(lead.N >= 1, "lead needs at least one site");
    require(lead.tau > 0.0, "lead hopping tau must be > 0");
    LeadModes m;
    m.energies.resize(lead.N);
    m.couplings.resize(lead.N);
    const double q = kPi / (lead.N + 1.0);
    const double norm = std::sqrt(2.0 / (lead.N + 1.0));
    for (int k = 1; k <= lead.N; ++k) {
        m.energies(k - 1) = lead.eps - 2.0 * lead.tau * std::cos(q * k);
        m.couplings(k - 1) = lead.tau_a * norm * std::sin(q * k);
    }
    return m;
}

ExactTrace exact_evolution(const ExactSetup& setup, const std::vector<double>& times)
{
    const Eigen::Index Ns = setup.h.rows();
    require(Ns >= 1 && Ns <= 4 && setup.h.cols() == Ns, "system must have 1 to 4 sites");
    require(max_abs(setup.h - setup.h.adjoint()) < 1e-12, "system matrix must be Hermitian");
    require(setup.C0.rows() == Ns && setup.C0.cols() == Ns, "initial covariance dimension mismatch");
    Eigen::Index n = Ns;
    for (const auto& l : setup.leads) {
        require(l.site >= 1 && l.site <= Ns, "lead attached to non-existent site");
        n += l.N;
    }
    require(n <= setup.max_modes, "exact evolution exceeds the single-particle mode budget");
    Mat H = Mat::Zero(n, n);
    H.topLeftCorner(Ns, Ns) = setup.h;
    RVec occ = RVec::Zero(n);
    Eigen::Index off = Ns;
    for (const auto& l : setup.leads) {
        auto m = lead_modes(l);
        for (int k = 0; k < l.N; ++k) {
            H(off + k, off + k) = m.energies(k);
            H(l.site - 1, off + k) = m.couplings(k);
            H(off + k, l.site - 1) = m.couplings(k);
            occ(off + k) = fermi(l.beta * (m.energies(k) - l.mu));
        }
        off += l.N;
    }
    const bool real = max_abs(Mat(H.imag().cast<cplx>())) == 0.0;
    RVec E;
    Mat Us, M0;
    if (real) {
        Eigen::SelfAdjointEigenSolver<RMat> es(H.real());
        if (es.info() != Eigen::Success) throw SolverError("single-particle eigensolver failed");
        E = es.eigenvalues();
        const RMat& U = es.eigenvectors();
        // M0 = U^T C(0) U with C(0) = diag(C0, f(eps_k)).
        RMat Ub = U.bottomRows(n - Ns);
        RMat lead_part = Ub.transpose() * (occ.tail(n - Ns).asDiagonal() * Ub);
        Us = U.topRows(Ns).cast<cplx>();
        M0 = Us.adjoint() * setup.C0 * Us + lead_part.cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        if (es.info() != Eigen::Success) throw SolverError("single-particle eigensolver failed");
        E = es.eigenvalues();
        const Mat& U = es.eigenvectors();
        Mat Ub = U.bottomRows(n - Ns);
        Us = U.topRows(Ns);
        M0 = Us.adjoint() * setup.C0 * Us + Ub.adjoint() * occ.tail(n - Ns).cast<cplx>().asDiagonal() * Ub;
    }
    // Lead occupation tr(Q e^{-iEt} M0 e^{iEt}) with Q = 1 - Us^dag Us.
    const Mat K = (Us.adjoint() * Us).transpose().cwiseProduct(M0);
    const cplx m0_trace = M0.trace();
    ExactTrace out;
    for (double t : times) {
        Vec ph = (E.cast<cplx>() * (-I1 * t)).array().exp();
        Mat X = Us * ph.asDiagonal();
        out.system.push_back(X * M0 * X.adjoint());
        cplx proj = ph.transpose() * (K * ph.conjugate());
        double leads_n = (m0_trace - proj).real();
        out.total_n.push_back(out.system.back().trace().real() + leads_n);
    }
    return out;
}

cplx self_energy(const LeadSpec& lead, cplx z)
{
    const cplx w = z + I1 * lead.eps;
    const double t2 = lead.tau * lead.tau;
    if (w == cplx(0.0)) throw ValidationError("self-energy evaluated at the band center on the cut");
    cplx u = 1.0 + 4.0 * t2 / (w * w);
    if (std::abs(u.imag()) < 1e-300 && u.real() <= 0.0)
        throw ValidationError("self-energy evaluated on its branch cut");
    return (lead.tau_a * lead.tau_a / (2.0 * t2)) * (std::sqrt(u) - 1.0) * w;
}

cplx self_energy_modes(const LeadSpec& lead, cplx z)
{
    auto m = lead_modes(lead);
    cplx s = 0.0;
    for (int k = 0; k < lead.N; ++k) s += m.couplings(k) * m.couplings(k) / (z + I1 * m.energies(k));
    return s;
}

Mat retarded_green(const Mat& h, const std::vector<WidebandLead>& leads, double w)
{
    Mat A = -h;
    A.diagonal().array() += w;
    for (const auto& l : leads) A(l.site - 1, l.site - 1) += 0.5 * I1 * l.Gamma;
    return A.inverse();
}

namespace {

double integrate_line(const std::function<double(double)>& f, std::vector<double> pts, double tol)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double inf = std::numeric_limits<double>::infinity();
    double err = 0.0, s = 0.0;
    s += GK::integrate(f, -inf, pts.front(), 15, tol, &err);
    for (size_t k = 0; k + 1 < pts.size(); ++k) s += GK::integrate(f, pts[k], pts[k + 1], 15, tol, &err);
    s += GK::integrate(f, pts.back(), inf, 15, tol, &err);
    if (!std::isfinite(s)) throw SolverError("frequency integral did not converge");
    return s;
}

std::vector<double> frequency_breaks(const Mat& h, double width, double scale)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    std::vector<double> pts;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        double e = es.eigenvalues()(k);
        for (double m : {0.0, -1.0, 1.0, -5.0, 5.0, -30.0, 30.0}) pts.push_back(e + m * width);
    }
    pts.push_back(-40.0 * scale);
    pts.push_back(40.0 * scale);
    return pts;
}

} // namespace

namespace {

using MatFn = std::function<Mat(double)>;

Mat kronrod(const MatFn& f, double a, double b)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const auto& x = GK::abscissa();
    const auto& w = GK::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Mat s = w[0] * f(c);
    for (size_t k = 1; k < x.size(); ++k) s += w[k] * (f(c - h * x[k]) + f(c + h * x[k]));
    return h * s;
}

// Adaptive bisection with an absolute error target.
Mat adapt(const MatFn& f, double a, double b, const Mat& whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    Mat left = kronrod(f, a, m), right = kronrod(f, m, b);
    Mat halves = left + right;
    if (max_abs(halves - whole) <= tol || depth >= 40) {
        if (depth >= 40) throw SolverError("frequency integral did not converge");
        return halves;
    }
    return adapt(f, a, m, left, 0.5 * tol, depth + 1) + adapt(f, m, b, right, 0.5 * tol, depth + 1);
}

Mat integrate_matrix(const MatFn& f, std::vector<double> pts, double scale, double tol)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double seg_tol = tol / double(pts.size() + 1);
    auto segment = [&](const MatFn& g, double a, double b) { return adapt(g, a, b, kronrod(g, a, b), seg_tol, 0); };
    // Tails mapped to [0, 1): w = p -+ scale t / (1 - t).
    MatFn upper = [&](double t) {
        double u = 1.0 - t;
        return Mat(f(pts.back() + scale * t / u) * (scale / (u * u)));
    };
    MatFn lower = [&](double t) {
        double u = 1.0 - t;
        return Mat(f(pts.front() - scale * t / u) * (scale / (u * u)));
    };
    Mat s = segment(lower, 0.0, 1.0) + segment(upper, 0.0, 1.0);
    for (size_t k = 0; k + 1 < pts.size(); ++k) s += segment(f, pts[k], pts[k + 1]);
    if (!s.allFinite()) throw SolverError("frequency integral did not converge");
    return s;
}

} // namespace

Mat wideband_steady(const Mat& h, const std::vector<WidebandLead>& leads, double tol)
{
    const Eigen::Index N = h.rows();
    require(h.cols() == N && max_abs(h - h.adjoint()) < 1e-12, "system matrix must be Hermitian");
    double Gtot = 0.0;
    for (const auto& l : leads) {
        require(l.site >= 1 && l.site <= N, "lead attached to non-existent site");
        require(l.Gamma >= 0.0, "wideband rate must be >= 0");
        require(bool(l.f), "lead needs an occupation function");
        Gtot += l.Gamma;
    }
    require(Gtot > 0.0, "wideband steady state needs at least one coupled lead");
    double scale = std::max({Gtot, h.cwiseAbs().maxCoeff(), 1.0});
    auto pts = frequency_breaks(h, std::max(Gtot, 1e-6), scale);
    MatFn integrand = [&](double w) {
        Mat G = retarded_green(h, leads, w);
        Mat C = Mat::Zero(N, N);
        for (const auto& l : leads) {
            Vec g = G.col(l.site - 1);
            C += (l.Gamma * l.f(w) / (2.0 * kPi)) * (g * g.adjoint());
        }
        return C;
    };
    Mat C = integrate_matrix(integrand, pts, scale, tol);
    return 0.5 * (C + C.adjoint());
}

double wideband_transmission(const Mat& h, const WidebandLead& left, const WidebandLead& right, double w)
{
    Mat G = retarded_green(h, {left, right}, w);
    return left.Gamma * right.Gamma * std::norm(G(left.site - 1, right.site - 1));
}

double landauer_current(const std::function<double(double)>& T, const std::function<double(double)>& fL,
                        const std::function<double(double)>& fR, std::vector<double> breakpoints, double tol)
{
    auto g = [&](double w) {
        double t = T(w);
        if (t < -1e-12 || t > 1.0 + 1e-12) throw ValidationError("transmission outside [0, 1]");
        return t * (fL(w) - fR(w));
    };
    if (breakpoints.empty()) breakpoints = {-1.0, 0.0, 1.0};
    return integrate_line(g, breakpoints, tol) / (2.0 * kPi);
}

Mat single_particle_density(const Mat& C)
{
    double n = C.trace().real();
    require(n > 0.0, "single-particle density needs nonzero occupation");
    return C.transpose() / n;
}

} // namespace ness
