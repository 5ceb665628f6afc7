// SPDX-License-Identifier: Apache-2.0
#include "ness/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace ness {

namespace {

void check_baths(const HamiltonianSpec& H, const std::vector<BathSpec>& baths)
{
    for (const auto& b : baths) {
        require(b.site >= 1 && b.site <= H.L,
                "bath attached to non-existent site " + std::to_string(b.site));
        require(b.gamma >= 0.0, "bath rate gamma must be >= 0");
    }
}

struct Eigen_ {
    RVec E;
    Mat V;
};

Eigen_ diagonalize(const SpMat& H)
{
    Eigen::SelfAdjointEigenSolver<Mat> es{Mat(H)};
    if (es.info() != Eigen::Success) throw SolverError("Hamiltonian eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

// Bohr components: op = sum_w op_w with [H, op_w] = -w op_w (w = E_n - E_m for |m><n|).
struct Component {
    double w;
    Mat op_eig;  // in the eigenbasis
};

std::vector<Component> bohr_components(const Mat& op_eig, const RVec& E, double tol)
{
    struct Entry {
        double w;
        Eigen::Index m, n;
    };
    std::vector<Entry> entries;
    for (Eigen::Index n = 0; n < op_eig.cols(); ++n)
        for (Eigen::Index m = 0; m < op_eig.rows(); ++m)
            if (std::abs(op_eig(m, n)) > 1e-14) entries.push_back({E(n) - E(m), m, n});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.w < b.w; });
    std::vector<Component> out;
    size_t k = 0;
    while (k < entries.size()) {
        size_t j = k;
        double sum = 0.0;
        Mat part = Mat::Zero(op_eig.rows(), op_eig.cols());
        while (j < entries.size() && entries[j].w - entries[k].w <= tol) {
            part(entries[j].m, entries[j].n) = op_eig(entries[j].m, entries[j].n);
            sum += entries[j].w;
            ++j;
        }
        out.push_back({sum / double(j - k), part});
        k = j;
    }
    return out;
}

double default_tol(const RVec& E)
{
    double range = E.maxCoeff() - E.minCoeff();
    return 1e-9 * (range > 0.0 ? range : 1.0);
}

SpMat from_eig(const Mat& V, const Mat& op_eig)
{
    return to_sparse(V * op_eig * V.adjoint(), 1e-15);
}

bool finite_support(const BathSpec& b)
{
    return b.sd && b.sd->support().has_value();
}

} // namespace

bool GeneratorBundle::gksl() const
{
    for (const auto& c : channels)
        if (c.paired || c.rate < 0.0) return false;
    return true;
}

double local_frequency(const HamiltonianSpec& H, const BathSpec& b)
{
    if (b.omega) return *b.omega;
    if (H.family == Family::TightBinding) return single_particle_matrix(H)(b.site - 1, b.site - 1).real();
    return 2.0 * potential_values(H.potential, H.L)(b.site - 1);
}

GeneratorBundle make_bundle(const SpMat& H, const std::vector<SpMat>& jumps,
                            const std::vector<double>& rates)
{
    require(H.rows() == H.cols(), "Hamiltonian must be square");
    require(rates.empty() || rates.size() == jumps.size(), "one rate per jump operator");
    GeneratorBundle g;
    g.kind = GeneratorKind::Custom;
    g.H = H;
    g.H_system = H;
    g.dim = H.rows();
    for (size_t k = 0; k < jumps.size(); ++k) {
        require(jumps[k].rows() == g.dim && jumps[k].cols() == g.dim, "jump operator dimension mismatch");
        JumpChannel ch;
        ch.A = ch.B = jumps[k];
        ch.rate = rates.empty() ? 1.0 : rates[k];
        require(ch.rate >= 0.0, "GKSL rates must be >= 0");
        ch.label = "L" + std::to_string(k);
        g.channels.push_back(std::move(ch));
    }
    return g;
}

GeneratorBundle build_lme(const HamiltonianSpec& H, const std::vector<BathSpec>& baths)
{
    check_baths(H, baths);
    GeneratorBundle g;
    g.kind = GeneratorKind::LME;
    g.H = build_hamiltonian(H);
    g.H_system = g.H;
    g.dim = g.H.rows();
    g.model = H;
    g.baths = baths;
    for (size_t nu = 0; nu < baths.size(); ++nu) {
        const auto& b = baths[nu];
        double w = local_frequency(H, b);
        double f = occupation(b, w);
        SpMat a = coupling_operator(H, b.site);
        SpMat ad = a.adjoint();
        double out_rate, in_rate;
        if (is_bosonic(H)) {
            require(b.statistics != BathStatistics::Fermion, "fermionic bath on bosonic chain");
            out_rate = b.gamma * (1.0 + f);
            in_rate = b.gamma * f;
        } else {
            require(f >= 0.0 && f <= 1.0, "occupation target must lie in [0, 1]");
            out_rate = b.gamma * (1.0 - f);
            in_rate = b.gamma * f;
        }
        JumpChannel lo;
        lo.A = lo.B = a;
        lo.rate = out_rate;
        lo.bath = int(nu);
        lo.particle = -1.0;
        lo.energy = -w;
        lo.label = "bath" + std::to_string(nu) + ":out";
        JumpChannel hi = lo;
        hi.A = hi.B = ad;
        hi.rate = in_rate;
        hi.particle = 1.0;
        hi.energy = w;
        hi.label = "bath" + std::to_string(nu) + ":in";
        g.channels.push_back(std::move(lo));
        g.channels.push_back(std::move(hi));
    }
    return g;
}

GeneratorBundle build_gme(const HamiltonianSpec& H, const std::vector<BathSpec>& baths,
                          const GmeOptions& opt)
{
    check_baths(H, baths);
    for (const auto& b : baths) {
        require(b.sd.has_value(), "GME bath needs a spectral density");
        require(b.statistics != BathStatistics::Magnetization, "GME needs thermal baths");
    }
    GeneratorBundle g;
    g.kind = GeneratorKind::GME;
    g.H_system = build_hamiltonian(H);
    g.dim = g.H_system.rows();
    g.model = H;
    g.baths = baths;
    auto eig = diagonalize(g.H_system);
    const double tol = opt.secular_tol.value_or(default_tol(eig.E));
    g.H = g.H_system;
    for (size_t nu = 0; nu < baths.size(); ++nu) {
        const auto& b = baths[nu];
        Mat HLS = Mat::Zero(g.dim, g.dim);
        Mat a_eig = eig.V.adjoint() * Mat(coupling_operator(H, b.site)) * eig.V;
        for (const auto& comp : bohr_components(a_eig, eig.E, tol)) {
            auto r = golden_rule_rates(*b.sd, b, comp.w);
            SpMat aw = from_eig(eig.V, comp.op_eig);
            if (r.emit > 0.0) {
                JumpChannel ch;
                ch.A = ch.B = aw;
                ch.rate = r.emit;
                ch.bath = int(nu);
                ch.particle = -1.0;
                ch.energy = -comp.w;
                ch.label = "bath" + std::to_string(nu) + ":emit@" + std::to_string(comp.w);
                g.channels.push_back(std::move(ch));
            }
            if (r.absorb > 0.0) {
                JumpChannel ch;
                ch.A = ch.B = SpMat(aw.adjoint());
                ch.rate = r.absorb;
                ch.bath = int(nu);
                ch.particle = 1.0;
                ch.energy = comp.w;
                ch.label = "bath" + std::to_string(nu) + ":absorb@" + std::to_string(comp.w);
                g.channels.push_back(std::move(ch));
            }
            if (opt.lamb_shift && finite_support(b)) {
                auto [se, sa] = lamb_coefficients(*b.sd, b, comp.w);
                Mat o = comp.op_eig;
                HLS += se * (o.adjoint() * o) - sa * (o * o.adjoint());
            }
        }
        g.bath_H.push_back(to_sparse(eig.V * HLS * eig.V.adjoint(), 1e-15));
        g.H += g.bath_H.back();
    }
    return g;
}

GeneratorBundle build_redfield(const HamiltonianSpec& H, const std::vector<BathSpec>& baths,
                               const RedfieldOptions& opt)
{
    check_baths(H, baths);
    for (const auto& b : baths) {
        require(b.sd.has_value(), "Redfield bath needs a spectral density");
        require(b.statistics != BathStatistics::Magnetization, "Redfield needs thermal baths");
        if (opt.principal_value)
            require(finite_support(b), "principal values need a spectral density with finite support");
    }
    GeneratorBundle g;
    g.kind = GeneratorKind::Redfield;
    g.H_system = build_hamiltonian(H);
    g.dim = g.H_system.rows();
    g.model = H;
    g.baths = baths;
    // Energy weights follow the microscopic prescription only for the worked double-dot case.
    g.energy_counting = H.family == Family::TightBinding && H.statistics == Statistics::Fermion &&
                        H.L == 2 && !opt.principal_value;
    auto eig = diagonalize(g.H_system);
    const double tol = opt.secular_tol.value_or(default_tol(eig.E));
    const Eigen::Index d = g.dim;
    g.H = g.H_system;
    for (size_t nu = 0; nu < baths.size(); ++nu) {
        const auto& b = baths[nu];
        Mat correction = Mat::Zero(d, d);
        SpMat a = coupling_operator(H, b.site);
        SpMat ad = a.adjoint();
        Mat a_eig = eig.V.adjoint() * Mat(a) * eig.V;
        Mat ad_eig = a_eig.adjoint();
        // X_mn = a_mn [emit(w)/2 + i S_e(w)], w = E_n - E_m.
        // Y_mn = (a^dag)_mn [absorb(w)/2 - i S_a(w)], w = E_m - E_n.
        Mat X = Mat::Zero(d, d), Y = Mat::Zero(d, d);
        for (Eigen::Index n = 0; n < d; ++n)
            for (Eigen::Index m = 0; m < d; ++m) {
                if (std::abs(a_eig(m, n)) > 1e-14) {
                    double w = eig.E(n) - eig.E(m);
                    cplx c = 0.5 * golden_rule_rates(*b.sd, b, w).emit;
                    if (opt.principal_value) c += I1 * lamb_coefficients(*b.sd, b, w).first;
                    X(m, n) = c * a_eig(m, n);
                }
                if (std::abs(ad_eig(m, n)) > 1e-14) {
                    double w = eig.E(m) - eig.E(n);
                    cplx c = 0.5 * golden_rule_rates(*b.sd, b, w).absorb;
                    if (opt.principal_value) c -= I1 * lamb_coefficients(*b.sd, b, w).second;
                    Y(m, n) = c * ad_eig(m, n);
                }
            }
        correction += 0.5 * I1 * (X.adjoint() * a_eig - ad_eig * X);
        correction += 0.5 * I1 * (Y.adjoint() * ad_eig - a_eig * Y);
        auto push = [&](const SpMat& A, const SpMat& B, double particle, double energy,
                        const std::string& tag) {
            JumpChannel ch;
            ch.A = A;
            ch.B = B;
            ch.rate = 1.0;
            ch.paired = true;
            ch.bath = int(nu);
            ch.particle = particle;
            ch.energy = energy;
            ch.label = "bath" + std::to_string(nu) + ":" + tag;
            g.channels.push_back(std::move(ch));
        };
        for (const auto& comp : bohr_components(X, eig.E, tol)) {
            SpMat Xw = from_eig(eig.V, comp.op_eig);
            push(Xw, a, -1.0, -comp.w, "X@" + std::to_string(comp.w));
            push(a, Xw, -1.0, -comp.w, "Xt@" + std::to_string(comp.w));
        }
        for (const auto& comp : bohr_components(Y, eig.E, tol)) {
            SpMat Yw = from_eig(eig.V, comp.op_eig);
            push(Yw, ad, 1.0, -comp.w, "Y@" + std::to_string(-comp.w));
            push(ad, Yw, 1.0, -comp.w, "Yt@" + std::to_string(-comp.w));
        }
        g.bath_H.push_back(to_sparse(eig.V * correction * eig.V.adjoint(), 1e-15));
        g.H += g.bath_H.back();
    }
    return g;
}

GeneratorBundle add_dephasing(const GeneratorBundle& g, double Gamma, std::vector<int> sites)
{
    require(Gamma >= 0.0, "dephasing rate must be >= 0");
    if (Gamma == 0.0) return g;
    require(g.model.has_value(), "dephasing needs a bundle built from a model");
    const auto& H = *g.model;
    if (sites.empty())
        for (int i = 1; i <= H.L; ++i) sites.push_back(i);
    GeneratorBundle out = g;
    for (int i : sites) {
        require(i >= 1 && i <= H.L, "dephasing site out of range");
        JumpChannel ch;
        ch.A = ch.B = is_spin(H) ? site_operator(SiteOp::Z, i, H) : site_operator(SiteOp::Number, i, H);
        ch.rate = Gamma;
        ch.label = "dephasing" + std::to_string(i);
        out.channels.push_back(std::move(ch));
    }
    return out;
}

double counting_weight(const JumpChannel& ch, const Counter& c)
{
    switch (c.kind) {
    case CounterKind::Particle:
        return ch.bath == c.bath ? ch.particle : 0.0;
    case CounterKind::Energy:
        return ch.bath == c.bath ? ch.energy : 0.0;
    case CounterKind::Activity:
        return 1.0;
    }
    return 0.0;
}

GeneratorBundle tilt(const GeneratorBundle& g, const Counter& c, double chi)
{
    if (c.kind != CounterKind::Activity)
        require(c.bath >= 0 && c.bath < int(g.baths.size()), "counter refers to a non-existent bath");
    if (c.kind == CounterKind::Energy && !g.energy_counting)
        throw ValidationError(
            "energy counting on a non-secular generator is not defined phenomenologically; "
            "microscopic weights exist only for the fermionic double dot without principal values");
    if (c.kind == CounterKind::Activity)
        require(g.gksl(), "activity counting needs a GKSL generator");
    GeneratorBundle out = g;
    if (chi == 0.0) return out;
    for (auto& ch : out.channels) {
        double w = counting_weight(ch, c);
        if (w != 0.0) ch.phase *= std::exp(I1 * (chi * w));
    }
    return out;
}

std::string dump(const GeneratorBundle& g)
{
    std::ostringstream os;
    os.precision(17);
    auto put = [&](const SpMat& m) {
        for (int k = 0; k < m.outerSize(); ++k)
            for (SpMat::InnerIterator it(m, k); it; ++it)
                os << "  " << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' '
                   << it.value().imag() << '\n';
    };
    os << "dim " << g.dim << '\n' << "H\n";
    put(g.H);
    for (const auto& ch : g.channels) {
        os << "channel " << ch.label << " rate " << ch.rate << " bath " << ch.bath << " particle "
           << ch.particle << " energy " << ch.energy << '\n' << " A\n";
        put(ch.A);
        if (ch.paired) {
            os << " B\n";
            put(ch.B);
        }
    }
    return os.str();
}

} // namespace ness
