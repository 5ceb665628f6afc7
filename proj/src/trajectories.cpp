// SPDX-License-Identifier: Apache-2.0
#include "ness/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace ness {

SpMat effective_hamiltonian(const GeneratorBundle& g)
{
    SpMat K(g.dim, g.dim);
    for (const auto& ch : g.channels) {
        SpMat a = ch.A;
        K += (ch.rate * 0.5) * SpMat(a.adjoint() * a);
    }
    return g.H - I1 * K;
}

namespace {

struct Channel {
    SpMat op;  // sqrt(rate) A
    SpMat rate_op;  // rate A^dag A
};

double weight(const Channel& c, const Vec& psi)
{
    return std::max(0.0, psi.dot(c.rate_op * psi).real());
}

class Worker {
public:
    Worker(const GeneratorBundle& g, const TrajectoryConfig& cfg, const std::vector<SpMat>& obs,
           const std::vector<int>& sample_steps)
        : cfg_(cfg), obs_(obs), sample_steps_(sample_steps)
    {
        for (const auto& ch : g.channels) {
            SpMat a = ch.A;
            Channel c;
            c.op = std::sqrt(ch.rate) * a;
            c.rate_op = ch.rate * SpMat(a.adjoint() * a);
            channels_.push_back(std::move(c));
        }
        Heff_ = Mat(effective_hamiltonian(g));
        Mat step = (-I1 * cfg.dt) * Heff_;
        U_ = step.exp();
        Eigen::ComplexEigenSolver<Mat> es(Heff_, true);
        if (es.info() == Eigen::Success) {
            V_ = es.eigenvectors();
            Vinv_ = V_.inverse();
            lam_ = es.eigenvalues();
            Mat check = V_ * (lam_ * (-I1 * cfg.dt)).array().exp().matrix().asDiagonal() * Vinv_;
            diagonal_ = Vinv_.allFinite() && max_abs(check - U_) < 1e-10;
        }
    }

    TrajectoryRecord run(const Vec& psi0, std::uint64_t seed, int index) const
    {
        std::seed_seq seq{std::uint32_t(seed & 0xffffffffu), std::uint32_t(seed >> 32),
                          std::uint32_t(index)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        TrajectoryRecord rec;
        rec.samples.resize(Eigen::Index(sample_steps_.size()), Eigen::Index(obs_.size()));
        Vec psi = psi0.normalized();
        const int n_steps = sample_steps_.back();
        size_t next_sample = 0;
        double threshold = uni(rng);
        std::vector<double> w(channels_.size());
        auto sample = [&](int step) {
            while (next_sample < sample_steps_.size() && sample_steps_[next_sample] == step) {
                Vec u = psi / psi.norm();
                for (size_t o = 0; o < obs_.size(); ++o)
                    rec.samples(Eigen::Index(next_sample), Eigen::Index(o)) = u.dot(obs_[o] * u).real();
                ++next_sample;
            }
        };
        auto jump = [&](double t, double r) {
            double tot = 0.0;
            for (size_t k = 0; k < channels_.size(); ++k) tot += (w[k] = weight(channels_[k], psi));
            if (tot <= 0.0) return false;
            double acc = 0.0, target = r * tot;
            size_t k = 0;
            for (; k + 1 < channels_.size(); ++k) {
                acc += w[k];
                if (target < acc) break;
            }
            while (w[k] == 0.0 && k > 0) --k;
            psi = channels_[k].op * psi;
            psi /= psi.norm();
            rec.jumps.push_back({t, int(k)});
            return true;
        };
        sample(0);
        for (int s = 1; s <= n_steps; ++s) {
            if (cfg_.scheme == TrajectoryScheme::Euler) {
                double dp = 0.0;
                for (size_t k = 0; k < channels_.size(); ++k) dp += cfg_.dt * weight(channels_[k], psi);
                double r = uni(rng);
                if (r < dp) {
                    jump(s * cfg_.dt, r / dp);
                } else {
                    psi = U_ * psi;
                    psi /= psi.norm();
                }
            } else {
                Vec next = U_ * psi;
                double t = (s - 1) * cfg_.dt, left = cfg_.dt;
                while (next.squaredNorm() <= threshold) {
                    double tau = crossing(psi, left, threshold);
                    psi = propagate(psi, tau);
                    psi /= psi.norm();
                    t += tau;
                    left -= tau;
                    jump(t, uni(rng));
                    threshold = uni(rng);
                    next = left > 0.0 ? propagate(psi, left) : psi;
                }
                psi = next;
            }
            sample(s);
        }
        if (cfg_.keep_states) rec.final_state = psi / psi.norm();
        return rec;
    }

private:
    // exp(-i H_eff tau) psi.
    Vec propagate(const Vec& psi, double tau) const
    {
        if (diagonal_) return V_ * ((lam_ * (-I1 * tau)).array().exp() * (Vinv_ * psi).array()).matrix();
        return Mat(((-I1 * tau) * Heff_).exp()) * psi;
    }

    // Time in (0, span] at which the no-jump norm reaches the threshold (norm is nonincreasing).
    double crossing(const Vec& psi, double span, double threshold) const
    {
        double lo = 0.0, hi = span;
        for (int it = 0; it < 60 && hi - lo > 1e-14 * span; ++it) {
            double mid = 0.5 * (lo + hi);
            if (propagate(psi, mid).squaredNorm() <= threshold)
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }

    const TrajectoryConfig& cfg_;
    const std::vector<SpMat>& obs_;
    const std::vector<int>& sample_steps_;
    std::vector<Channel> channels_;
    Mat Heff_, U_, V_, Vinv_;
    Vec lam_;
    bool diagonal_ = false;
};

} // namespace

EnsembleResult run_ensemble(const GeneratorBundle& g, const Vec& psi0, const TrajectoryConfig& cfg,
                            const std::vector<SpMat>& observables)
{
    require(g.gksl(), "quantum trajectories need a GKSL generator");
    require(psi0.size() == g.dim, "initial state dimension mismatch");
    require(std::abs(psi0.norm() - 1.0) < 1e-10, "initial state must be normalized");
    require(cfg.dt > 0.0 && cfg.t_final > 0.0, "dt and t_final must be > 0");
    require(cfg.n_traj >= 1, "n_traj must be >= 1");
    require(cfg.n_samples >= 1, "n_samples must be >= 1");
    require(g.dim <= 4096, "trajectory propagator limited to dimension 4096");
    for (const auto& o : observables) require(o.rows() == g.dim && o.cols() == g.dim, "observable dimension mismatch");
    double max_rate = 0.0;
    for (const auto& ch : g.channels) {
        SpMat a = ch.A;
        Mat n = Mat(SpMat(a.adjoint() * a));
        Eigen::SelfAdjointEigenSolver<Mat> es(n, Eigen::EigenvaluesOnly);
        max_rate = std::max(max_rate, ch.rate * es.eigenvalues().maxCoeff());
    }
    require(cfg.dt * max_rate <= 0.1 + 1e-12, "dt too large: dt * max_k <L_k^dag L_k> must be <= 0.1");
    const double steps_f = cfg.t_final / cfg.dt;
    const int n_steps = int(std::llround(steps_f));
    require(n_steps >= 1 && std::abs(steps_f - n_steps) < 1e-9 * std::max(1.0, steps_f),
            "t_final must be an integer multiple of dt");
    std::vector<int> sample_steps;
    for (int k = 0; k <= cfg.n_samples; ++k)
        sample_steps.push_back(int(std::llround(double(k) * n_steps / cfg.n_samples)));

    Worker worker(g, cfg, observables, sample_steps);
    EnsembleResult out;
    out.records.resize(size_t(cfg.n_traj));
    std::atomic<int> next{0};
    auto task = [&] {
        for (int i = next++; i < cfg.n_traj; i = next++) out.records[size_t(i)] = worker.run(psi0, cfg.seed, i);
    };
    int nt = std::clamp(cfg.threads, 1, cfg.n_traj);
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(task);
    task();
    for (auto& t : pool) t.join();

    const Eigen::Index ns = Eigen::Index(sample_steps.size()), no = Eigen::Index(observables.size());
    for (int s : sample_steps) out.times.push_back(s * cfg.dt);
    out.mean = RMat::Zero(ns, no);
    RMat sq = RMat::Zero(ns, no);
    for (const auto& r : out.records) {
        out.mean += r.samples;
        sq += r.samples.cwiseProduct(r.samples);
    }
    const double n = cfg.n_traj;
    out.mean /= n;
    if (cfg.n_traj > 1) {
        RMat var = (sq / n - out.mean.cwiseProduct(out.mean)) * (n / (n - 1.0));
        out.sem = (var.cwiseMax(0.0) / n).cwiseSqrt();
    } else {
        out.sem = RMat::Zero(ns, no);
    }
    return out;
}

RVec count_statistics(const std::vector<TrajectoryRecord>& records, const std::vector<int>& channels,
                      double t)
{
    require(!records.empty(), "no trajectory records");
    std::vector<int> counts;
    int nmax = 0;
    for (const auto& r : records) {
        int n = 0;
        for (const auto& e : r.jumps) {
            if (e.t > t + 1e-12) break;
            if (channels.empty() || std::find(channels.begin(), channels.end(), e.channel) != channels.end()) ++n;
        }
        counts.push_back(n);
        nmax = std::max(nmax, n);
    }
    RVec p = RVec::Zero(nmax + 1);
    for (int n : counts) p(n) += 1.0;
    return p / double(records.size());
}

void write_events(std::ostream& os, const std::vector<TrajectoryRecord>& records)
{
    auto prec = os.precision(17);
    for (size_t i = 0; i < records.size(); ++i)
        for (const auto& e : records[i].jumps)
            os << "{\"traj\":" << i << ",\"t\":" << e.t << ",\"channel\":" << e.channel << "}\n";
    os.precision(prec);
}

} // namespace ness
