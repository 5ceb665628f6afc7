// SPDX-License-Identifier: Apache-2.0
#include "ness/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ness/analysis.hpp"
#include "ness/analytic.hpp"
#include "ness/benchmarks.hpp"
#include "ness/gaussian.hpp"

namespace ness {

std::string csv_escape(const std::string& f)
{
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_number(double v, int precision)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::string to_csv(const Table& t)
{
    std::string out;
    auto line = [&](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(row[i]);
        }
        out += "\r\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

std::vector<int> fibonacci_sizes(int max)
{
    std::vector<int> out;
    int a = 1, b = 2;
    while (b <= max) {
        out.push_back(b);
        int c = a + b;
        a = b;
        b = c;
    }
    return out;
}

namespace {

template <class F>
auto parallel_map(size_t n, int threads, F f) -> std::vector<decltype(f(size_t{}))>
{
    std::vector<decltype(f(size_t{}))> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<size_t> next{0};
    auto task = [&] {
        for (size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    int nt = std::max(1, std::min<int>(threads, int(n)));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(task);
    task();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v;
    for (int k = 0; k < n; ++k) v.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
    return v;
}

struct Fmt {
    int p;
    std::string operator()(double v) const { return format_number(v, p); }
};

SiteOp density_op(const HamiltonianSpec& H)
{
    return is_spin(H) ? SiteOp::Z : SiteOp::Number;
}

std::string density_name(const HamiltonianSpec& H)
{
    return is_spin(H) ? "sz" : "n";
}

SpMat conserved_charge(const HamiltonianSpec& H)
{
    if (!is_spin(H)) return total_number(H);
    SpMat m(hilbert_dim(H), hilbert_dim(H));
    for (int i = 1; i <= H.L; ++i) m += site_operator(SiteOp::Z, i, H);
    return m;
}

HamiltonianSpec& need_model(RunConfig& cfg)
{
    if (!cfg.model) throw ValidationError("config.model: missing required section");
    return *cfg.model;
}

json fit_json(const TransportFit& f)
{
    json j;
    j["alpha"] = f.alpha;
    j["alpha_ci"] = {f.alpha_lo, f.alpha_hi};
    j["regime"] = regime_name(f.regime);
    j["window"] = {f.L_min, std::isinf(f.L_max) ? json(nullptr) : json(f.L_max)};
    j["r2"] = f.r2;
    j["nu"] = f.nu;
    j["points"] = f.points;
    j["localization_length"] = f.L0 ? json(*f.L0) : json(nullptr);
    return j;
}

json try_fit(const std::vector<double>& L, const std::vector<double>& J, std::optional<double> L_min)
{
    try {
        FitOptions o;
        o.L_min = L_min;
        return fit_json(fit_exponent(L, J, o));
    } catch (const ValidationError& e) {
        return json{{"error", e.what()}};
    }
}

RunOutput cmd_steady(RunConfig& cfg, const RunOptions& opt)
{
    const auto& H = need_model(cfg);
    Fmt f{cfg.precision};
    auto g = build_generator(cfg);
    SteadyOptions so = cfg.steady;
    if (opt.tol) so.tol = *opt.tol;
    auto ss = steady_state(g, so);
    const std::string tol = f(so.tol), res = f(ss.residual);
    RunOutput out;
    Table bonds{"steady", {"bond", "current", "residual", "tol"}, {}};
    const SiteOp d = density_op(H);
    for (int k = 1; k < H.L; ++k) {
        std::string cur = "";
        try {
            cur = f(bond_current(ss.rho, bond_hamiltonian(H, k), site_operator(d, k, H), site_operator(d, k + 1, H)));
        } catch (const ValidationError&) {
            cur = "nan";
        }
        bonds.rows.push_back({std::to_string(k), cur, res, tol});
    }
    Table prof{"profile", {"site", density_name(H), "residual", "tol"}, {}};
    for (int i = 1; i <= H.L; ++i)
        prof.rows.push_back({std::to_string(i), f(expect(ss.rho, site_operator(d, i, H))), res, tol});
    Table baths{"baths", {"bath", "site", "charge_current", "energy_current", "conserved", "residual", "tol"}, {}};
    const SpMat Q = conserved_charge(H);
    json bath_json = json::array();
    for (size_t b = 0; b < cfg.baths.size(); ++b) {
        auto jn = dissipative_current(ss.rho, g, int(b), Q);
        auto je = dissipative_current(ss.rho, g, int(b), g.H_system);
        baths.rows.push_back({std::to_string(b), std::to_string(cfg.baths[b].site), f(jn.value), f(je.value),
                              jn.conserved ? "true" : "false", res, tol});
        bath_json.push_back({{"charge_current", jn.value}, {"energy_current", je.value}});
    }
    out.tables = {bonds, prof, baths};
    out.results["residual"] = ss.residual;
    out.results["baths"] = bath_json;
    if (ss.gap) out.results["gap"] = *ss.gap;
    try {
        EntropyMode m = g.kind == GeneratorKind::GME ? EntropyMode::Global : EntropyMode::Local;
        out.results["entropy_production"] = entropy_production(ss.rho, g, m);
        out.results["entropy_mode"] = m == EntropyMode::Global ? "global" : "local";
    } catch (const ValidationError& e) {
        out.results["entropy_production"] = nullptr;
        out.results["entropy_note"] = e.what();
    }
    return out;
}

std::vector<SpMat> site_observables(const HamiltonianSpec& H, std::vector<std::string>& names)
{
    std::vector<SpMat> obs;
    for (int i = 1; i <= H.L; ++i) {
        obs.push_back(site_operator(density_op(H), i, H));
        names.push_back(density_name(H) + "_" + std::to_string(i));
    }
    return obs;
}

RunOutput cmd_evolve(RunConfig& cfg, const RunOptions& opt)
{
    const auto& H = need_model(cfg);
    Fmt f{cfg.precision};
    auto g = build_generator(cfg);
    auto times = linspace(0.0, cfg.evolve.t_final, cfg.evolve.n_times);
    EvolveOptions eo;
    if (opt.tol) eo.rtol = *opt.tol;
    eo.spectral = cfg.evolve.spectral;
    Mat rho0 = initial_density(H, cfg.evolve.initial);
    auto states = evolve(liouvillian(g), rho0, times, eo);
    std::vector<std::string> names;
    auto obs = site_observables(H, names);
    Table t{"evolve", {"t"}, {}};
    for (auto& n : names) t.header.push_back(n);
    t.header.push_back("trace");
    t.header.push_back("tol");
    for (size_t k = 0; k < times.size(); ++k) {
        std::vector<std::string> row{f(times[k])};
        for (const auto& o : obs) row.push_back(f(expect(states[k], o)));
        row.push_back(f(states[k].trace().real()));
        row.push_back(f(eo.rtol));
        t.rows.push_back(std::move(row));
    }
    RunOutput out;
    out.tables = {t};
    out.results["n_times"] = times.size();
    return out;
}

RunOutput cmd_spectrum(RunConfig& cfg, const RunOptions& opt)
{
    Fmt f{cfg.precision};
    auto g = build_generator(cfg);
    SpMat L = liouvillian(g);
    auto sp = spectrum(L, cfg.spectrum_k, true);
    const double tol = opt.tol.value_or(1e-12);
    Table t{"spectrum", {"index", "re", "im", "residual", "tol"}, {}};
    for (Eigen::Index k = 0; k < sp.values.size(); ++k) {
        Vec x = sp.right->col(k);
        double r = (L * x - sp.values(k) * x).norm() / std::max(1e-300, x.norm());
        t.rows.push_back({std::to_string(k), f(sp.values(k).real()), f(sp.values(k).imag()), f(r), f(tol)});
    }
    RunOutput out;
    out.tables = {t};
    out.results["count"] = sp.values.size();
    out.results["purely_imaginary_or_degenerate_zero"] = sp.purely_imaginary_flag;
    if (sp.values.size() >= 2) out.results["gap"] = -sp.values(1).real();
    return out;
}

RunOutput cmd_fcs(RunConfig& cfg, const RunOptions& opt)
{
    Fmt f{cfg.precision};
    auto g = build_generator(cfg);
    const Counter& c = cfg.fcs.counter;
    auto chis = linspace(cfg.fcs.chi_min, cfg.fcs.chi_max, cfg.fcs.n_chi);
    auto lam = cgf_sweep(g, c, chis);
    const double tol = opt.tol.value_or(1e-12);
    Table t{"fcs", {"chi", "re_lambda", "im_lambda", "tol"}, {}};
    for (size_t k = 0; k < chis.size(); ++k) t.rows.push_back({f(chis[k]), f(lam[k].real()), f(lam[k].imag()), f(tol)});
    RunOutput out;
    out.tables = {t};
    double m = mean_current(g, c), s = noise(g, c);
    out.results["mean"] = m;
    out.results["noise"] = s;
    out.results["fano"] = m != 0.0 ? json(s / m) : json(nullptr);
    out.results["fd_mean"] = fd_mean(g, c);
    out.results["fd_noise"] = fd_noise(g, c);
    return out;
}

RunOutput cmd_traj(RunConfig& cfg, const RunOptions& opt)
{
    const auto& H = need_model(cfg);
    Fmt f{cfg.precision};
    auto g = build_generator(cfg);
    TrajectoryConfig tc = cfg.traj.cfg;
    if (opt.seed) tc.seed = *opt.seed;
    tc.threads = opt.threads;
    Vec psi0 = initial_vector(H, cfg.traj.initial);
    std::vector<std::string> names;
    auto obs = site_observables(H, names);
    auto res = run_ensemble(g, psi0, tc, obs);
    Table t{"traj", {"t"}, {}};
    for (auto& n : names) {
        t.header.push_back(n + "_mean");
        t.header.push_back(n + "_sem");
    }
    t.header.push_back("dt");
    for (size_t k = 0; k < res.times.size(); ++k) {
        std::vector<std::string> row{f(res.times[k])};
        for (size_t o = 0; o < obs.size(); ++o) {
            row.push_back(f(res.mean(Eigen::Index(k), Eigen::Index(o))));
            row.push_back(f(res.sem(Eigen::Index(k), Eigen::Index(o))));
        }
        row.push_back(f(tc.dt));
        t.rows.push_back(std::move(row));
    }
    RunOutput out;
    out.tables = {t};
    size_t jumps = 0;
    for (const auto& r : res.records) jumps += r.jumps.size();
    out.results["seed"] = tc.seed;
    out.results["n_traj"] = tc.n_traj;
    out.results["total_jumps"] = jumps;
    out.results["jump_rate"] = double(jumps) / (double(tc.n_traj) * tc.t_final);
    if (cfg.traj.events) {
        std::ostringstream os;
        write_events(os, res.records);
        out.files.push_back({"events.ndjson", os.str()});
    }
    return out;
}

struct GaussPoint {
    double current = 0.0, residual = 0.0, analytic = std::nan("");
};

GaussPoint chain_point(double J, int L, const PotentialSpec& pot, double gamma, double f1, double fL, double Gamma)
{
    HamiltonianSpec H;
    H.family = Family::TightBinding;
    H.L = L;
    H.J = J;
    H.potential = pot;
    Mat h = single_particle_matrix(H);
    BathSpec a;
    a.site = 1;
    a.gamma = gamma;
    a.target = f1;
    BathSpec b = a;
    b.site = L;
    b.target = fL;
    auto sys = build_lyapunov(h, {a, b});
    if (Gamma > 0.0) sys = with_dephasing(sys, Gamma);
    auto st = solve_steady(sys);
    GaussPoint p;
    p.current = covariance_current(st.C, h, 1);
    p.residual = st.residual;
    return p;
}

RunOutput cmd_scan(RunConfig& cfg, const std::string& target, const RunOptions& opt)
{
    Fmt f{cfg.precision};
    ScanSettings s = cfg.scan;
    if (!target.empty()) {
        if (cfg.raw.contains("scan") && cfg.raw["scan"].contains("kind") && s.kind != target)
            throw ValidationError("config.scan.kind: '" + s.kind + "' conflicts with command-line scan '" + target + "'");
        s.kind = target;
    }
    if (s.kind != "sizes" && s.kind != "fibonacci" && s.kind != "dephasing" && s.kind != "aah")
        throw ValidationError("unknown scan '" + s.kind + "' (expected sizes, fibonacci, dephasing, aah)");
    const std::string tol = f(opt.tol.value_or(1e-12));
    RunOutput out;
    if (s.kind == "sizes") {
        auto& H0 = need_model(cfg);
        require(!s.sizes.empty(), "config.scan.sizes: required for a sizes scan");
        require(!cfg.baths.empty(), "config.baths: a sizes scan needs at least one bath");
        auto pts = parallel_map(s.sizes.size(), opt.threads, [&](size_t i) {
            RunConfig c = cfg;
            c.model->L = s.sizes[i];
            for (auto& b : c.baths)
                if (b.site == H0.L) b.site = s.sizes[i];
            auto g = build_generator(c);
            auto ss = steady_state(g, cfg.steady);
            auto fl = dissipative_current(ss.rho, g, 0, conserved_charge(*c.model));
            return std::pair<double, double>{fl.value, ss.residual};
        });
        Table t{"scan_sizes", {"family", "L", "current", "residual", "tol"}, {}};
        std::vector<double> Ls, Js;
        for (size_t i = 0; i < pts.size(); ++i) {
            t.rows.push_back({"sizes", std::to_string(s.sizes[i]), f(pts[i].first), f(pts[i].second), tol});
            Ls.push_back(s.sizes[i]);
            Js.push_back(std::abs(pts[i].first));
        }
        out.tables = {t};
        out.results["fit"] = try_fit(Ls, Js, s.fit_L_min);
        return out;
    }
    std::vector<double> values = s.values;
    std::vector<int> sizes = s.sizes;
    if (s.kind == "fibonacci") {
        if (values.empty()) values = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
        if (sizes.empty()) sizes = fibonacci_sizes(610);
    } else if (s.kind == "aah") {
        if (values.empty()) values = {0.5, 1.0, 1.5};
        if (sizes.empty()) sizes = {8, 16, 32, 64, 128, 256};
    } else {
        if (values.empty()) values = {1.0};
        if (sizes.empty()) sizes = {50, 100, 150, 200, 250, 300, 350, 400};
    }
    struct Job {
        double v;
        int L;
    };
    std::vector<Job> jobs;
    for (double v : values)
        for (int L : sizes) jobs.push_back({v, L});
    auto pts = parallel_map(jobs.size(), opt.threads, [&](size_t i) {
        const Job& j = jobs[i];
        PotentialSpec pot;
        double Gamma = 0.0;
        if (s.kind == "fibonacci") {
            pot.kind = PotentialSpec::Kind::Fibonacci;
            pot.h = j.v;
        } else if (s.kind == "aah") {
            pot.kind = PotentialSpec::Kind::AAH;
            pot.lambda = j.v;
        } else {
            Gamma = j.v;
        }
        auto p = chain_point(s.J, j.L, pot, s.gamma, s.f1, s.fL, Gamma);
        if (s.kind == "dephasing") p.analytic = xx_dephasing_current(s.gamma, Gamma, s.J, j.L, s.f1, s.fL);
        return p;
    });
    const std::string vname = s.kind == "fibonacci" ? "h" : s.kind == "aah" ? "lambda" : "Gamma";
    Table t{"scan_" + s.kind, {"family", vname, "L", "current"}, {}};
    if (s.kind == "dephasing") t.header.push_back("analytic");
    t.header.push_back("residual");
    t.header.push_back("tol");
    json fits = json::array();
    for (double v : values) {
        std::vector<double> Ls, Js;
        for (size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].v != v) continue;
            std::vector<std::string> row{s.kind, f(v), std::to_string(jobs[i].L), f(pts[i].current)};
            if (s.kind == "dephasing") row.push_back(f(pts[i].analytic));
            row.push_back(f(pts[i].residual));
            row.push_back(tol);
            t.rows.push_back(std::move(row));
            Ls.push_back(jobs[i].L);
            Js.push_back(std::abs(pts[i].current));
        }
        json fj = try_fit(Ls, Js, s.fit_L_min);
        fj[vname] = v;
        fj["family"] = s.kind;
        fits.push_back(fj);
    }
    out.tables = {t};
    out.results["fits"] = fits;
    return out;
}

RunOutput bench_validity_map(const RunConfig& cfg, const RunOptions& opt)
{
    Fmt f{cfg.precision};
    auto grid = [](std::vector<double> v) {
        if (v.empty())
            for (int k = 0; k < 10; ++k) v.push_back(0.005 + 0.01 * k);
        return v;
    };
    const auto hs = grid(cfg.benchmark.h), Gs = grid(cfg.benchmark.Gamma);
    std::vector<std::pair<double, double>> jobs;
    for (double h : hs)
        for (double G : Gs) jobs.push_back({h, G});
    auto pts = parallel_map(jobs.size(), opt.threads, [&](size_t i) {
        DoubleDotSpec s;
        s.hc = jobs[i].first;
        s.Gamma = jobs[i].second;
        return validity_point(s);
    });
    Table t{"benchmark_validity_map",
            {"h", "Gamma", "D_LME", "D_GME", "D_RED", "I_EX", "I_LME", "I_GME", "I_RED", "residual", "tol"},
            {}};
    const std::string tol = f(opt.tol.value_or(1e-8));
    bool red_ok = true, lme_ok = true, gme_ok = true;
    for (const auto& p : pts) {
        t.rows.push_back({f(p.hc), f(p.Gamma), f(p.D_LME), f(p.D_GME), f(p.D_RED), f(p.I_EX), f(p.I_LME), f(p.I_GME),
                          f(p.I_RED), f(p.residual), tol});
        red_ok = red_ok && p.D_RED <= std::min(p.D_LME, p.D_GME) + 0.02;
        if (p.hc < 0.05) lme_ok = lme_ok && p.D_LME < p.D_GME;
        if (p.hc > 0.05 && p.Gamma < 0.01) gme_ok = gme_ok && p.D_GME < p.D_LME;
    }
    RunOutput out;
    out.tables = {t};
    out.results["redfield_best_within_0.02"] = red_ok;
    out.results["lme_better_small_h"] = lme_ok;
    out.results["gme_better_large_h_small_Gamma"] = gme_ok;
    return out;
}

RunOutput bench_lead_relaxation(const RunConfig& cfg, const RunOptions&)
{
    Fmt f{cfg.precision};
    std::vector<int> leads = cfg.benchmark.leads.empty() ? std::vector<int>{10, 30, 200} : cfg.benchmark.leads;
    const int ref = cfg.benchmark.reference;
    auto times = linspace(0.0, cfg.benchmark.t_final, cfg.benchmark.n_times);
    RelaxationSpec s;
    std::vector<std::vector<double>> curves;
    for (int N : leads) curves.push_back(dot_occupation_exact(s, N, times));
    auto reference = dot_occupation_exact(s, ref, times);
    auto lme = dot_occupation_lme(s, times);
    Table t{"benchmark_lead_relaxation", {"t"}, {}};
    for (int N : leads) t.header.push_back("exact_N" + std::to_string(N));
    t.header.push_back("exact_N" + std::to_string(ref));
    t.header.push_back("lme");
    t.header.push_back("tol");
    for (size_t k = 0; k < times.size(); ++k) {
        std::vector<std::string> row{f(times[k])};
        for (const auto& c : curves) row.push_back(f(c[k]));
        row.push_back(f(reference[k]));
        row.push_back(f(lme[k]));
        row.push_back("1e-09");
        t.rows.push_back(std::move(row));
    }
    RunOutput out;
    out.tables = {t};
    json dev = json::object();
    for (size_t i = 0; i < leads.size(); ++i) {
        double before = 0.0, all = 0.0;
        for (size_t k = 0; k < times.size(); ++k) {
            double d = std::abs(curves[i][k] - reference[k]);
            all = std::max(all, d);
            if (times[k] <= leads[i] / (2.0 * s.tau)) before = std::max(before, d);
        }
        dev[std::to_string(leads[i])] = {{"max_deviation", all}, {"max_deviation_before_onset", before}};
    }
    double lme_dev = 0.0;
    for (size_t k = 0; k < times.size(); ++k)
        if (times[k] > 5.0 / s.eps) lme_dev = std::max(lme_dev, std::abs(lme[k] - reference[k]));
    out.results["recurrence"] = dev;
    out.results["lme_max_deviation_after_5"] = lme_dev;
    out.results["final_occupation"] = reference.back();
    return out;
}

RunOutput bench_chain(const RunConfig& cfg, const RunOptions& opt, bool heisenberg)
{
    Fmt f{cfg.precision};
    std::vector<int> sizes = cfg.benchmark.sizes;
    if (sizes.empty()) sizes = heisenberg ? std::vector<int>{2, 3, 4} : std::vector<int>{2, 3, 4, 5, 6};
    std::vector<double> gammas = cfg.benchmark.gammas.empty() ? std::vector<double>{0.5, 1.0, 2.0} : cfg.benchmark.gammas;
    std::vector<std::pair<double, int>> jobs;
    for (double g : gammas)
        for (int L : sizes) jobs.push_back({g, L});
    auto pts = parallel_map(jobs.size(), opt.threads, [&](size_t i) {
        const auto [gam, L] = jobs[i];
        HamiltonianSpec H;
        H.family = Family::XXZ;
        H.L = L;
        H.J = 1.0;
        H.Delta = heisenberg ? 1.0 : 0.0;
        BathSpec a;
        a.statistics = BathStatistics::Magnetization;
        a.site = 1;
        a.gamma = gam;
        a.target = 1.0;
        BathSpec b = a;
        b.site = L;
        b.target = -1.0;
        auto g = build_lme(H, {a, b});
        auto ss = steady_state(g);
        double cur = bond_current(ss.rho, bond_hamiltonian(H, 1), site_operator(SiteOp::Z, 1, H),
                                  site_operator(SiteOp::Z, 2, H));
        double ref = heisenberg ? heisenberg_mps_current(gam, L) : xx_current(gam, 1.0, 1.0, 0.0);
        return std::array<double, 3>{cur, ref, ss.residual};
    });
    Table t{heisenberg ? "benchmark_heisenberg" : "benchmark_xx",
            {"gamma", "L", "current", "analytic", "abs_error", "residual", "tol"},
            {}};
    double worst = 0.0;
    for (size_t i = 0; i < jobs.size(); ++i) {
        double err = std::abs(pts[i][0] - pts[i][1]);
        worst = std::max(worst, err);
        t.rows.push_back({f(jobs[i].first), std::to_string(jobs[i].second), f(pts[i][0]), f(pts[i][1]), f(err),
                          f(pts[i][2]), f(opt.tol.value_or(1e-12))});
    }
    RunOutput out;
    out.tables = {t};
    out.results["max_abs_error"] = worst;
    return out;
}

RunOutput cmd_benchmark(RunConfig& cfg, const std::string& target, const RunOptions& opt)
{
    std::string name = target.empty() ? cfg.benchmark.name : target;
    if (!target.empty() && !cfg.benchmark.name.empty() && cfg.benchmark.name != target)
        throw ValidationError("config.benchmark.name: '" + cfg.benchmark.name + "' conflicts with command-line benchmark '" + target + "'");
    if (name == "validity-map") return bench_validity_map(cfg, opt);
    if (name == "lead-relaxation") return bench_lead_relaxation(cfg, opt);
    if (name == "xx") return bench_chain(cfg, opt, false);
    if (name == "heisenberg") return bench_chain(cfg, opt, true);
    throw ValidationError("unknown benchmark '" + name + "' (expected validity-map, lead-relaxation, xx, heisenberg)");
}

} // namespace

RunOutput run_command(const std::string& command, const std::string& target, RunConfig cfg, const RunOptions& opt)
{
    require(opt.threads >= 1, "--threads must be >= 1");
    if (opt.tol) require(*opt.tol > 0.0, "--tol must be > 0");
    if (opt.seed && cfg.model && cfg.model->potential.kind == PotentialSpec::Kind::Disorder)
        cfg.model->potential.seed = *opt.seed;
    if (command != "scan" && command != "benchmark")
        require(target.empty(), "subcommand '" + command + "' takes no positional argument");
    if (command == "steady") return cmd_steady(cfg, opt);
    if (command == "evolve") return cmd_evolve(cfg, opt);
    if (command == "spectrum") return cmd_spectrum(cfg, opt);
    if (command == "fcs") return cmd_fcs(cfg, opt);
    if (command == "traj") return cmd_traj(cfg, opt);
    if (command == "scan") return cmd_scan(cfg, target, opt);
    if (command == "benchmark") return cmd_benchmark(cfg, target, opt);
    throw ValidationError("unknown subcommand '" + command + "'");
}

std::vector<std::string> write_outputs(const RunOutput& out, const std::string& command, const std::string& target,
                                       const RunConfig& cfg, const RunOptions& opt)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + opt.out_dir + "': " + ec.message());
    std::vector<std::string> files;
    auto put = [&](const std::string& name, const std::string& body) {
        fs::path p = fs::path(opt.out_dir) / name;
        std::ofstream os(p, std::ios::binary);
        if (!os) throw ValidationError("cannot write '" + p.string() + "'");
        os << body;
        files.push_back(name);
    };
    for (const auto& t : out.tables) put(t.name + ".csv", to_csv(t));
    for (const auto& [name, body] : out.files) put(name, body);
    json m;
    m["schema_version"] = kManifestSchema;
    m["tool"] = "ness";
    m["version"] = kVersion;
    m["command"] = command;
    if (!target.empty()) m["target"] = target;
    m["config_path"] = opt.config_path;
    m["config"] = cfg.raw;
    m["threads"] = opt.threads;
    m["seed"] = opt.seed ? json(*opt.seed) : json(nullptr);
    m["tol"] = opt.tol ? json(*opt.tol) : json(nullptr);
    m["versions"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", __VERSION__},
                     {"cxx", __cplusplus}};
    m["outputs"] = files;
    m["results"] = out.results;
    m["status"] = "ok";
    std::ofstream os(std::filesystem::path(opt.out_dir) / "manifest.json");
    os << m.dump(2) << '\n';
    files.push_back("manifest.json");
    return files;
}

} // namespace ness
