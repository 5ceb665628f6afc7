// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ness/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kSolver = 3;

struct Args {
    std::string config, out = "out", target;
    int threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Steady-state and transport solvers for open quantum chains"};
    app.set_version_flag("--version", ness::kVersion);
    app.require_subcommand(1);
    Args a;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"steady", "steady state, bond currents, profile, bath currents"},
        {"evolve", "time evolution of site observables"},
        {"spectrum", "Liouvillian rapidities"},
        {"fcs", "counting statistics: CGF sweep, mean current, noise"},
        {"traj", "quantum-trajectory ensemble"},
        {"scan", "parameter and system-size scans (sizes, fibonacci, dephasing, aah)"},
        {"benchmark", "reference benchmarks (validity-map, lead-relaxation, xx, heisenberg)"},
    };
    for (const auto& [name, help] : commands) {
        auto* sc = app.add_subcommand(name, help);
        const bool named = name == "scan" || name == "benchmark";
        auto* cfg = sc->add_option("--config", a.config, "JSON configuration file");
        if (named) sc->add_option("target", a.target, "scan kind or benchmark name");
        else cfg->required();
        sc->add_option("--out", a.out, "output directory")->capture_default_str();
        sc->add_option("--threads", a.threads, "worker threads")->capture_default_str();
        sc->add_option("--seed", a.seed, "random seed override");
        sc->add_option("--tol", a.tol, "solver tolerance override");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        ness::RunConfig cfg;
        if (!a.config.empty()) cfg = ness::load_config(a.config);
        else if (a.target.empty())
            throw ness::ValidationError("subcommand '" + command + "' needs --config or a positional name");
        ness::RunOptions opt;
        opt.out_dir = a.out;
        opt.config_path = a.config;
        opt.threads = a.threads;
        opt.seed = a.seed;
        opt.tol = a.tol;
        auto out = ness::run_command(command, a.target, cfg, opt);
        auto files = ness::write_outputs(out, command, a.target, cfg, opt);
        for (const auto& f : files) std::cout << a.out << '/' << f << '\n';
        return kOk;
    } catch (const ness::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const ness::json::exception& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const ness::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolver;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolver;
    }
}
