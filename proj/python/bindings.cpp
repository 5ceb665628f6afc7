// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ness/analysis.hpp"
#include "ness/analytic.hpp"
#include "ness/fcs.hpp"
#include "ness/gaussian.hpp"
#include "ness/liouville.hpp"
#include "ness/runner.hpp"
#include "ness/trajectories.hpp"

namespace py = pybind11;
using namespace ness;

namespace {

py::dict run(const std::string& command, const std::string& config, const std::string& target,
             const std::string& out_dir, int threads, std::optional<std::uint64_t> seed, std::optional<double> tol,
             bool write)
{
    RunOptions opt;
    opt.config_path = config;
    opt.out_dir = out_dir;
    opt.threads = threads;
    opt.seed = seed;
    opt.tol = tol;
    RunConfig cfg = load_config(config);
    RunOutput out = run_command(command, target, cfg, opt);
    py::dict d;
    d["results"] = py::module_::import("json").attr("loads")(out.results.dump());
    py::dict tables;
    for (const auto& t : out.tables) tables[py::str(t.name)] = to_csv(t);
    d["tables"] = tables;
    if (write) d["files"] = write_outputs(out, command, target, cfg, opt);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Open-quantum-system transport solvers";
    m.attr("__version__") = kVersion;

    static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
    static py::exception<SolverError> solver(m, "SolverError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            validation(e.what());
        } catch (const SolverError& e) {
            solver(e.what());
        }
    });

    py::enum_<Family>(m, "Family")
        .value("XXZ", Family::XXZ)
        .value("XYZ", Family::XYZ)
        .value("TightBinding", Family::TightBinding);
    py::enum_<Statistics>(m, "Statistics").value("Fermion", Statistics::Fermion).value("Boson", Statistics::Boson);
    py::enum_<PotentialSpec::Kind>(m, "PotentialKind")
        .value("Uniform", PotentialSpec::Kind::Uniform)
        .value("Disorder", PotentialSpec::Kind::Disorder)
        .value("AAH", PotentialSpec::Kind::AAH)
        .value("Fibonacci", PotentialSpec::Kind::Fibonacci);
    py::enum_<SiteOp>(m, "SiteOp")
        .value("X", SiteOp::X)
        .value("Y", SiteOp::Y)
        .value("Z", SiteOp::Z)
        .value("Plus", SiteOp::Plus)
        .value("Minus", SiteOp::Minus)
        .value("Number", SiteOp::Number)
        .value("Annihilate", SiteOp::Annihilate)
        .value("Create", SiteOp::Create);

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def(py::init<>())
        .def_readwrite("kind", &PotentialSpec::kind)
        .def_readwrite("h", &PotentialSpec::h)
        .def_readwrite("seed", &PotentialSpec::seed)
        .def_readwrite("lam", &PotentialSpec::lambda)
        .def_readwrite("alphaQ", &PotentialSpec::alphaQ)
        .def_readwrite("betaQ", &PotentialSpec::betaQ)
        .def_readwrite("phi", &PotentialSpec::phi);

    py::class_<HamiltonianSpec>(m, "HamiltonianSpec")
        .def(py::init<>())
        .def_readwrite("family", &HamiltonianSpec::family)
        .def_readwrite("L", &HamiltonianSpec::L)
        .def_readwrite("J", &HamiltonianSpec::J)
        .def_readwrite("Delta", &HamiltonianSpec::Delta)
        .def_readwrite("Jx", &HamiltonianSpec::Jx)
        .def_readwrite("Jy", &HamiltonianSpec::Jy)
        .def_readwrite("Jz", &HamiltonianSpec::Jz)
        .def_readwrite("statistics", &HamiltonianSpec::statistics)
        .def_readwrite("hopping", &HamiltonianSpec::hopping)
        .def_readwrite("potential", &HamiltonianSpec::potential)
        .def_readwrite("boson_cutoff", &HamiltonianSpec::boson_cutoff);

    m.def("hilbert_dim", &hilbert_dim);
    m.def("potential_values", &potential_values, py::arg("potential"), py::arg("L"));
    m.def("single_particle_matrix", &single_particle_matrix);
    m.def("build_hamiltonian", &build_hamiltonian);
    m.def("site_operator", &site_operator, py::arg("kind"), py::arg("site"), py::arg("spec"));

    py::enum_<SpectralDensity::Kind>(m, "DensityKind")
        .value("Wideband", SpectralDensity::Kind::Wideband)
        .value("SemiElliptic", SpectralDensity::Kind::SemiElliptic)
        .value("Tabulated", SpectralDensity::Kind::Tabulated);
    py::class_<SpectralDensity>(m, "SpectralDensity")
        .def_static("wideband", &SpectralDensity::wideband, py::arg("Gamma"))
        .def_static("semi_elliptic", &SpectralDensity::semi_elliptic, py::arg("eps"), py::arg("tau"), py::arg("tau_a"))
        .def_static("tabulated", &SpectralDensity::tabulated, py::arg("w"), py::arg("g"))
        .def_readonly("kind", &SpectralDensity::kind)
        .def("__call__", [](const SpectralDensity& sd, double w) { return rate(sd, w); });

    py::enum_<BathStatistics>(m, "BathStatistics")
        .value("Fermion", BathStatistics::Fermion)
        .value("Boson", BathStatistics::Boson)
        .value("Magnetization", BathStatistics::Magnetization);
    py::class_<BathSpec>(m, "BathSpec")
        .def(py::init<>())
        .def_readwrite("statistics", &BathSpec::statistics)
        .def_readwrite("site", &BathSpec::site)
        .def_readwrite("gamma", &BathSpec::gamma)
        .def_readwrite("sd", &BathSpec::sd)
        .def_readwrite("beta", &BathSpec::beta)
        .def_readwrite("mu", &BathSpec::mu)
        .def_readwrite("target", &BathSpec::target)
        .def_readwrite("omega", &BathSpec::omega);
    m.def("fermi", &fermi);
    m.def("occupation", &occupation, py::arg("bath"), py::arg("w"));

    py::enum_<GeneratorKind>(m, "GeneratorKind")
        .value("LME", GeneratorKind::LME)
        .value("GME", GeneratorKind::GME)
        .value("Redfield", GeneratorKind::Redfield)
        .value("Custom", GeneratorKind::Custom);
    py::class_<GeneratorBundle>(m, "GeneratorBundle")
        .def_readonly("kind", &GeneratorBundle::kind)
        .def_readonly("dim", &GeneratorBundle::dim)
        .def_readonly("H", &GeneratorBundle::H)
        .def_property_readonly("n_channels", [](const GeneratorBundle& g) { return g.channels.size(); })
        .def("gksl", &GeneratorBundle::gksl)
        .def("__repr__", [](const GeneratorBundle& g) { return dump(g); });

    py::class_<GmeOptions>(m, "GmeOptions")
        .def(py::init<>())
        .def_readwrite("secular_tol", &GmeOptions::secular_tol)
        .def_readwrite("lamb_shift", &GmeOptions::lamb_shift);
    py::class_<RedfieldOptions>(m, "RedfieldOptions")
        .def(py::init<>())
        .def_readwrite("principal_value", &RedfieldOptions::principal_value)
        .def_readwrite("secular_tol", &RedfieldOptions::secular_tol);
    m.def("build_lme", &build_lme, py::arg("H"), py::arg("baths"));
    m.def("build_gme", &build_gme, py::arg("H"), py::arg("baths"), py::arg("options") = GmeOptions{});
    m.def("build_redfield", &build_redfield, py::arg("H"), py::arg("baths"), py::arg("options") = RedfieldOptions{});
    m.def("add_dephasing", &add_dephasing, py::arg("bundle"), py::arg("Gamma"), py::arg("sites") = std::vector<int>{});

    m.def("liouvillian", &liouvillian);
    m.def("vectorize", &vectorize);
    m.def("devectorize", &devectorize);
    m.def("apply", &ness::apply, py::arg("bundle"), py::arg("rho"));
    py::enum_<SteadyMethod>(m, "SteadyMethod")
        .value("LU", SteadyMethod::LU)
        .value("Iterative", SteadyMethod::Iterative)
        .value("Variational", SteadyMethod::Variational);
    m.def(
        "steady_state",
        [](const GeneratorBundle& g, SteadyMethod method, double tol) {
            SteadyOptions o;
            o.method = method;
            o.tol = tol;
            auto ss = steady_state(g, o);
            return py::make_tuple(ss.rho, ss.residual);
        },
        py::arg("bundle"), py::arg("method") = SteadyMethod::LU, py::arg("tol") = 1e-12);
    m.def(
        "spectrum",
        [](const GeneratorBundle& g, int k) { return spectrum(liouvillian(g), k, false).values; },
        py::arg("bundle"), py::arg("k") = 0);
    m.def(
        "evolve",
        [](const GeneratorBundle& g, const Mat& rho0, const std::vector<double>& times) {
            return evolve(liouvillian(g), rho0, times);
        },
        py::arg("bundle"), py::arg("rho0"), py::arg("times"));
    m.def("expect", &expect, py::arg("rho"), py::arg("op"));
    m.def("trace_distance", &trace_distance);
    m.def(
        "bath_current",
        [](const Mat& rho, const GeneratorBundle& g, int bath, const SpMat& O) {
            auto f = dissipative_current(rho, g, bath, O);
            return f.value;
        },
        py::arg("rho"), py::arg("bundle"), py::arg("bath"), py::arg("op"));

    py::enum_<CounterKind>(m, "CounterKind")
        .value("Particle", CounterKind::Particle)
        .value("Energy", CounterKind::Energy)
        .value("Activity", CounterKind::Activity);
    py::class_<Counter>(m, "Counter")
        .def(py::init([](CounterKind k, int bath) { return Counter{k, bath}; }), py::arg("kind"), py::arg("bath") = 0)
        .def_readwrite("kind", &Counter::kind)
        .def_readwrite("bath", &Counter::bath);
    m.def("mean_current", &mean_current, py::arg("bundle"), py::arg("counter"));
    m.def("noise", &noise, py::arg("bundle"), py::arg("counter"));
    m.def(
        "dominant_eigenvalue", [](const GeneratorBundle& g, const Counter& c, double chi) { return dominant_eigenvalue(g, c, chi); },
        py::arg("bundle"), py::arg("counter"), py::arg("chi"));

    py::class_<LyapunovSystem>(m, "LyapunovSystem")
        .def_readonly("W", &LyapunovSystem::W)
        .def_readonly("D", &LyapunovSystem::D)
        .def_readonly("h", &LyapunovSystem::h);
    m.def("build_lyapunov", &build_lyapunov, py::arg("h"), py::arg("baths"), py::arg("statistics") = Statistics::Fermion);
    m.def("with_dephasing", &with_dephasing, py::arg("system"), py::arg("Gamma"));
    m.def(
        "solve_covariance", [](const LyapunovSystem& s) { return solve_steady(s).C; }, py::arg("system"));
    m.def("covariance_current", &covariance_current, py::arg("C"), py::arg("h"), py::arg("site"));

    m.def("xx_current", &xx_current, py::arg("gamma"), py::arg("J"), py::arg("f1"), py::arg("fL"));
    m.def("xx_dephasing_current", &xx_dephasing_current, py::arg("gamma"), py::arg("Gamma"), py::arg("J"), py::arg("L"),
          py::arg("n1"), py::arg("nL"));
    m.def("heisenberg_mps_current", &heisenberg_mps_current, py::arg("gamma"), py::arg("L"), py::arg("J") = 1.0);

    py::class_<TransportFit>(m, "TransportFit")
        .def_readonly("alpha", &TransportFit::alpha)
        .def_readonly("alpha_lo", &TransportFit::alpha_lo)
        .def_readonly("alpha_hi", &TransportFit::alpha_hi)
        .def_readonly("r2", &TransportFit::r2)
        .def_readonly("L0", &TransportFit::L0)
        .def_property_readonly("regime", [](const TransportFit& f) { return regime_name(f.regime); });
    m.def(
        "fit_exponent",
        [](const std::vector<double>& sizes, const std::vector<double>& currents, std::optional<double> L_min) {
            FitOptions o;
            o.L_min = L_min;
            return fit_exponent(sizes, currents, o);
        },
        py::arg("sizes"), py::arg("currents"), py::arg("L_min") = std::nullopt);

    m.def("run", &run, py::arg("command"), py::arg("config"), py::arg("target") = "", py::arg("out_dir") = ".",
          py::arg("threads") = 1, py::arg("seed") = std::nullopt, py::arg("tol") = std::nullopt,
          py::arg("write") = false);
}
