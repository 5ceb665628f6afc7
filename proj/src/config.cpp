// SPDX-License-Identifier: Apache-2.0
#include "ness/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ness {

Node::Node(const json& j, std::string path) : j_(&j), path_(std::move(path))
{
    if (!j.is_object()) throw ValidationError(path_ + ": expected an object");
}

bool Node::has(const std::string& key) const
{
    return j_->contains(key) && !(*j_)[key].is_null();
}

const json& Node::at(const std::string& key) const
{
    return (*j_)[key];
}

void Node::fail(const std::string& key, const std::string& msg) const
{
    throw ValidationError(path_ + "." + key + ": " + msg);
}

Node Node::child(const std::string& key) const
{
    if (!has(key)) fail(key, "missing required section");
    if (!at(key).is_object()) fail(key, "expected an object");
    return Node(at(key), path_ + "." + key);
}

std::vector<Node> Node::items(const std::string& key) const
{
    std::vector<Node> out;
    if (!has(key)) return out;
    if (!at(key).is_array()) fail(key, "expected an array");
    for (size_t i = 0; i < at(key).size(); ++i) {
        const json& e = at(key)[i];
        std::string p = path_ + "." + key + "[" + std::to_string(i) + "]";
        if (!e.is_object()) throw ValidationError(p + ": expected an object");
        out.emplace_back(e, p);
    }
    return out;
}

double Node::number(const std::string& key, std::optional<double> def) const
{
    if (!has(key)) {
        if (def) return *def;
        fail(key, "missing required number");
    }
    if (!at(key).is_number()) fail(key, "expected a number");
    return at(key).get<double>();
}

int Node::integer(const std::string& key, std::optional<int> def) const
{
    if (!has(key)) {
        if (def) return *def;
        fail(key, "missing required integer");
    }
    if (!at(key).is_number_integer()) fail(key, "expected an integer");
    return at(key).get<int>();
}

bool Node::boolean(const std::string& key, std::optional<bool> def) const
{
    if (!has(key)) {
        if (def) return *def;
        fail(key, "missing required boolean");
    }
    if (!at(key).is_boolean()) fail(key, "expected true or false");
    return at(key).get<bool>();
}

std::string Node::string(const std::string& key, std::optional<std::string> def) const
{
    if (!has(key)) {
        if (def) return *def;
        fail(key, "missing required string");
    }
    if (!at(key).is_string()) fail(key, "expected a string");
    return at(key).get<std::string>();
}

std::vector<double> Node::numbers(const std::string& key, std::optional<std::vector<double>> def) const
{
    if (!has(key)) {
        if (def) return *def;
        fail(key, "missing required array of numbers");
    }
    if (!at(key).is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : at(key)) {
        if (!e.is_number()) fail(key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> Node::integers(const std::string& key, std::optional<std::vector<int>> def) const
{
    if (!has(key)) {
        if (def) return *def;
        fail(key, "missing required array of integers");
    }
    if (!at(key).is_array()) fail(key, "expected an array of integers");
    std::vector<int> out;
    for (const auto& e : at(key)) {
        if (!e.is_number_integer()) fail(key, "expected an array of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

void Node::only(const std::vector<std::string>& allowed) const
{
    for (auto it = j_->begin(); it != j_->end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) fail(it.key(), "unknown key");
}

namespace {

template <class E>
E pick(const Node& n, const std::string& key, const std::string& def,
       const std::vector<std::pair<std::string, E>>& table)
{
    std::string v = n.string(key, def);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    for (const auto& [name, val] : table)
        if (name == v) return val;
    std::string opts;
    for (const auto& [name, val] : table) opts += (opts.empty() ? "" : ", ") + name;
    n.fail(key, "unknown value '" + v + "' (expected one of: " + opts + ")");
}

PotentialSpec parse_potential(const Node& n)
{
    n.only({"kind", "h", "seed", "lambda", "alpha", "beta", "phi"});
    PotentialSpec p;
    p.kind = pick<PotentialSpec::Kind>(n, "kind", "uniform",
                                       {{"uniform", PotentialSpec::Kind::Uniform},
                                        {"disorder", PotentialSpec::Kind::Disorder},
                                        {"aah", PotentialSpec::Kind::AAH},
                                        {"fibonacci", PotentialSpec::Kind::Fibonacci}});
    p.h = n.number("h", 0.0);
    if (n.has("seed")) {
        if (!n.raw()["seed"].is_number_unsigned() && !n.raw()["seed"].is_number_integer()) n.fail("seed", "expected an integer");
        p.seed = n.raw()["seed"].get<std::uint64_t>();
    }
    p.lambda = n.number("lambda", 0.0);
    p.alphaQ = n.number("alpha", 0.0);
    p.betaQ = n.number("beta", kGolden);
    p.phi = n.number("phi", 0.0);
    return p;
}

SpectralDensity parse_sd(const Node& n)
{
    n.only({"kind", "Gamma", "eps", "tau", "tau_a", "grid", "values", "path"});
    std::string kind = n.string("kind", "wideband");
    if (kind == "wideband") return SpectralDensity::wideband(n.number("Gamma"));
    if (kind == "semi_elliptic") return SpectralDensity::semi_elliptic(n.number("eps", 0.0), n.number("tau", 1.0), n.number("tau_a"));
    if (kind == "tabulated") return SpectralDensity::tabulated(n.numbers("grid"), n.numbers("values"));
    if (kind == "csv") return SpectralDensity::from_csv(n.string("path"));
    n.fail("kind", "unknown spectral density '" + kind + "' (expected wideband, semi_elliptic, tabulated, csv)");
}

InitialState parse_initial(const Node& parent, const std::string& key, const std::string& def)
{
    InitialState s;
    s.kind = def;
    if (!parent.has(key)) return s;
    const json& j = parent.raw()[key];
    if (j.is_string()) {
        s.kind = j.get<std::string>();
        if (s.kind != "mixed" && s.kind != "empty" && s.kind != "full")
            parent.fail(key, "unknown initial state '" + s.kind + "' (expected mixed, empty, full or an object)");
        return s;
    }
    Node n = parent.child(key);
    n.only({"basis", "occupations"});
    if (n.has("basis")) {
        s.kind = "basis";
        s.index = n.integer("basis");
    } else if (n.has("occupations")) {
        s.kind = "product";
        s.occupations = n.numbers("occupations");
    } else {
        parent.fail(key, "expected 'basis' or 'occupations'");
    }
    return s;
}

} // namespace

HamiltonianSpec parse_model(const Node& n)
{
    n.only({"family", "L", "J", "Delta", "Jx", "Jy", "Jz", "statistics", "hopping", "potential", "boson_cutoff", "max_dim"});
    HamiltonianSpec H;
    std::string fam = n.string("family", "xxz");
    if (fam == "xx") {
        H.family = Family::XXZ;
        H.Delta = 0.0;
    } else if (fam == "xxz") {
        H.family = Family::XXZ;
    } else if (fam == "xyz") {
        H.family = Family::XYZ;
    } else if (fam == "tight_binding") {
        H.family = Family::TightBinding;
    } else {
        n.fail("family", "unknown model family '" + fam + "' (expected xx, xxz, xyz, tight_binding)");
    }
    H.L = n.integer("L");
    if (H.L < 1) n.fail("L", "must be >= 1");
    H.J = n.number("J", 1.0);
    if (fam != "xx") H.Delta = n.number("Delta", 0.0);
    else if (n.has("Delta")) n.fail("Delta", "not allowed for family xx");
    H.Jx = n.number("Jx", 1.0);
    H.Jy = n.number("Jy", 1.0);
    H.Jz = n.number("Jz", 0.0);
    H.statistics = pick<Statistics>(n, "statistics", "fermion",
                                    {{"fermion", Statistics::Fermion}, {"boson", Statistics::Boson}});
    H.boson_cutoff = n.integer("boson_cutoff", 2);
    if (H.boson_cutoff < 1) n.fail("boson_cutoff", "must be >= 1");
    if (n.has("max_dim")) H.max_dim = n.integer("max_dim");
    if (n.has("hopping")) {
        const json& m = n.raw()["hopping"];
        if (!m.is_array() || m.size() != size_t(H.L)) n.fail("hopping", "expected an L x L array of numbers");
        Mat h(H.L, H.L);
        for (int i = 0; i < H.L; ++i) {
            if (!m[size_t(i)].is_array() || m[size_t(i)].size() != size_t(H.L))
                n.fail("hopping", "expected an L x L array of numbers");
            for (int k = 0; k < H.L; ++k) {
                const json& e = m[size_t(i)][size_t(k)];
                if (e.is_number()) h(i, k) = e.get<double>();
                else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
                    h(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
                else n.fail("hopping", "entries must be numbers or [re, im] pairs");
            }
        }
        if (max_abs(h - h.adjoint()) > 1e-12) n.fail("hopping", "matrix must be Hermitian");
        H.hopping = h;
    }
    if (n.has("potential")) H.potential = parse_potential(n.child("potential"));
    return H;
}

BathSpec parse_bath(const Node& n)
{
    n.only({"statistics", "site", "gamma", "beta", "mu", "target", "omega", "spectral_density"});
    BathSpec b;
    b.statistics = pick<BathStatistics>(n, "statistics", "fermion",
                                        {{"fermion", BathStatistics::Fermion},
                                         {"boson", BathStatistics::Boson},
                                         {"magnetization", BathStatistics::Magnetization}});
    b.site = n.integer("site");
    b.gamma = n.number("gamma", 0.0);
    if (b.gamma < 0.0) n.fail("gamma", "must be >= 0");
    b.beta = n.number("beta", 1.0);
    b.mu = n.number("mu", 0.0);
    if (n.has("target")) b.target = n.number("target");
    if (n.has("omega")) b.omega = n.number("omega");
    if (n.has("spectral_density")) b.sd = parse_sd(n.child("spectral_density"));
    return b;
}

RunConfig parse_config(const json& j)
{
    Node root(j, "config");
    root.only({"model", "baths", "generator", "solver", "spectrum", "evolve", "fcs", "traj", "scan", "benchmark", "output"});
    RunConfig c;
    c.raw = j;
    if (root.has("model")) c.model = parse_model(root.child("model"));
    for (const auto& b : root.items("baths")) c.baths.push_back(parse_bath(b));
    if (c.model)
        for (size_t i = 0; i < c.baths.size(); ++i)
            if (c.baths[i].site < 1 || c.baths[i].site > c.model->L)
                throw ValidationError("config.baths[" + std::to_string(i) + "].site: outside 1.." + std::to_string(c.model->L));
    if (root.has("generator")) {
        Node g = root.child("generator");
        g.only({"kind", "dephasing", "lamb_shift", "principal_value"});
        c.generator.kind = pick<GeneratorKind>(g, "kind", "lme",
                                               {{"lme", GeneratorKind::LME}, {"gme", GeneratorKind::GME},
                                                {"redfield", GeneratorKind::Redfield}});
        c.generator.dephasing = g.number("dephasing", 0.0);
        if (c.generator.dephasing < 0.0) g.fail("dephasing", "must be >= 0");
        c.generator.lamb_shift = g.boolean("lamb_shift", true);
        c.generator.principal_value = g.boolean("principal_value", false);
    }
    if (root.has("solver")) {
        Node s = root.child("solver");
        s.only({"method", "tol", "gap", "check_uniqueness"});
        c.steady.method = pick<SteadyMethod>(s, "method", "lu",
                                             {{"lu", SteadyMethod::LU}, {"iterative", SteadyMethod::Iterative},
                                              {"variational", SteadyMethod::Variational}});
        c.steady.tol = s.number("tol", 1e-12);
        c.steady.compute_gap = s.boolean("gap", false);
        c.steady.check_uniqueness = s.boolean("check_uniqueness", true);
    }
    if (root.has("spectrum")) {
        Node s = root.child("spectrum");
        s.only({"k"});
        c.spectrum_k = s.integer("k", 0);
    }
    if (root.has("evolve")) {
        Node e = root.child("evolve");
        e.only({"t_final", "n_times", "spectral", "initial"});
        c.evolve.t_final = e.number("t_final", 10.0);
        c.evolve.n_times = e.integer("n_times", 101);
        if (c.evolve.t_final < 0.0) e.fail("t_final", "must be >= 0");
        if (c.evolve.n_times < 1) e.fail("n_times", "must be >= 1");
        c.evolve.spectral = e.boolean("spectral", false);
        c.evolve.initial = parse_initial(e, "initial", "mixed");
    }
    if (root.has("fcs")) {
        Node f = root.child("fcs");
        f.only({"counter", "bath", "chi_min", "chi_max", "n_chi"});
        c.fcs.counter.kind = pick<CounterKind>(f, "counter", "particle",
                                               {{"particle", CounterKind::Particle}, {"energy", CounterKind::Energy},
                                                {"activity", CounterKind::Activity}});
        c.fcs.counter.bath = f.integer("bath", 0);
        c.fcs.chi_min = f.number("chi_min", -kPi);
        c.fcs.chi_max = f.number("chi_max", kPi);
        c.fcs.n_chi = f.integer("n_chi", 41);
        if (c.fcs.n_chi < 1) f.fail("n_chi", "must be >= 1");
    }
    if (root.has("traj")) {
        Node t = root.child("traj");
        t.only({"dt", "t_final", "n_traj", "seed", "scheme", "n_samples", "initial", "events"});
        auto& tc = c.traj.cfg;
        tc.dt = t.number("dt", 0.01);
        tc.t_final = t.number("t_final", 1.0);
        tc.n_traj = t.integer("n_traj", 100);
        tc.seed = std::uint64_t(t.integer("seed", 0));
        tc.scheme = pick<TrajectoryScheme>(t, "scheme", "euler",
                                           {{"euler", TrajectoryScheme::Euler},
                                            {"waiting_time", TrajectoryScheme::WaitingTime}});
        tc.n_samples = t.integer("n_samples", 20);
        c.traj.initial = parse_initial(t, "initial", "empty");
        c.traj.events = t.boolean("events", false);
    }
    if (root.has("scan")) {
        Node s = root.child("scan");
        s.only({"kind", "values", "sizes", "gamma", "J", "f1", "fL", "fit_L_min"});
        c.scan.kind = s.string("kind", "sizes");
        if (c.scan.kind != "sizes" && c.scan.kind != "fibonacci" && c.scan.kind != "dephasing" && c.scan.kind != "aah")
            s.fail("kind", "unknown scan '" + c.scan.kind + "' (expected sizes, fibonacci, dephasing, aah)");
        c.scan.values = s.numbers("values", std::vector<double>{});
        c.scan.sizes = s.integers("sizes", std::vector<int>{});
        c.scan.gamma = s.number("gamma", 1.0);
        c.scan.J = s.number("J", 1.0);
        c.scan.f1 = s.number("f1", 1.0);
        c.scan.fL = s.number("fL", 0.0);
        if (s.has("fit_L_min")) c.scan.fit_L_min = s.number("fit_L_min");
        for (int L : c.scan.sizes)
            if (L < 2) s.fail("sizes", "sizes must be >= 2");
    }
    if (root.has("benchmark")) {
        Node b = root.child("benchmark");
        b.only({"name", "h", "Gamma", "leads", "reference", "t_final", "n_times", "gammas", "sizes"});
        c.benchmark.name = b.string("name", "");
        c.benchmark.h = b.numbers("h", std::vector<double>{});
        c.benchmark.Gamma = b.numbers("Gamma", std::vector<double>{});
        c.benchmark.leads = b.integers("leads", std::vector<int>{});
        c.benchmark.reference = b.integer("reference", 2000);
        c.benchmark.t_final = b.number("t_final", 300.0);
        c.benchmark.n_times = b.integer("n_times", 601);
        c.benchmark.gammas = b.numbers("gammas", std::vector<double>{});
        c.benchmark.sizes = b.integers("sizes", std::vector<int>{});
    }
    if (root.has("output")) {
        Node o = root.child("output");
        o.only({"precision"});
        c.precision = o.integer("precision", 17);
        if (c.precision < 1 || c.precision > 17) o.fail("precision", "must lie in 1..17");
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

GeneratorBundle build_generator(const RunConfig& cfg)
{
    require(cfg.model.has_value(), "config.model: missing required section");
    GeneratorBundle g;
    switch (cfg.generator.kind) {
    case GeneratorKind::LME:
        g = build_lme(*cfg.model, cfg.baths);
        break;
    case GeneratorKind::GME: {
        GmeOptions o;
        o.lamb_shift = cfg.generator.lamb_shift;
        g = build_gme(*cfg.model, cfg.baths, o);
        break;
    }
    case GeneratorKind::Redfield: {
        RedfieldOptions o;
        o.principal_value = cfg.generator.principal_value;
        g = build_redfield(*cfg.model, cfg.baths, o);
        break;
    }
    case GeneratorKind::Custom:
        throw ValidationError("config.generator.kind: custom generators cannot be built from a config");
    }
    if (cfg.generator.dephasing > 0.0) g = add_dephasing(g, cfg.generator.dephasing);
    return g;
}

namespace {

Eigen::Index full_index(const HamiltonianSpec& H)
{
    return hilbert_dim(H) - 1;
}

} // namespace

Mat initial_density(const HamiltonianSpec& H, const InitialState& s)
{
    const Eigen::Index d = hilbert_dim(H);
    if (s.kind == "mixed") return Mat::Identity(d, d) / double(d);
    if (s.kind == "product") {
        require(local_dim(H) == 2, "product initial states need two-level sites");
        require(int(s.occupations.size()) == H.L, "initial occupations must list one value per site");
        Mat rho = Mat::Zero(d, d);
        for (Eigen::Index k = 0; k < d; ++k) {
            double p = 1.0;
            for (int i = 0; i < H.L; ++i) {
                double o = s.occupations[size_t(i)];
                require(o >= 0.0 && o <= 1.0, "initial occupations must lie in [0, 1]");
                p *= ((k >> i) & 1) ? o : 1.0 - o;
            }
            rho(k, k) = p;
        }
        return rho;
    }
    Vec psi = initial_vector(H, s);
    return psi * psi.adjoint();
}

Vec initial_vector(const HamiltonianSpec& H, const InitialState& s)
{
    const Eigen::Index d = hilbert_dim(H);
    Eigen::Index idx = 0;
    if (s.kind == "empty") idx = 0;
    else if (s.kind == "full") idx = full_index(H);
    else if (s.kind == "basis") idx = s.index;
    else throw ValidationError("initial state '" + s.kind + "' is not a pure state");
    require(idx >= 0 && idx < d, "initial basis index out of range");
    Vec psi = Vec::Zero(d);
    psi(idx) = 1.0;
    return psi;
}

} // namespace ness
