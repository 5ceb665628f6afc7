// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ness/fcs.hpp"
#include "ness/generators.hpp"
#include "ness/liouville.hpp"
#include "ness/trajectories.hpp"

namespace ness {

using json = nlohmann::json;

// Typed view of a JSON object that reports errors by field path and rejects unknown keys.
class Node {
public:
    Node(const json& j, std::string path);

    bool has(const std::string& key) const;
    Node child(const std::string& key) const;
    std::vector<Node> items(const std::string& key) const;

    double number(const std::string& key, std::optional<double> def = std::nullopt) const;
    int integer(const std::string& key, std::optional<int> def = std::nullopt) const;
    bool boolean(const std::string& key, std::optional<bool> def = std::nullopt) const;
    std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) const;
    std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def = std::nullopt) const;
    std::vector<int> integers(const std::string& key, std::optional<std::vector<int>> def = std::nullopt) const;

    // Throws on keys outside `allowed`.
    void only(const std::vector<std::string>& allowed) const;
    [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

    const json& raw() const { return *j_; }
    const std::string& path() const { return path_; }

private:
    const json* j_;
    std::string path_;
    const json& at(const std::string& key) const;
};

struct InitialState {
    std::string kind = "mixed";  // mixed | empty | full | basis | product
    Eigen::Index index = 0;
    std::vector<double> occupations;
};

struct GeneratorSettings {
    GeneratorKind kind = GeneratorKind::LME;
    double dephasing = 0.0;
    bool lamb_shift = true;
    bool principal_value = false;
};

struct EvolveSettings {
    double t_final = 10.0;
    int n_times = 101;
    bool spectral = false;
    InitialState initial;
};

struct FcsSettings {
    Counter counter;
    double chi_min = -kPi;
    double chi_max = kPi;
    int n_chi = 41;
};

struct TrajSettings {
    TrajectoryConfig cfg;
    InitialState initial{"empty", 0, {}};
    bool events = false;
};

struct ScanSettings {
    std::string kind = "sizes";  // sizes | fibonacci | dephasing | aah
    std::vector<double> values;  // h (fibonacci, aah) or Gamma (dephasing)
    std::vector<int> sizes;
    double gamma = 1.0;
    double J = 1.0;
    double f1 = 1.0;
    double fL = 0.0;
    std::optional<double> fit_L_min;
};

struct BenchmarkSettings {
    std::string name;
    std::vector<double> h, Gamma;      // validity-map grid
    std::vector<int> leads;            // lead-relaxation lead lengths
    int reference = 2000;
    double t_final = 300.0;
    int n_times = 601;
    std::vector<double> gammas;        // xx, heisenberg
    std::vector<int> sizes;
};

struct RunConfig {
    json raw;
    std::optional<HamiltonianSpec> model;
    std::vector<BathSpec> baths;
    GeneratorSettings generator;
    SteadyOptions steady;
    int spectrum_k = 0;
    EvolveSettings evolve;
    FcsSettings fcs;
    TrajSettings traj;
    ScanSettings scan;
    BenchmarkSettings benchmark;
    int precision = 17;
};

RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

HamiltonianSpec parse_model(const Node& n);
BathSpec parse_bath(const Node& n);

GeneratorBundle build_generator(const RunConfig& cfg);

Mat initial_density(const HamiltonianSpec& H, const InitialState& s);
Vec initial_vector(const HamiltonianSpec& H, const InitialState& s);

} // namespace ness
