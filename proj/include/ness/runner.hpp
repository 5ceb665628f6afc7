// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ness/config.hpp"

namespace ness {

inline constexpr int kManifestSchema = 1;
inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    std::string out_dir = ".";
    std::string config_path;
    int threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

struct Table {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct RunOutput {
    std::vector<Table> tables;
    json results = json::object();
    std::vector<std::pair<std::string, std::string>> files;  // extra (name, contents)
};

// Executes one subcommand (steady, evolve, spectrum, fcs, traj, scan, benchmark).
// `target` is the optional positional name (scan kind, benchmark name).
RunOutput run_command(const std::string& command, const std::string& target, RunConfig cfg,
                      const RunOptions& opt);

// Writes tables as RFC-4180 CSV plus manifest.json; returns the written file names.
std::vector<std::string> write_outputs(const RunOutput& out, const std::string& command, const std::string& target,
                                       const RunConfig& cfg, const RunOptions& opt);

std::string csv_escape(const std::string& field);
std::string format_number(double v, int precision = 17);
std::string to_csv(const Table& t);

// Fibonacci numbers F >= 2 up to max.
std::vector<int> fibonacci_sizes(int max);

} // namespace ness
