// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "ness/config.hpp"
#include "ness/runner.hpp"

using namespace ness;
namespace fs = std::filesystem;

namespace {

std::string env(const char* name)
{
    const char* v = std::getenv(name);
    return v ? v : "";
}

fs::path scratch()
{
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("ness_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args)
{
    std::string cmd = "\"" + env("NESS_CLI") + "\" " + args + " > \"" + (scratch() / "log.txt").string() + "\" 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

fs::path write_config(const std::string& name, const std::string& body)
{
    fs::path p = scratch() / name;
    std::ofstream(p) << body;
    return p;
}

std::string cfg(const std::string& name) { return "\"" + (fs::path(env("NESS_CONFIGS")) / name).string() + "\""; }

std::string out(const std::string& name) { return "\"" + (scratch() / name).string() + "\""; }

} // namespace

TEST_CASE("csv helpers")
{
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(std::nan("")) == "nan");
    Table t{"x", {"a", "b"}, {{"1", "2,3"}}};
    CHECK(to_csv(t) == "a,b\r\n1,\"2,3\"\r\n");
    auto fib = fibonacci_sizes(100);
    CHECK(fib.front() == 2);
    CHECK(fib.back() == 89);
}

TEST_CASE("config parsing")
{
    auto c = parse_config(json::parse(R"({"model": {"family": "xx", "L": 3, "J": 0.5},
        "baths": [{"statistics": "magnetization", "site": 1, "gamma": 1.0, "target": 0.2}]})"));
    REQUIRE(c.model.has_value());
    CHECK(c.model->L == 3);
    CHECK(c.model->J == 0.5);
    CHECK(c.baths.size() == 1);
    try {
        parse_config(json::parse(R"({"model": {"family": "xx", "L": 3, "Jay": 1.0}})"));
        FAIL("unknown key accepted");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("model") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(json::parse(R"({"model": {"family": "xx", "L": -2}})")), ValidationError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"model": {"family": "ladder", "L": 2}})")), ValidationError);
}

TEST_CASE("steady on the ballistic config")
{
    REQUIRE(!env("NESS_CLI").empty());
    REQUIRE(run("steady --config " + cfg("xx_ballistic.cfg") + " --out " + out("steady")) == 0);
    std::string csv = slurp(scratch() / "steady" / "steady.csv");
    std::istringstream is(csv);
    std::string header, row;
    std::getline(is, header);
    CHECK(header == "bond,current,residual,tol\r");
    int rows = 0;
    while (std::getline(is, row)) {
        if (row.empty()) continue;
        ++rows;
        std::istringstream rs(row);
        std::string bond, cur;
        std::getline(rs, bond, ',');
        std::getline(rs, cur, ',');
        CHECK(std::stod(cur) == doctest::Approx(16.0 / 17.0).epsilon(1e-10));
    }
    CHECK(rows == 3);
    auto manifest = json::parse(slurp(scratch() / "steady" / "manifest.json"));
    CHECK(manifest["schema_version"] == 1);
    CHECK(manifest["command"] == "steady");
    CHECK(manifest["status"] == "ok");
}

TEST_CASE("exit codes")
{
    CHECK(run("steady --config \"" + (scratch() / "missing.cfg").string() + "\" --out " + out("x")) == 2);
    auto bad = write_config("bad.cfg", R"({"model": {"family": "xx", "L": 0}})");
    CHECK(run("steady --config \"" + bad.string() + "\" --out " + out("bad")) == 2);
    auto typo = write_config("typo.cfg", R"({"model": {"family": "xx", "L": 2}, "bathz": []})");
    CHECK(run("steady --config \"" + typo.string() + "\" --out " + out("typo")) == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("steady") == 2);
    auto singular = write_config("singular.cfg", R"({"model": {"family": "xx", "L": 2, "J": 1.0},
        "baths": [{"statistics": "magnetization", "site": 1, "gamma": 0.0, "target": 0.0}],
        "generator": {"kind": "lme"}})");
    CHECK(run("steady --config \"" + singular.string() + "\" --out " + out("singular")) == 3);
}

TEST_CASE("seeded trajectories are byte-identical")
{
    REQUIRE(run("traj --config " + cfg("xx_trajectories.cfg") + " --seed 5 --out " + out("t1")) == 0);
    REQUIRE(run("traj --config " + cfg("xx_trajectories.cfg") + " --seed 5 --threads 2 --out " + out("t2")) == 0);
    std::string a = slurp(scratch() / "t1" / "traj.csv"), b = slurp(scratch() / "t2" / "traj.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    REQUIRE(run("traj --config " + cfg("xx_trajectories.cfg") + " --seed 6 --out " + out("t3")) == 0);
    CHECK(slurp(scratch() / "t3" / "traj.csv") != a);
}

TEST_CASE("other subcommands")
{
    CHECK(run("spectrum --config " + cfg("xx_ballistic.cfg") + " --out " + out("spec")) == 0);
    CHECK(fs::exists(scratch() / "spec" / "spectrum.csv"));
    CHECK(run("evolve --config " + cfg("xx_trajectories.cfg") + " --out " + out("ev")) == 0);
    CHECK(fs::exists(scratch() / "ev" / "evolve.csv"));
    CHECK(run("fcs --config " + cfg("resonant_level.cfg") + " --out " + out("fcs")) == 0);
    auto m = json::parse(slurp(scratch() / "fcs" / "manifest.json"));
    CHECK(std::abs(m["results"]["mean"].get<double>()) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(run("benchmark xx --out " + out("bx")) == 0);
    CHECK(run("benchmark nosuch --out " + out("bn")) == 2);
    CHECK(run("benchmark validity-map --config " + cfg("validity_map.cfg") + " --out " + out("bv")) == 0);
    CHECK(fs::exists(scratch() / "bv" / "benchmark_validity_map.csv"));
}

TEST_CASE("cleanup")
{
    std::error_code ec;
    fs::remove_all(scratch(), ec);
}
