#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phasewave/config.hpp"

using namespace phasewave;
using nlohmann::json;

namespace {

struct RunOutput {
    int exit_code = -1;
    std::string out;
};

RunOutput run_cli(const std::string& args) {
    std::string cmd = std::string(PHASEWAVE_CLI_PATH) + " " + args + " 2>&1";
    RunOutput r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "phasewave_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config round trip and strict schema") {
    json cfg{{"law", {{"type", "toda"}, {"b", 0.0}, {"K", 8}}},
             {"gamma", 0.9},
             {"N", 8},
             {"a", {0.01, 0.01}},
             {"tol_p", 1e-12},
             {"seed", 7}};
    RunConfig rc = config_from_json(cfg);
    CHECK(rc.law_type == LawType::toda);
    CHECK(rc.N == 8);
    CHECK(rc.solver.tol_P == 1e-12);
    // load -> emit -> load is the identity on the structure
    json again = rc.to_json();
    RunConfig rc2 = config_from_json(again);
    CHECK(rc2.to_json() == again);

    SUBCASE("unknown key is rejected by name") {
        json bad = cfg;
        bad["tol_z"] = 1.0;
        CHECK_THROWS_WITH_AS(config_from_json(bad), doctest::Contains("tol_z"), PwError);
    }
    SUBCASE("unknown law key is rejected") {
        json bad = cfg;
        bad["law"]["order"] = 3;
        CHECK_THROWS_AS(config_from_json(bad), PwError);
    }
}

TEST_CASE("json writer: 17 significant digits round-trip doubles exactly") {
    std::vector<double> values{M_PI, 1.0 / 3.0, 2.2395390299972684, 1e-300, -7.465233479410569};
    json j{{"values", values}};
    std::string text = dump_json_17(j);
    json back = json::parse(text);
    auto parsed = back.at("values").get<std::vector<double>>();
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(parsed[i] == values[i]);
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);

    SUBCASE("A2 boundary is a domain error with structured JSON") {
        RunOutput r = run_cli("solve --law toda --gamma 1.0 --a 0.01,0.01 --N 6");
        CHECK(r.exit_code == 1);
        json err = json::parse(r.out);
        CHECK(err.at("code") == "A2_VIOLATION");
        CHECK(err.contains("message"));
        CHECK(err.contains("context"));
    }
    SUBCASE("check succeeds") {
        RunOutput r = run_cli("check --law toda --b 0 --gamma 0.9 --cutoff 5");
        CHECK(r.exit_code == 0);
        json rep = json::parse(r.out);
        CHECK(rep.at("a1_ok") == true);
        CHECK(rep.at("a2_ok") == true);
        CHECK(rep.at("cutoff") == 5);
        // exactly the typed report fields
        CHECK(rep.size() == 7);
    }
}

TEST_CASE("solve result: determinism and bit-exact round trip") {
    auto dir = temp_dir();
    auto path1 = dir / "r1.json";
    auto path2 = dir / "r2.json";
    std::string flags = "solve --law quadratic --b 0 --gamma 0.9 --a 0.005,0.005 --N 5 "
                        "--tol-p 1e-9 --out ";
    RunOutput r1 = run_cli(flags + path1.string());
    RunOutput r2 = run_cli(flags + path2.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);

    json j1, j2;
    {
        std::ifstream f1(path1), f2(path2);
        f1 >> j1;
        f2 >> j2;
    }
    // byte-identical modulo the timestamp field
    j1.erase("timestamp");
    j2.erase("timestamp");
    CHECK(dump_json_17(j1) == dump_json_17(j2));

    // omega round-trips to the last bit through the 17-digit writer
    LoadedSolution sol = solution_from_json(j1);
    std::string text = dump_json_17(j1);
    LoadedSolution sol2 = solution_from_json(json::parse(text));
    CHECK(sol.omega[0] == sol2.omega[0]);
    CHECK(sol.omega[1] == sol2.omega[1]);
    CHECK(sol.u == sol2.u);

    // the emitted file carries the full mode list with canonical reps
    CHECK(j1.at("modes").size() == sol.u.support_size() - 2);  // minus the two kernel pairs
}

TEST_CASE("cli sweep emits the documented CSV header") {
    RunOutput r = run_cli("sweep --law toda --gamma 0.9 --N 5 --magnitudes 1e-3 --tol-p 1e-9");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "|a|,omega_1,omega_2,p_residual,status");
    std::string row;
    std::getline(lines, row);
    CHECK(row.find(",ok") != std::string::npos);
}

TEST_CASE("cli verify consumes a solve result") {
    auto dir = temp_dir();
    auto rpath = dir / "verify_me.json";
    RunOutput s = run_cli("solve --law toda --gamma 0.9 --a 0.005,0.005 --N 6 --tol-p 1e-10 --out " +
                          rpath.string());
    REQUIRE(s.exit_code == 0);
    auto csv_path = dir / "sites.csv";
    RunOutput v = run_cli("verify --solution " + rpath.string() +
                          " --window 24 --periods 0.5 --dt 2e-3 --csv " + csv_path.string());
    REQUIRE(v.exit_code == 0);
    json rep = json::parse(v.out);
    CHECK(rep.at("max_deviation").get<double>() < 1e-8);
    CHECK(rep.at("site_deviation").size() == 24);

    std::ifstream csv(csv_path);
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "n,t,x_integrated,x_ansatz");
}

TEST_CASE("cli profile phase shift") {
    auto dir = temp_dir();
    auto rpath = dir / "prof.json";
    RunOutput s = run_cli("solve --law toda --gamma 0.9 --a 0.005,0.005 --N 5 --tol-p 1e-9 --out " +
                          rpath.string());
    REQUIRE(s.exit_code == 0);
    auto traj_path = temp_dir() / "traj.csv";
    RunOutput p = run_cli("profile --solution " + rpath.string() +
                          " --grid 4 --zeta 0.5,0.25 --traj-out " + traj_path.string() +
                          " --n-min -2 --n-max 2 --t-samples 5");
    REQUIRE(p.exit_code == 0);
    {
        std::ifstream traj(traj_path);
        REQUIRE(traj.good());
        std::string theader;
        std::getline(traj, theader);
        CHECK(theader == "n,t,x");
        int rows = 0;
        std::string line;
        while (std::getline(traj, line))
            if (!line.empty()) ++rows;
        CHECK(rows == 25);
    }
    std::istringstream lines(p.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "xi_1,xi_2,chi");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 16);
}
