#pragma once

#include <json.hpp>
#include <string>

#include "phasewave/solver.hpp"

namespace phasewave {

/// One reproducible run: force law, dispersion parameters, truncation,
/// tolerances, weight, seed, output path. Unknown keys are rejected on load.
struct RunConfig {
    LawType law_type = LawType::toda;
    double b = 0.0;
    int K = 8;
    std::vector<double> custom_coefficients;
    double gamma = 0.9;
    int N = 12;
    std::vector<double> a;
    SolverConfig solver;
    std::uint64_t seed = 0;
    std::string out;

    ForceLaw make_law() const;
    nlohmann::json to_json() const;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Serializes with numbers at 17 significant digits (bit-exact double round
/// trip) and writes atomically (temp file + rename).
std::string dump_json_17(const nlohmann::json& j, int indent = 2);
void emit_result(const nlohmann::json& j, const std::string& path);

nlohmann::json weight_to_json(const WeightSpec& w);
WeightSpec weight_from_json(const nlohmann::json& j, int nu_hint);

nlohmann::json solution_to_json(const WaveSolution& s, const RunConfig& cfg);
/// Rebuilds (u = phi(a) + v, omega, config) from a result document.
struct LoadedSolution {
    RunConfig config;
    std::vector<double> a;
    std::vector<double> omega;
    std::vector<double> omega0;
    FourierSequence u;
};
LoadedSolution solution_from_json(const nlohmann::json& j);

nlohmann::json error_to_json(const PwError& e);

}  // namespace phasewave
