#include "phasewave/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace phasewave {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed) ok |= (it.key() == k);
        if (!ok)
            throw PwError(ErrorCode::schema_error, "unknown key '" + it.key() + "' in " + where,
                          {{"key", it.key()}, {"object", where}});
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

}  // namespace

ForceLaw RunConfig::make_law() const { return builtin_force_law(law_type, b, K, custom_coefficients); }

json weight_to_json(const WeightSpec& w) {
    return json{{"family", w.family == WeightFamily::subexponential ? "subexponential" : "exponential"},
                {"sigma", w.sigma},
                {"c_exponent", w.c_exponent},
                {"normalizer", w.normalizer}};
}

WeightSpec weight_from_json(const json& j, int nu_hint) {
    reject_unknown_keys(j, {"family", "sigma", "c_exponent", "normalizer"}, "weight");
    WeightSpec w;
    w.nu = nu_hint;
    std::string fam = get_or<std::string>(j, "family", "subexponential");
    if (fam == "subexponential") {
        w.family = WeightFamily::subexponential;
    } else if (fam == "exponential") {
        w.family = WeightFamily::exponential;
    } else {
        throw PwError(ErrorCode::schema_error, "unknown weight family '" + fam + "'");
    }
    w.sigma = get_or<double>(j, "sigma", 1.0);
    w.c_exponent = get_or<double>(j, "c_exponent", 0.01);
    if (j.contains("normalizer") && j.at("normalizer").is_string()) {
        if (j.at("normalizer").get<std::string>() != "auto")
            throw PwError(ErrorCode::schema_error, "normalizer must be a number or \"auto\"");
        w.normalizer = default_normalizer(nu_hint);
    } else {
        w.normalizer = get_or<double>(j, "normalizer", 1.0);
    }
    w.validate();
    return w;
}

json RunConfig::to_json() const {
    json law{{"type", law_type_name(law_type)}, {"b", b}, {"K", K}};
    if (law_type == LawType::custom) law["coefficients"] = custom_coefficients;
    json j{{"law", law},
           {"gamma", gamma},
           {"N", N},
           {"a", a},
           {"tol_p", solver.tol_P},
           {"tol_q", solver.tol_Q},
           {"eps_div", solver.eps_div},
           {"max_newton", solver.max_newton},
           {"weight", weight_to_json(solver.weight)},
           {"seed", seed}};
    if (!out.empty()) j["out"] = out;
    return j;
}

RunConfig config_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"law", "gamma", "N", "a", "tol_p", "tol_q", "eps_div", "max_newton",
                         "weight", "seed", "out"},
                        "config");
    RunConfig cfg;
    if (!j.contains("law")) throw PwError(ErrorCode::schema_error, "config is missing 'law'");
    const json& law = j.at("law");
    reject_unknown_keys(law, {"type", "b", "K", "coefficients"}, "law");
    cfg.law_type = law_type_from_string(get_or<std::string>(law, "type", "toda"));
    cfg.b = get_or<double>(law, "b", 0.0);
    cfg.K = get_or<int>(law, "K", 8);
    if (law.contains("coefficients"))
        cfg.custom_coefficients = law.at("coefficients").get<std::vector<double>>();

    cfg.gamma = get_or<double>(j, "gamma", 0.9);
    cfg.N = get_or<int>(j, "N", 12);
    if (j.contains("a")) cfg.a = j.at("a").get<std::vector<double>>();
    cfg.solver.tol_P = get_or<double>(j, "tol_p", 1e-12);
    cfg.solver.tol_Q = get_or<double>(j, "tol_q", 1e-13);
    cfg.solver.eps_div = get_or<double>(j, "eps_div", 1e-8);
    cfg.solver.max_newton = get_or<int>(j, "max_newton", 25);
    int nu_hint = cfg.a.empty() ? 2 : static_cast<int>(cfg.a.size());
    if (j.contains("weight")) {
        cfg.solver.weight = weight_from_json(j.at("weight"), nu_hint);
    } else {
        cfg.solver.weight.nu = nu_hint;
    }
    cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
    cfg.out = get_or<std::string>(j, "out", "");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PwError(ErrorCode::io_error, "cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw PwError(ErrorCode::schema_error, std::string("config parse error: ") + e.what(),
                      {{"line", std::to_string(line)}, {"file", path}});
    }
    return config_from_json(j);
}

namespace {

void write_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void write_json(std::string& out, const json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth + 1), ' ');
    const std::string pad_close(static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += json(it.key()).dump();
                out += ": ";
                write_json(out, it.value(), indent, depth + 1);
            }
            out += "\n" + pad_close + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                write_json(out, v, indent, depth + 1);
            }
            out += "\n" + pad_close + "]";
            return;
        }
        case json::value_t::number_float:
            write_number(out, j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json_17(const json& j, int indent) {
    std::string out;
    write_json(out, j, indent, 0);
    out += "\n";
    return out;
}

void emit_result(const json& j, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw PwError(ErrorCode::io_error, "cannot write '" + tmp.string() + "'");
        out << dump_json_17(j);
    }
    fs::rename(tmp, target);
}

json solution_to_json(const WaveSolution& s, const RunConfig& cfg) {
    json modes = json::array();
    for (const auto& [m, v] : s.v.seq().reps()) {
        json mj = json::array();
        for (int i = 0; i < m.nu(); ++i) mj.push_back(m[i]);
        modes.push_back(json{{"m", mj}, {"u", v}});
    }
    json config = cfg.to_json();
    config.erase("out");  // the target path is not part of the experiment identity
    json j{{"a", s.a},
           {"omega", s.omega},
           {"omega0", s.omega0},
           {"modes", modes},
           {"p_residual", s.report.p_residual_norm},
           {"q_residual", s.report.q_residual},
           {"min_divisor", s.report.min_divisor},
           {"newton_trace", s.newton_trace},
           {"config", config}};
    return j;
}

LoadedSolution solution_from_json(const json& j) {
    LoadedSolution out;
    out.config = config_from_json(j.at("config"));
    out.a = j.at("a").get<std::vector<double>>();
    out.omega = j.at("omega").get<std::vector<double>>();
    out.omega0 = j.at("omega0").get<std::vector<double>>();
    const int nu = static_cast<int>(out.a.size());
    out.u = phi(out.a);
    for (const auto& entry : j.at("modes")) {
        auto mv = entry.at("m").get<std::vector<int>>();
        ModeIndex m(nu);
        for (int i = 0; i < nu; ++i) m.set(i, mv[static_cast<std::size_t>(i)]);
        out.u.set(m, entry.at("u").get<double>());
    }
    return out;
}

json error_to_json(const PwError& e) {
    json ctx = json::object();
    for (const auto& [k, v] : e.context()) ctx[k] = v;
    return json{{"code", error_code_name(e.code())}, {"message", e.what()}, {"context", ctx}};
}

}  // namespace phasewave
