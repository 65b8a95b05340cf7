// phasewave: multi-phase travelling waves of nonlinear infinite chains.
//
// Subcommands: check, solve, sweep, profile, verify, tools {resultant,
// weierstrass, excision, couple}. Structured results are JSON (17 significant
// digits, atomic writes); grid data is CSV. Domain errors exit 1 with
// {code, message, context} JSON on standard error; usage errors exit 2.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "phasewave/config.hpp"
#include "phasewave/coupling.hpp"
#include "phasewave/dynamics.hpp"
#include "phasewave/excision.hpp"
#include "phasewave/resultant.hpp"
#include "phasewave/weierstrass.hpp"

using namespace phasewave;
using nlohmann::json;

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<std::vector<double>> parse_direction_list(const std::string& s) {
    std::vector<std::vector<double>> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) continue;
        out.push_back(parse_double_list(tok));
    }
    return out;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_atomic(const std::string& text, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw PwError(ErrorCode::io_error, "cannot write '" + tmp + "'");
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

void emit_or_print(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << dump_json_17(j);
    } else {
        emit_result(j, out_path);
    }
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct LawFlags {
    std::string type = "toda";
    double b = 0.0;
    int K = 8;
    std::string coefficients;

    void attach(CLI::App* cmd) {
        cmd->add_option("--law", type, "force law: toda|quadratic|cubic|custom");
        cmd->add_option("--b", b, "averaged lattice spacing offset");
        cmd->add_option("--K", K, "Taylor truncation order (>= 3)");
        cmd->add_option("--coefficients", coefficients,
                        "comma list alpha_0,alpha_1,... (custom law)");
    }
    ForceLaw make() const {
        return builtin_force_law(law_type_from_string(type), b, K,
                                 coefficients.empty() ? std::vector<double>{}
                                                      : parse_double_list(coefficients));
    }
};

json assumption_report_json(const AssumptionReport& rep) {
    json margins = json::array();
    for (const auto& [m, v] : rep.a3_margin) {
        json mj = json::array();
        for (int i = 0; i < m.nu(); ++i) mj.push_back(m[i]);
        margins.push_back(json{{"m", mj}, {"scaled_margin", v}});
    }
    return json{{"a1_ok", rep.a1_ok},
                {"a2_ok", rep.a2_ok},
                {"a4_ok", rep.a4_ok},
                {"a3_margin", margins},
                {"a3_min_scaled_margin", rep.a3_min_scaled_margin},
                {"cutoff", rep.cutoff},
                {"tau", rep.tau}};
}

int cmd_check(const LawFlags& law, double gamma, double tau_in, int cutoff,
              const std::string& out) {
    ForceLaw F = law.make();
    double tau = tau_in;
    if (tau <= 0.0) {
        // default: nu + 1, the minimal generic exponent
        try {
            tau = phase_count(F.alpha1(), gamma) + 1.0;
        } catch (const PwError&) {
            tau = 2.0;
        }
    }
    AssumptionReport rep = check_assumptions(F, gamma, tau, cutoff);
    emit_or_print(assumption_report_json(rep), out);
    return 0;
}

int cmd_solve(RunConfig cfg) {
    ForceLaw F = cfg.make_law();
    DispersionData d = make_dispersion(F.alpha1(), cfg.gamma);
    if (cfg.a.empty()) cfg.a.assign(static_cast<std::size_t>(d.nu), 0.01);
    cfg.solver.weight.nu = d.nu;

    // Assumption gate: A1/A2 are hard requirements; the A3/A4 scan is
    // advisory here and reported on stderr when it fails.
    AssumptionReport rep = check_assumptions(F, cfg.gamma, d.nu + 1.0,
                                             std::max(2 * cfg.N, 8));
    if (!rep.a1_ok)
        throw PwError(ErrorCode::a1_violation, "assumption A1 fails for this force law");
    if (!rep.a2_ok)
        throw PwError(ErrorCode::a2_violation,
                      "assumption A2 fails: gamma is resonant with 2 sqrt(F'(-b))");
    if (!rep.a4_ok)
        std::cerr << "note: A4 (Omega nondegeneracy) does not hold; second-order "
                     "structure may be degenerate\n";

    TruncationSpec trunc = make_truncation(d.nu, cfg.N);
    WaveSolution s = solve_wave(F, cfg.gamma, cfg.b, cfg.a, trunc, cfg.solver);
    json j = solution_to_json(s, cfg);
    j["timestamp"] = iso_timestamp();
    emit_or_print(j, cfg.out);
    return 0;
}

int cmd_sweep(const LawFlags& law, double gamma, const std::string& directions,
              const std::string& magnitudes, int N, double tol_p, double tol_q,
              const std::string& out) {
    ForceLaw F = law.make();
    DispersionData d = make_dispersion(F.alpha1(), gamma);
    auto dirs = parse_direction_list(directions);
    if (dirs.empty()) dirs.push_back(std::vector<double>(static_cast<std::size_t>(d.nu), 1.0));
    for (const auto& dir : dirs)
        if (static_cast<int>(dir.size()) != d.nu)
            throw PwError(ErrorCode::dimension_mismatch,
                          "sweep direction length does not match the phase count");
    auto mags = parse_double_list(magnitudes);

    SolverConfig scfg;
    scfg.tol_P = tol_p;
    scfg.tol_Q = tol_q;
    scfg.weight.nu = d.nu;
    TruncationSpec trunc = make_truncation(d.nu, N);
    auto rows = amplitude_sweep(F, gamma, law.b, dirs, mags, trunc, scfg);

    std::string csv = "|a|";
    for (int j = 1; j <= d.nu; ++j) csv += ",omega_" + std::to_string(j);
    csv += ",p_residual,status\n";
    for (const auto& row : rows) {
        csv += csv_num(row.magnitude);
        if (row.ok) {
            for (double w : row.omega) csv += "," + csv_num(w);
            csv += "," + csv_num(row.p_residual) + ",ok\n";
        } else {
            // empty omega and p_residual columns, error tag in the status column
            csv += std::string(static_cast<std::size_t>(d.nu) + 2, ',') + row.error + "\n";
        }
    }
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text_atomic(csv, out);
    }
    return 0;
}

int cmd_profile(const std::string& solution_path, int grid, const std::string& zeta_str,
                const std::string& out, const std::string& traj_out, int n_min, int n_max,
                int t_samples, double periods) {
    std::ifstream in(solution_path);
    if (!in) throw PwError(ErrorCode::io_error, "cannot open '" + solution_path + "'");
    LoadedSolution sol = solution_from_json(json::parse(in));
    const int nu = static_cast<int>(sol.a.size());

    std::vector<double> zeta;
    if (!zeta_str.empty()) {
        zeta = parse_double_list(zeta_str);
        if (static_cast<int>(zeta.size()) != nu)
            throw PwError(ErrorCode::dimension_mismatch, "zeta length does not match phase count");
    }

    // chi samples on a uniform torus grid
    std::vector<std::vector<double>> xi;
    std::vector<int> idx(static_cast<std::size_t>(nu), 0);
    while (true) {
        std::vector<double> point(static_cast<std::size_t>(nu));
        for (int i = 0; i < nu; ++i)
            point[static_cast<std::size_t>(i)] =
                2.0 * M_PI * idx[static_cast<std::size_t>(i)] / grid - M_PI;
        xi.push_back(point);
        int i = 0;
        for (; i < nu; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < grid) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i == nu) break;
    }
    auto chi = reconstruct_profile(sol.u, sol.omega, xi, sol.config.solver.eps_div,
                                   zeta.empty() ? nullptr : &zeta);
    std::string csv;
    for (int i = 1; i <= nu; ++i) csv += "xi_" + std::to_string(i) + ",";
    csv += "chi\n";
    for (std::size_t p = 0; p < xi.size(); ++p) {
        for (int i = 0; i < nu; ++i) csv += csv_num(xi[p][static_cast<std::size_t>(i)]) + ",";
        csv += csv_num(chi[p]) + "\n";
    }
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text_atomic(csv, out);
    }

    if (!traj_out.empty()) {
        ForceLaw F = sol.config.make_law();
        DispersionData d = make_dispersion(F.alpha1(), sol.config.gamma);
        double T = periods * 2.0 * M_PI / sol.config.gamma;
        std::vector<double> ts(static_cast<std::size_t>(t_samples));
        for (int k = 0; k < t_samples; ++k)
            ts[static_cast<std::size_t>(k)] = T * k / std::max(1, t_samples - 1);
        auto x = sample_wave(sol.u, sol.omega, sol.config.b, sol.config.gamma, d.g, n_min, n_max,
                             ts, sol.config.solver.eps_div);
        std::string tcsv = "n,t,x\n";
        std::size_t c = 0;
        for (int n = n_min; n <= n_max; ++n)
            for (double t : ts)
                tcsv += std::to_string(n) + "," + csv_num(t) + "," + csv_num(x[c++]) + "\n";
        write_text_atomic(tcsv, traj_out);
    }
    return 0;
}

int cmd_verify(const std::string& solution_path, int window, double T_in, double periods,
               double dt, const std::string& out, const std::string& csv_out) {
    std::ifstream in(solution_path);
    if (!in) throw PwError(ErrorCode::io_error, "cannot open '" + solution_path + "'");
    LoadedSolution sol = solution_from_json(json::parse(in));
    ForceLaw F = sol.config.make_law();
    DispersionData d = make_dispersion(F.alpha1(), sol.config.gamma);

    double T = T_in > 0.0 ? T_in : periods * 2.0 * M_PI / sol.config.gamma;
    int n_min = -window / 2, n_max = window - window / 2 - 1;
    VerificationReport rep = verify_travelling_wave(F, d, sol.u, sol.omega, sol.config.b, n_min,
                                                    n_max, T, dt, 2, sol.config.solver.eps_div);
    json site_dev = json::array();
    for (Eigen::Index i = 0; i < rep.site_deviation.size(); ++i)
        site_dev.push_back(rep.site_deviation(i));
    json j{{"max_deviation", rep.max_deviation},
           {"energy_drift", rep.energy_drift},
           {"steps", rep.steps},
           {"dt", rep.dt},
           {"window", window},
           {"T", T},
           {"site_deviation", site_dev}};
    emit_or_print(j, out);

    if (!csv_out.empty()) {
        WaveSampler sampler(sol.u, sol.omega, sol.config.b, sol.config.gamma, d.g,
                            sol.config.solver.eps_div);
        ChainState init;
        init.n_min = n_min;
        init.n_max = n_max;
        init.t = 0.0;
        init.x.resize(window);
        init.v.resize(window);
        for (int n = n_min; n <= n_max; ++n) {
            init.x(n - n_min) = sampler.position(n, 0.0);
            init.v(n - n_min) = sampler.velocity(n, 0.0);
        }
        auto boundary = [&](double t) {
            return std::make_pair(sampler.position(n_min - 1, t), sampler.position(n_max + 1, t));
        };
        std::string csv = "n,t,x_integrated,x_ansatz\n";
        long total = static_cast<long>(std::ceil(T / dt));
        long stride = std::max<long>(1, total / 200);
        long step = 0;
        auto observer = [&](const ChainState& s) {
            if (++step % stride != 0) return;
            for (int n = n_min; n <= n_max; ++n)
                csv += std::to_string(n) + "," + csv_num(s.t) + "," + csv_num(s.x(n - n_min)) +
                       "," + csv_num(sampler.position(n, s.t)) + "\n";
        };
        integrate(F, init, boundary, T, dt, observer);
        write_text_atomic(csv, csv_out);
    }
    return 0;
}

int cmd_tools_resultant(const std::string& p_str, const std::string& q_str,
                        const std::string& out) {
    auto p = parse_double_list(p_str), q = parse_double_list(q_str);
    ResultantTriple t = resultant_ominus(p, q);
    double defect = verify_resultant_identity(t, p, q, 200, 12345);
    json r1 = json::array(), r2 = json::array();
    for (Eigen::Index i = 0; i < t.R1.coef.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < t.R1.coef.cols(); ++j) row.push_back(t.R1.coef(i, j));
        r1.push_back(row);
    }
    for (Eigen::Index i = 0; i < t.R2.coef.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < t.R2.coef.cols(); ++j) row.push_back(t.R2.coef(i, j));
        r2.push_back(row);
    }
    emit_or_print(json{{"r", t.r}, {"R1", r1}, {"R2", r2}, {"max_relative_defect", defect}}, out);
    return 0;
}

int cmd_tools_weierstrass_demo(const std::string& out) {
    // perturbed-polynomial demo family: f = z^2 + lambda + 1e-4 cos z
    WeierstrassProblem prob;
    prob.d = 2;
    prob.delta = 1.0;
    prob.rho = 0.05;
    prob.lambda0 = Eigen::VectorXd::Zero(1);
    prob.poly_coeffs = [](const Eigen::VectorXd& lam) {
        Eigen::VectorXd a(2);
        a << lam(0), 0.0;
        return a;
    };
    prob.remainder = [](std::complex<double> z, const Eigen::VectorXd&) {
        return 1e-4 * std::cos(z);
    };
    for (double lam : {-0.05, 0.0, 0.05}) {
        Eigen::VectorXd v(1);
        v << lam;
        prob.lambda_grid.push_back(v);
    }
    for (int k = 0; k < 16; ++k) prob.z_verify.push_back(std::polar(0.24, 2.0 * M_PI * k / 16.0));
    PreparationResult r = weierstrass_prepare(prob);
    json b = json::array();
    for (const auto& bv : r.b_coefficients) {
        json row = json::array();
        for (Eigen::Index i = 0; i < bv.size(); ++i) row.push_back(bv(i));
        b.push_back(row);
    }
    emit_or_print(json{{"b_coefficients", b},
                       {"q_factor_bound", r.q_factor_bound},
                       {"residual", r.residual},
                       {"epsilon", r.epsilon},
                       {"q_certificate", r.q_certificate},
                       {"b_certificate", r.b_certificate}},
                  out);
    return 0;
}

int cmd_tools_excision(int k, double delta, double t, const std::string& poly,
                       const std::string& interval, int resolution, const std::string& out) {
    json j{{"k", k}, {"delta", delta}, {"t", t}, {"bound", excision_bound(k, delta, t)}};
    if (!poly.empty()) {
        auto coeffs = parse_double_list(poly);
        auto iv = parse_double_list(interval);
        if (iv.size() != 2) throw PwError(ErrorCode::schema_error, "--interval needs 'lo,hi'");
        ExcisionInput input;
        input.k = k;
        input.delta = delta;
        input.g = [coeffs](double x) { return poly_eval(coeffs, x); };
        std::vector<double> dk = coeffs;
        for (int i = 0; i < k; ++i) {
            std::vector<double> next;
            for (std::size_t p = 1; p < dk.size(); ++p) next.push_back(dk[p] * static_cast<double>(p));
            dk = next.empty() ? std::vector<double>{0.0} : next;
        }
        input.g_deriv_k = [dk](double x) { return poly_eval(dk, x); };
        ExcisionResult r = excision_measure(input, iv[0], iv[1], t, resolution);
        j["measure"] = r.measure;
        j["components"] = r.components;
        j["hypothesis_ok"] = r.hypothesis_ok;
        json ivs = json::array();
        for (const auto& [a, b] : r.intervals) ivs.push_back(json::array({a, b}));
        j["intervals"] = ivs;
    }
    emit_or_print(j, out);
    return 0;
}

int cmd_tools_couple(const std::string& instance_path, const std::string& out) {
    std::ifstream in(instance_path);
    if (!in) throw PwError(ErrorCode::io_error, "cannot open '" + instance_path + "'");
    json j = json::parse(in);
    int nu = j.at("nu").get<int>();
    LatticeOperator T;
    for (const auto& site : j.at("sites")) {
        ModeIndex m(nu);
        for (int i = 0; i < nu; ++i) m.set(i, site.at(static_cast<std::size_t>(i)).get<int>());
        T.mode_set.push_back(m);
    }
    T.diagonal = j.at("diagonal").get<std::vector<double>>();
    T.toeplitz = FourierSequence(nu);
    for (const auto& e : j.at("toeplitz")) {
        ModeIndex m(nu);
        auto mv = e.at("m").get<std::vector<int>>();
        for (int i = 0; i < nu; ++i) m.set(i, mv[static_cast<std::size_t>(i)]);
        T.toeplitz.set(m, e.at("value").get<double>());
    }
    double sigma = j.value("sigma", 1.0);
    double sigma_tilde = j.value("sigma_tilde", 0.25);
    WeightSpec w;
    w.nu = nu;
    if (j.contains("weight")) w = weight_from_json(j.at("weight"), nu);
    double threshold = j.value("divisor_threshold", 0.5);

    BlockCover cover = build_cover(T, threshold, sigma, sigma_tilde, w);
    CouplingResult r = coupling_invert(T, cover, sigma, sigma_tilde, w);
    emit_or_print(json{{"size", T.mode_set.size()},
                       {"coupling_norm", r.coupling_norm},
                       {"inverse_norm", r.inverse_norm},
                       {"certificate", r.certificate},
                       {"max_defect", r.max_defect}},
                  out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phasewave: multi-phase travelling waves of nonlinear chains"};
    app.require_subcommand(1);

    // check
    auto* check = app.add_subcommand("check", "finite checker for assumptions A1-A4");
    LawFlags check_law;
    check_law.attach(check);
    double check_gamma = 0.9, check_tau = -1.0;
    int check_cutoff = 200;
    std::string check_out;
    check->add_option("--gamma", check_gamma, "driving frequency");
    check->add_option("--tau", check_tau, "diophantine exponent (default nu+1)");
    check->add_option("--cutoff", check_cutoff, "A3 scan radius");
    check->add_option("--out", check_out, "output path (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "solve the P/Q system for one amplitude vector");
    LawFlags solve_law;
    solve_law.attach(solve);
    double solve_gamma = 0.9, solve_tol_p = 1e-12, solve_tol_q = 1e-13, solve_eps_div = 1e-8;
    int solve_N = 12;
    std::string solve_a, solve_out, solve_config;
    solve->add_option("--gamma", solve_gamma, "driving frequency");
    solve->add_option("--a", solve_a, "comma list of amplitudes");
    solve->add_option("--N", solve_N, "truncation radius");
    solve->add_option("--tol-p", solve_tol_p, "P-residual tolerance");
    solve->add_option("--tol-q", solve_tol_q, "Q-residual tolerance");
    solve->add_option("--eps-div", solve_eps_div, "divisor floor");
    solve->add_option("--out", solve_out, "result path (default stdout)");
    solve->add_option("--config", solve_config, "JSON config file (flags override)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "amplitude sweep to CSV");
    LawFlags sweep_law;
    sweep_law.attach(sweep);
    double sweep_gamma = 0.9, sweep_tol_p = 1e-12, sweep_tol_q = 1e-13;
    int sweep_N = 8;
    std::string sweep_dirs, sweep_mags = "1e-3,2e-3,4e-3,8e-3", sweep_out;
    sweep->add_option("--gamma", sweep_gamma, "driving frequency");
    sweep->add_option("--directions", sweep_dirs, "semicolon list of comma vectors");
    sweep->add_option("--magnitudes", sweep_mags, "comma list of magnitudes");
    sweep->add_option("--N", sweep_N, "truncation radius");
    sweep->add_option("--tol-p", sweep_tol_p, "P tolerance");
    sweep->add_option("--tol-q", sweep_tol_q, "Q tolerance");
    sweep->add_option("--out", sweep_out, "CSV path (default stdout)");

    // profile
    auto* profile = app.add_subcommand("profile", "profile and trajectory CSV from a result");
    std::string prof_solution, prof_zeta, prof_out, prof_traj;
    int prof_grid = 64, prof_nmin = 0, prof_nmax = 15, prof_tsamples = 64;
    double prof_periods = 1.0;
    profile->add_option("--solution", prof_solution, "result.json path")->required();
    profile->add_option("--grid", prof_grid, "samples per torus dimension");
    profile->add_option("--zeta", prof_zeta, "phase shift, comma list");
    profile->add_option("--out", prof_out, "chi CSV path (default stdout)");
    profile->add_option("--traj-out", prof_traj, "trajectory CSV path");
    profile->add_option("--n-min", prof_nmin, "first site of trajectory output");
    profile->add_option("--n-max", prof_nmax, "last site of trajectory output");
    profile->add_option("--t-samples", prof_tsamples, "trajectory time samples");
    profile->add_option("--periods", prof_periods, "trajectory duration in periods");

    // verify
    auto* verify = app.add_subcommand("verify", "integrate the chain and compare to the ansatz");
    std::string ver_solution, ver_out, ver_csv;
    int ver_window = 64;
    double ver_T = -1.0, ver_periods = 10.0, ver_dt = 1e-3;
    verify->add_option("--solution", ver_solution, "result.json path")->required();
    verify->add_option("--window", ver_window, "window size (sites)");
    verify->add_option("--T", ver_T, "duration (seconds; overrides --periods)");
    verify->add_option("--periods", ver_periods, "duration in periods 2 pi / gamma");
    verify->add_option("--dt", ver_dt, "integrator step");
    verify->add_option("--out", ver_out, "report path (default stdout)");
    verify->add_option("--csv", ver_csv, "optional (n,t,x_integrated,x_ansatz) CSV");

    // tools
    auto* tools = app.add_subcommand("tools", "standalone proof kernels");
    tools->require_subcommand(1);
    auto* t_res = tools->add_subcommand("resultant", "r = p (-) q with cofactors");
    std::string res_p, res_q, res_out;
    t_res->add_option("--p", res_p, "ascending monic coefficients of p")->required();
    t_res->add_option("--q", res_q, "ascending monic coefficients of q")->required();
    t_res->add_option("--out", res_out, "output path (default stdout)");

    auto* t_wpt = tools->add_subcommand("weierstrass", "preparation demo with certificates");
    bool wpt_demo = false;
    std::string wpt_out;
    t_wpt->add_flag("--demo", wpt_demo, "run the perturbed-polynomial demo family");
    t_wpt->add_option("--out", wpt_out, "output path (default stdout)");

    auto* t_exc = tools->add_subcommand("excision", "sublevel-set bound and measure");
    int exc_k = 1, exc_res = 4096;
    double exc_delta = 1.0, exc_t = 0.1;
    std::string exc_poly, exc_interval = "-1,1", exc_out;
    t_exc->add_option("--k", exc_k, "derivative order")->required();
    t_exc->add_option("--delta", exc_delta, "derivative floor scale")->required();
    t_exc->add_option("--t", exc_t, "sublevel threshold")->required();
    t_exc->add_option("--poly", exc_poly, "optional polynomial g, ascending coefficients");
    t_exc->add_option("--interval", exc_interval, "interval lo,hi");
    t_exc->add_option("--resolution", exc_res, "sampling resolution");
    t_exc->add_option("--out", exc_out, "output path (default stdout)");

    auto* t_cpl = tools->add_subcommand("couple", "coupling-lemma inversion of an instance file");
    std::string cpl_instance, cpl_out;
    t_cpl->add_option("--instance", cpl_instance, "instance JSON path")->required();
    t_cpl->add_option("--out", cpl_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*check) return cmd_check(check_law, check_gamma, check_tau, check_cutoff, check_out);
        if (*solve) {
            RunConfig cfg;
            if (!solve_config.empty()) cfg = load_config(solve_config);
            if (solve->count("--law")) cfg.law_type = law_type_from_string(solve_law.type);
            if (solve->count("--b")) cfg.b = solve_law.b;
            if (solve->count("--K")) cfg.K = solve_law.K;
            if (solve->count("--coefficients"))
                cfg.custom_coefficients = parse_double_list(solve_law.coefficients);
            if (solve->count("--gamma") || solve_config.empty()) cfg.gamma = solve_gamma;
            if (solve->count("--N") || solve_config.empty()) cfg.N = solve_N;
            if (solve->count("--a")) cfg.a = parse_double_list(solve_a);
            if (solve->count("--tol-p") || solve_config.empty()) cfg.solver.tol_P = solve_tol_p;
            if (solve->count("--tol-q") || solve_config.empty()) cfg.solver.tol_Q = solve_tol_q;
            if (solve->count("--eps-div") || solve_config.empty())
                cfg.solver.eps_div = solve_eps_div;
            if (solve->count("--out")) cfg.out = solve_out;
            return cmd_solve(std::move(cfg));
        }
        if (*sweep)
            return cmd_sweep(sweep_law, sweep_gamma, sweep_dirs, sweep_mags, sweep_N, sweep_tol_p,
                             sweep_tol_q, sweep_out);
        if (*profile)
            return cmd_profile(prof_solution, prof_grid, prof_zeta, prof_out, prof_traj, prof_nmin,
                               prof_nmax, prof_tsamples, prof_periods);
        if (*verify)
            return cmd_verify(ver_solution, ver_window, ver_T, ver_periods, ver_dt, ver_out,
                              ver_csv);
        if (*t_res) return cmd_tools_resultant(res_p, res_q, res_out);
        if (*t_wpt) return cmd_tools_weierstrass_demo(wpt_out);
        if (*t_exc)
            return cmd_tools_excision(exc_k, exc_delta, exc_t, exc_poly, exc_interval, exc_res,
                                      exc_out);
        if (*t_cpl) return cmd_tools_couple(cpl_instance, cpl_out);
    } catch (const PwError& e) {
        std::cerr << dump_json_17(error_to_json(e));
        return 1;
    } catch (const json::exception& e) {
        std::cerr << dump_json_17(json{{"code", "SCHEMA_ERROR"},
                                       {"message", e.what()},
                                       {"context", json::object()}});
        return 1;
    } catch (const std::exception& e) {
        std::cerr << dump_json_17(json{{"code", "INTERNAL"},
                                       {"message", e.what()},
                                       {"context", json::object()}});
        return 1;
    }
    return 2;
}
