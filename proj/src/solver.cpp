#include "phasewave/solver.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

#include "phasewave/parallel.hpp"

namespace phasewave {

void SolverConfig::validate() const {
    if (!(tol_P > 0.0) || !(tol_Q > 0.0) || !(eps_div > 0.0))
        throw PwError(ErrorCode::domain_error, "solver tolerances must be positive");
    if (!(damping > 0.0 && damping <= 1.0))
        throw PwError(ErrorCode::domain_error, "damping factor must lie in (0,1]");
    weight.validate();
}

TruncationSpec make_truncation(int nu, int N) {
    if (N < 2) throw PwError(ErrorCode::domain_error, "truncation radius N must be >= 2");
    TruncationSpec t;
    t.N = N;
    std::vector<int> idx(static_cast<std::size_t>(nu), -N);
    while (true) {
        ModeIndex m(nu);
        for (int i = 0; i < nu; ++i) m.set(i, idx[static_cast<std::size_t>(i)]);
        bool kernel = m.l1_norm() == 1 && m.max_norm() == 1;
        if (!m.is_zero() && !kernel) {
            t.mode_set.push_back(m);
            if (m.is_canonical()) t.reduced_set.push_back(m);
        }
        int i = 0;
        for (; i < nu; ++i) {
            if (++idx[static_cast<std::size_t>(i)] <= N) break;
            idx[static_cast<std::size_t>(i)] = -N;
        }
        if (i == nu) break;
    }
    return t;
}

namespace {

double omega_dot(std::span<const double> omega, const ModeIndex& m) {
    double s = 0.0;
    for (int i = 0; i < m.nu(); ++i) s += omega[static_cast<std::size_t>(i)] * m[i];
    return s;
}

int g_dot(const std::vector<int>& g, const ModeIndex& m) {
    int s = 0;
    for (int i = 0; i < m.nu(); ++i) s += g[static_cast<std::size_t>(i)] * m[i];
    return s;
}

/// Divisor floor on the truncated mode set; throws naming the worst mode.
void check_mode_set_divisors(const DispersionData& d, std::span<const double> omega,
                             const TruncationSpec& trunc, double eps_div) {
    double worst = 2.0;
    ModeIndex worst_mode;
    for (const auto& m : trunc.reduced_set) {
        if (g_dot(d.g, m) == 0) continue;
        double s = std::abs(std::sin(reduce_mod_2pi(omega_dot(omega, m)) / 2.0));
        if (s < worst) {
            worst = s;
            worst_mode = m;
        }
    }
    if (worst < eps_div)
        throw PwError(ErrorCode::resonance,
                      "resonant mode " + worst_mode.to_string() + " inside the truncated set",
                      {{"mode", worst_mode.to_string()}, {"sin_half", num_str(worst)}});
}

Eigen::MatrixXd fold_symbol(const DispersionData& d, std::span<const double> omega,
                            const FourierSequence& symbol, const TruncationSpec& trunc) {
    const auto n = static_cast<Eigen::Index>(trunc.reduced_set.size());
    Eigen::MatrixXd A(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const ModeIndex& mi = trunc.reduced_set[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            const ModeIndex& mj = trunc.reduced_set[static_cast<std::size_t>(j)];
            double val = symbol.at(mi - mj) + symbol.at(mi + mj);
            if (i == j) {
                double V = V_of_omega(d, omega, mi);
                if (!std::isfinite(V))
                    throw PwError(ErrorCode::resonance, "singular divisor at " + mi.to_string());
                val += V;
            }
            A(i, j) = val;
        }
    }
    return A;
}

struct ResidualEval {
    FourierSequence p_residual;  // full support
    double norm = 0.0;
    FourierSequence dw_symbol;
    FourierSequence w_value;
};

ResidualEval eval_P_residual(const ForceLaw& F, const DispersionData& d,
                             const WaveParameters& lambda, const FourierSequence& v,
                             const WeightSpec& spec) {
    FourierSequence u = phi(lambda.a);
    u.add_scaled(v, 1.0);
    WEvaluation we = apply_W_and_DW(F, u, spec);
    ResidualEval out;
    out.w_value = we.w;
    out.dw_symbol = std::move(we.dw_symbol);
    out.p_residual = project_P(we.w).seq();
    for (const auto& [m, val] : v.reps())
        out.p_residual.add(m, V_of_omega(d, lambda.omega, m) * val);
    out.norm = seq_norm(spec, out.p_residual);
    return out;
}

}  // namespace

Eigen::MatrixXd assemble_linearized(const ForceLaw& F, const DispersionData& d,
                                    const WaveParameters& lambda, const ReducedSequence& v,
                                    const TruncationSpec& trunc, const WeightSpec& /*spec*/,
                                    double eps_div) {
    check_mode_set_divisors(d, lambda.omega, trunc, eps_div);
    FourierSequence u = phi(lambda.a);
    u.add_scaled(v.seq(), 1.0);
    FourierSequence symbol = apply_DW(F, u);
    return fold_symbol(d, lambda.omega, symbol, trunc);
}

NewtonResult newton_P(const ForceLaw& F, const DispersionData& d, const WaveParameters& lambda,
                      const TruncationSpec& trunc, const SolverConfig& config,
                      const ReducedSequence* warm_start) {
    config.validate();
    check_mode_set_divisors(d, lambda.omega, trunc, config.eps_div);

    FourierSequence v(static_cast<int>(lambda.a.size()));
    if (warm_start) v = warm_start->seq();

    // The full residual carries the irreducible truncation tail; the part
    // supported inside the mode set is additionally driven down to the level
    // the Q-iteration can tolerate, otherwise h~ evaluations inherit O(tol_P)
    // noise and stall the outer solve.
    auto inside_norm = [&](const FourierSequence& p) {
        double s = 0.0;
        for (const auto& [m, val] : p.reps())
            if (m.max_norm() <= trunc.N) s += 2.0 * weight_value(config.weight, m) * std::abs(val);
        return s;
    };
    const double inside_tol = std::max(1e-15, 1e-2 * std::min(config.tol_P, config.tol_Q));

    NewtonResult out;
    int stagnant = 0;
    double prev_inside = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= config.max_newton; ++it) {
        ResidualEval res = eval_P_residual(F, d, lambda, v, config.weight);
        out.trace.push_back(res.norm);
        if (res.norm <= config.tol_P) {
            double in_res = inside_norm(res.p_residual);
            if (in_res <= inside_tol || in_res > 0.5 * prev_inside) {
                out.v = ReducedSequence(std::move(v));
                return out;
            }
            prev_inside = in_res;
        }
        if (it == config.max_newton) break;

        Eigen::MatrixXd A = fold_symbol(d, lambda.omega, res.dw_symbol, trunc);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        {
            Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
            double piv_min = diag.minCoeff(), piv_max = diag.maxCoeff();
            if (!(piv_min > piv_max * 1e-14))
                throw PwError(ErrorCode::conditioning,
                              "near-singular linearized operator",
                              {{"smallest_pivot", num_str(piv_min)}});
        }
        const auto n = static_cast<Eigen::Index>(trunc.reduced_set.size());
        Eigen::VectorXd rhs(n);
        for (Eigen::Index i = 0; i < n; ++i)
            rhs(i) = res.p_residual.at(trunc.reduced_set[static_cast<std::size_t>(i)]);
        Eigen::VectorXd delta = lu.solve(rhs);

        auto apply_step = [&](double factor) {
            FourierSequence trial = v;
            for (Eigen::Index i = 0; i < n; ++i)
                trial.add(trunc.reduced_set[static_cast<std::size_t>(i)], -factor * delta(i));
            return trial;
        };

        if (res.norm < 1e-4) {
            v = apply_step(1.0);
            continue;
        }
        // Residual-monotone line search on the damped step.
        double best_norm = res.norm;
        FourierSequence best = v;
        bool improved = false;
        for (double factor : {config.damping, config.damping * 0.5, config.damping * 0.25}) {
            FourierSequence trial = apply_step(factor);
            double trial_norm = eval_P_residual(F, d, lambda, trial, config.weight).norm;
            if (trial_norm < best_norm) {
                best_norm = trial_norm;
                best = std::move(trial);
                improved = true;
                break;
            }
        }
        if (!improved && ++stagnant >= 2)
            throw PwError(ErrorCode::non_convergence, "Newton iteration stalled",
                          {{"residual", num_str(res.norm)},
                           {"iterations", std::to_string(it)}});
        v = std::move(best);
    }
    throw PwError(ErrorCode::non_convergence,
                  "Newton iteration cap reached without meeting tol_P",
                  {{"residual", num_str(out.trace.back())},
                   {"iterations", std::to_string(config.max_newton)}});
}

namespace {

std::vector<double> h_tilde(const ForceLaw& F, const DispersionData& d, std::span<const double> a,
                            std::span<const double> omega, const ReducedSequence& v,
                            const WeightSpec& spec) {
    FourierSequence u = phi(a);
    u.add_scaled(v.seq(), 1.0);
    FourierSequence w = apply_W(F, u, spec).value;
    std::vector<double> h(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        double Vj = V_scalar(d.alpha1, d.gamma, d.g[j], omega[j]);
        h[j] = Vj + w.at(ModeIndex::unit(d.nu, static_cast<int>(j))) / a[j];
    }
    return h;
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

std::vector<double> solve_Q_for_omega(
    const ForceLaw& F, const DispersionData& d, std::span<const double> a,
    const std::function<const ReducedSequence&(std::span<const double>)>& v_provider,
    const SolverConfig& config, std::optional<std::vector<double>> omega_start) {
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] == 0.0)
            throw PwError(ErrorCode::degenerate_amplitude,
                          "Q-solve requires nonzero amplitudes; a_" + std::to_string(j + 1) + " = 0");

    std::vector<double> omega = omega_start ? *omega_start : d.omega0;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d.nu, d.nu);
    for (int j = 0; j < d.nu; ++j) J(j, j) = d.Lambda[static_cast<std::size_t>(j)];
    bool refined = false;

    std::vector<double> h;
    for (int it = 0; it < config.max_outer; ++it) {
        // The provider may reuse one internal iterate across calls, so its
        // result is consumed immediately.
        h = h_tilde(F, d, a, omega, v_provider(omega), config.weight);
        double hn = max_abs(h);
        if (hn <= config.tol_Q) return omega;

        if (!refined && hn < 10.0 * config.tol_Q) {
            // Forward-difference refinement once the seed Jacobian has taken
            // the iteration close; each column costs one P-resolve.
            refined = true;
            const double fd = 1e-6;
            for (int k = 0; k < d.nu; ++k) {
                std::vector<double> op = omega;
                op[static_cast<std::size_t>(k)] += fd;
                std::vector<double> hp = h_tilde(F, d, a, op, v_provider(op), config.weight);
                for (int j = 0; j < d.nu; ++j)
                    J(j, k) = (hp[static_cast<std::size_t>(j)] - h[static_cast<std::size_t>(j)]) / fd;
            }
        }
        Eigen::VectorXd rhs(d.nu);
        for (int j = 0; j < d.nu; ++j) rhs(j) = h[static_cast<std::size_t>(j)];
        Eigen::VectorXd delta = J.partialPivLu().solve(rhs);
        for (int j = 0; j < d.nu; ++j) omega[static_cast<std::size_t>(j)] -= delta(j);
    }
    std::vector<std::pair<std::string, std::string>> ctx;
    for (std::size_t j = 0; j < h.size(); ++j)
        ctx.emplace_back("h_tilde_" + std::to_string(j + 1), num_str(h[j]));
    throw PwError(ErrorCode::non_convergence, "omega iteration cap reached", ctx);
}

namespace {

WaveSolution trivial_solution(const DispersionData& d, int nu) {
    WaveSolution s;
    s.a.assign(static_cast<std::size_t>(nu), 0.0);
    s.omega = d.omega0;
    s.omega0 = d.omega0;
    s.v = ReducedSequence(nu);
    s.report.q_residual.assign(static_cast<std::size_t>(nu), 0.0);
    s.report.min_divisor = 0.0;
    s.newton_trace = {0.0};
    return s;
}

WaveSolution solve_sub(const ForceLaw& F, const DispersionData& d, std::vector<double> a,
                       const TruncationSpec& trunc, const SolverConfig& config);

ResidualReport make_report(const ForceLaw& F, const DispersionData& d,
                           const WaveParameters& lambda, const ReducedSequence& v,
                           const TruncationSpec& trunc, const SolverConfig& config) {
    ResidualReport rep;
    ResidualEval res = eval_P_residual(F, d, lambda, v.seq(), config.weight);
    rep.p_residual_norm = res.norm;
    rep.q_residual = Q_functional(F, d, v, lambda, config.weight, config.eps_div);
    rep.min_divisor = std::numeric_limits<double>::infinity();
    for (const auto& m : trunc.reduced_set) {
        double V = std::abs(V_of_omega(d, lambda.omega, m));
        if (V < rep.min_divisor) {
            rep.min_divisor = V;
            rep.worst_mode = m;
        }
    }
    return rep;
}

WaveSolution solve_sub(const ForceLaw& F, const DispersionData& d, std::vector<double> a,
                       const TruncationSpec& trunc, const SolverConfig& config) {
    check_mode_set_divisors(d, d.omega0, trunc, config.eps_div);

    // Alternation: the provider re-solves the P-equation (warm-started) at
    // every trial omega of the Q-iteration.
    ReducedSequence v_cache(d.nu);
    auto provider = [&](std::span<const double> omega) -> const ReducedSequence& {
        WaveParameters lambda{a, std::vector<double>(omega.begin(), omega.end())};
        NewtonResult nr = newton_P(F, d, lambda, trunc, config, &v_cache);
        v_cache = std::move(nr.v);
        return v_cache;
    };
    std::vector<double> omega = solve_Q_for_omega(F, d, a, provider, config);

    // Cold re-solve at the converged parameters: the reported trace is the
    // contraction certificate of the final fixed point.
    WaveParameters lambda{a, omega};
    NewtonResult final_run = newton_P(F, d, lambda, trunc, config);

    WaveSolution out;
    out.a = std::move(a);
    out.omega = std::move(omega);
    out.omega0 = d.omega0;
    out.v = std::move(final_run.v);
    out.newton_trace = std::move(final_run.trace);
    return out;
}

}  // namespace

WaveSolution solve_wave(const ForceLaw& F, double gamma, double b, std::span<const double> a,
                        const TruncationSpec& trunc, const SolverConfig& config) {
    config.validate();
    if (std::abs(F.base_point - b) > 1e-15)
        throw PwError(ErrorCode::domain_error, "force law was expanded about a different b");
    const double alpha1 = F.alpha1();
    DispersionData d = make_dispersion(alpha1, gamma);
    const int nu = d.nu;
    if (static_cast<int>(a.size()) != nu)
        throw PwError(ErrorCode::dimension_mismatch,
                      "amplitude vector has length " + std::to_string(a.size()) +
                          " but the dispersion relation carries " + std::to_string(nu) + " phases");

    std::vector<int> active;
    for (int j = 0; j < nu; ++j)
        if (a[static_cast<std::size_t>(j)] != 0.0) active.push_back(j);

    if (active.empty()) return trivial_solution(d, nu);

    if (static_cast<int>(active.size()) < nu) {
        // Vanishing amplitudes decouple: solve on the complementary
        // sublattice and embed. Removed phases keep omega_j = omega0_j; their
        // Q-components vanish identically.
        DispersionData ds = subproblem(d, active);
        TruncationSpec ts = make_truncation(ds.nu, trunc.N);
        std::vector<double> as(active.size());
        for (std::size_t i = 0; i < active.size(); ++i)
            as[i] = a[static_cast<std::size_t>(active[i])];

        WaveSolution sub = solve_sub(F, ds, as, ts, config);

        WaveSolution out;
        out.a.assign(a.begin(), a.end());
        out.omega = d.omega0;
        out.omega0 = d.omega0;
        FourierSequence v_full(nu);
        for (const auto& [m, val] : sub.v.seq().reps()) {
            ModeIndex mf(nu);
            for (std::size_t i = 0; i < active.size(); ++i) mf.set(active[i], m[static_cast<int>(i)]);
            v_full.set(mf, val);
        }
        for (std::size_t i = 0; i < active.size(); ++i)
            out.omega[static_cast<std::size_t>(active[i])] = sub.omega[i];
        out.v = ReducedSequence(std::move(v_full));
        out.newton_trace = sub.newton_trace;
        WaveParameters lambda{out.a, out.omega};
        out.report = make_report(F, d, lambda, out.v, trunc, config);
        return out;
    }

    WaveSolution s = solve_sub(F, d, std::vector<double>(a.begin(), a.end()), trunc, config);
    WaveParameters lambda{s.a, s.omega};
    s.report = make_report(F, d, lambda, s.v, trunc, config);
    return s;
}

SecondOrderCheck second_order_check(const ForceLaw& F, double gamma, double b,
                                    const TruncationSpec& trunc, const SolverConfig& config,
                                    double h_fd) {
    DispersionData d = make_dispersion(F.alpha1(), gamma);
    const int nu = d.nu;
    const double h = h_fd;

    auto omega_at = [&](const std::vector<double>& a) {
        return solve_wave(F, gamma, b, a, trunc, config).omega;
    };

    std::vector<double> base(static_cast<std::size_t>(nu), h);
    std::vector<double> w0 = omega_at(base);

    SecondOrderCheck out;
    out.h_fd = h;
    out.fd.resize(nu, nu);
    std::vector<std::vector<double>> wj(static_cast<std::size_t>(nu));
    for (int j = 0; j < nu; ++j) {
        std::vector<double> aj = base;
        aj[static_cast<std::size_t>(j)] += h;
        wj[static_cast<std::size_t>(j)] = omega_at(aj);
        for (int l = 0; l < nu; ++l)
            out.fd(j, l) = 2.0 *
                           (wj[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] -
                            w0[static_cast<std::size_t>(l)]) /
                           (3.0 * h * h);
    }

    out.omega_mat = omega_matrix(F, d).entries;
    out.max_diag_abs_err = (out.fd - out.omega_mat).cwiseAbs().maxCoeff();
    out.max_diag_rel_err = 0.0;
    for (int j = 0; j < nu; ++j)
        for (int l = 0; l < nu; ++l)
            out.max_diag_rel_err = std::max(
                out.max_diag_rel_err, std::abs(out.fd(j, l) - out.omega_mat(j, l)) /
                                          std::max(std::abs(out.omega_mat(j, l)), 1e-30));

    out.max_mixed = 0.0;
    for (int j = 0; j < nu; ++j) {
        for (int k = j + 1; k < nu; ++k) {
            std::vector<double> ajk = base;
            ajk[static_cast<std::size_t>(j)] += h;
            ajk[static_cast<std::size_t>(k)] += h;
            std::vector<double> wjk = omega_at(ajk);
            for (int l = 0; l < nu; ++l) {
                double mixed = (wjk[static_cast<std::size_t>(l)] -
                                wj[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] -
                                wj[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] +
                                w0[static_cast<std::size_t>(l)]) /
                               (h * h);
                out.max_mixed = std::max(out.max_mixed, std::abs(mixed));
            }
        }
    }
    return out;
}

std::vector<SweepRow> amplitude_sweep(const ForceLaw& F, double gamma, double b,
                                      const std::vector<std::vector<double>>& directions,
                                      std::span<const double> magnitudes,
                                      const TruncationSpec& trunc, const SolverConfig& config) {
    std::vector<SweepRow> rows(directions.size() * magnitudes.size());
    parallel_for(rows.size(), [&](std::size_t idx) {
        std::size_t di = idx / magnitudes.size();
        std::size_t mi = idx % magnitudes.size();
        SweepRow& row = rows[idx];
        row.direction_index = di;
        row.magnitude = magnitudes[mi];
        row.a.resize(directions[di].size());
        for (std::size_t j = 0; j < row.a.size(); ++j) row.a[j] = directions[di][j] * row.magnitude;
        try {
            WaveSolution s = solve_wave(F, gamma, b, row.a, trunc, config);
            row.ok = true;
            row.omega = s.omega;
            row.omega0 = s.omega0;
            row.p_residual = s.report.p_residual_norm;
            double mq = 0.0;
            for (double q : s.report.q_residual) mq = std::max(mq, std::abs(q));
            row.max_q_residual = mq;
        } catch (const PwError& e) {
            row.ok = false;
            row.error = error_code_name(e.code());
        }
    });
    return rows;
}

}  // namespace phasewave
