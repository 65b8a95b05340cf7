#include "phasewave/reduction.hpp"

#include <cmath>
#include <complex>

namespace phasewave {

namespace {

bool is_kernel_mode(const ModeIndex& m) {
    // +-e_j: exactly one component, equal to +-1.
    int nonzero = -1;
    for (int i = 0; i < m.nu(); ++i) {
        if (m[i] != 0) {
            if (nonzero >= 0 || std::abs(m[i]) != 1) return false;
            nonzero = i;
        }
    }
    return nonzero >= 0;
}

int g_dot(std::span<const int> g, const ModeIndex& m) {
    int s = 0;
    for (int i = 0; i < m.nu(); ++i) s += g[static_cast<std::size_t>(i)] * m[i];
    return s;
}

double omega_dot(std::span<const double> omega, const ModeIndex& m) {
    double s = 0.0;
    for (int i = 0; i < m.nu(); ++i) s += omega[static_cast<std::size_t>(i)] * m[i];
    return s;
}

void check_divisor_floor(const FourierSequence& u, std::span<const double> omega,
                         std::span<const int> g, double eps_div, bool all_modes) {
    for (const auto& [m, v] : u.reps()) {
        if (m.is_zero()) continue;
        if (!all_modes && g_dot(g, m) == 0) continue;
        double s = std::abs(std::sin(reduce_mod_2pi(omega_dot(omega, m)) / 2.0));
        if (s < eps_div)
            throw PwError(ErrorCode::resonance, "resonant mode " + m.to_string(),
                          {{"mode", m.to_string()}, {"sin_half", num_str(s)}});
    }
}

}  // namespace

ReducedSequence::ReducedSequence(FourierSequence s) : seq_(std::move(s)) { check(seq_); }

void ReducedSequence::check(const FourierSequence& s) {
    for (const auto& [m, v] : s.reps()) {
        if (m.is_zero())
            throw PwError(ErrorCode::internal_inconsistency, "reduced sequence has a mode-0 entry");
        if (is_kernel_mode(m))
            throw PwError(ErrorCode::internal_inconsistency,
                          "reduced sequence has a kernel-mode entry at " + m.to_string());
    }
}

FourierSequence phi(std::span<const double> a) {
    const int nu = static_cast<int>(a.size());
    FourierSequence u(nu);
    for (int j = 0; j < nu; ++j) u.set(ModeIndex::unit(nu, j), a[static_cast<std::size_t>(j)]);
    return u;
}

FourierSequence project_Q(const FourierSequence& u) {
    FourierSequence out(u.nu());
    for (const auto& [m, v] : u.reps())
        if (is_kernel_mode(m)) out.set(m, v);
    return out;
}

ReducedSequence project_P(const FourierSequence& u) {
    FourierSequence out(u.nu());
    for (const auto& [m, v] : u.reps())
        if (!m.is_zero() && !is_kernel_mode(m)) out.set(m, v);
    return ReducedSequence(std::move(out));
}

ReducedSequence P_functional(const ForceLaw& F, const DispersionData& d, const ReducedSequence& v,
                             const WaveParameters& lambda, const WeightSpec& spec, double eps_div) {
    check_divisor_floor(v.seq(), lambda.omega, d.g, eps_div, false);
    FourierSequence u = phi(lambda.a);
    u.add_scaled(v.seq(), 1.0);
    FourierSequence out = apply_W(F, u, spec).value;
    FourierSequence pw = project_P(out).seq();
    // D(omega) v
    for (const auto& [m, val] : v.seq().reps())
        pw.add(m, V_of_omega(d, lambda.omega, m) * val);
    return ReducedSequence(std::move(pw));
}

std::vector<double> Q_functional(const ForceLaw& F, const DispersionData& d,
                                 const ReducedSequence& v, const WaveParameters& lambda,
                                 const WeightSpec& spec, double eps_div) {
    check_divisor_floor(v.seq(), lambda.omega, d.g, eps_div, false);
    FourierSequence u = phi(lambda.a);
    u.add_scaled(v.seq(), 1.0);
    FourierSequence w = apply_W(F, u, spec).value;
    std::vector<double> h(static_cast<std::size_t>(d.nu));
    for (int j = 0; j < d.nu; ++j) {
        ModeIndex ej = ModeIndex::unit(d.nu, j);
        double Vj = V_scalar(d.alpha1, d.gamma, d.g[static_cast<std::size_t>(j)],
                             lambda.omega[static_cast<std::size_t>(j)]);
        h[static_cast<std::size_t>(j)] = lambda.a[static_cast<std::size_t>(j)] * Vj + w.at(ej);
    }
    return h;
}

FourierSequence full_residual(const ForceLaw& F, const DispersionData& d, const FourierSequence& u,
                              std::span<const double> omega, const WeightSpec& spec,
                              double eps_div) {
    check_divisor_floor(u, omega, d.g, eps_div, false);
    FourierSequence res = apply_W(F, u, spec).value;
    res.set(ModeIndex(u.nu()), 0.0);  // the equation lives on m != 0
    for (const auto& [m, val] : u.reps()) {
        if (m.is_zero()) continue;
        res.add(m, V_of_omega(d, omega, m) * val);
    }
    return res;
}

namespace {

struct ProfileTerms {
    // One term per full-support mode: coefficient u(m)/(-2i sin(<omega,m>/2))
    // and the integer mode.
    std::vector<std::complex<double>> coeff;
    std::vector<ModeIndex> mode;
};

ProfileTerms profile_terms(const FourierSequence& u, std::span<const double> omega,
                           double eps_div) {
    ProfileTerms t;
    for (const auto& [m, v] : u.full_support()) {
        if (m.is_zero()) {
            if (v != 0.0)
                throw PwError(ErrorCode::internal_inconsistency, "profile input has a mode-0 entry");
            continue;
        }
        double s = std::sin(reduce_mod_2pi(omega_dot(omega, m)) / 2.0);
        // reduce_mod_2pi drops full periods; sin(x/2) flips sign per period,
        // but only |s| is constrained here and the signed value is recovered
        // from the parity of the period count.
        double full = omega_dot(omega, m);
        double k = std::nearbyint(full / (2.0 * M_PI));
        if (std::fmod(std::abs(k), 2.0) == 1.0) s = -s;
        if (std::abs(s) < eps_div)
            throw PwError(ErrorCode::resonance, "resonant mode " + m.to_string() + " in profile",
                          {{"mode", m.to_string()}});
        t.coeff.push_back(std::complex<double>(0.0, v / (2.0 * s)));  // 1/(-2i s) = i/(2s)
        t.mode.push_back(m);
    }
    return t;
}

}  // namespace

std::vector<double> reconstruct_profile(const FourierSequence& u, std::span<const double> omega,
                                        const std::vector<std::vector<double>>& xi_grid,
                                        double eps_div, const std::vector<double>* zeta) {
    ProfileTerms t = profile_terms(u, omega, eps_div);
    double scale = 0.0;
    for (const auto& c : t.coeff) scale += std::abs(c);
    scale = std::max(scale, 1.0);

    std::vector<double> out(xi_grid.size(), 0.0);
    for (std::size_t p = 0; p < xi_grid.size(); ++p) {
        const auto& xi = xi_grid[p];
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < t.coeff.size(); ++k) {
            double phase = 0.0;
            for (int i = 0; i < t.mode[k].nu(); ++i) {
                double x = xi[static_cast<std::size_t>(i)];
                if (zeta) x += (*zeta)[static_cast<std::size_t>(i)];
                phase += t.mode[k][i] * x;
            }
            acc += t.coeff[k] * std::polar(1.0, phase);
        }
        if (std::abs(acc.imag()) > 1e-12 * scale)
            throw PwError(ErrorCode::internal_inconsistency,
                          "profile has a non-real value; symmetry violated");
        out[p] = acc.real();
    }
    return out;
}

std::vector<double> profile_time_derivative(const FourierSequence& u, std::span<const double> omega,
                                            std::span<const int> g, double gamma,
                                            const std::vector<std::vector<double>>& xi_grid,
                                            double eps_div) {
    ProfileTerms t = profile_terms(u, omega, eps_div);
    double scale = 0.0;
    for (const auto& c : t.coeff) scale += std::abs(c);
    scale = std::max(scale, 1.0) * std::abs(gamma);

    std::vector<double> out(xi_grid.size(), 0.0);
    for (std::size_t p = 0; p < xi_grid.size(); ++p) {
        const auto& xi = xi_grid[p];
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < t.coeff.size(); ++k) {
            double phase = 0.0;
            for (int i = 0; i < t.mode[k].nu(); ++i) phase += t.mode[k][i] * xi[static_cast<std::size_t>(i)];
            double mg = static_cast<double>(g_dot(g, t.mode[k]));
            acc += t.coeff[k] * std::complex<double>(0.0, -mg * gamma) * std::polar(1.0, phase);
        }
        if (std::abs(acc.imag()) > 1e-11 * scale)
            throw PwError(ErrorCode::internal_inconsistency,
                          "profile velocity has a non-real value; symmetry violated");
        out[p] = acc.real();
    }
    return out;
}

namespace {

std::vector<std::vector<double>> trajectory_grid(std::span<const double> omega, double gamma,
                                                 std::span<const int> g, int n_min, int n_max,
                                                 std::span<const double> t_grid) {
    std::vector<std::vector<double>> xi;
    xi.reserve(static_cast<std::size_t>(n_max - n_min + 1) * t_grid.size());
    for (int n = n_min; n <= n_max; ++n)
        for (double t : t_grid) {
            std::vector<double> point(omega.size());
            for (std::size_t i = 0; i < omega.size(); ++i)
                point[i] = omega[i] * n - g[i] * gamma * t;
            xi.push_back(std::move(point));
        }
    return xi;
}

}  // namespace

std::vector<double> sample_wave(const FourierSequence& u, std::span<const double> omega, double b,
                                double gamma, std::span<const int> g, int n_min, int n_max,
                                std::span<const double> t_grid, double eps_div) {
    auto xi = trajectory_grid(omega, gamma, g, n_min, n_max, t_grid);
    auto chi = reconstruct_profile(u, omega, xi, eps_div);
    std::size_t idx = 0;
    for (int n = n_min; n <= n_max; ++n)
        for (std::size_t k = 0; k < t_grid.size(); ++k) chi[idx++] += b * n;
    return chi;
}

std::vector<double> sample_wave_velocity(const FourierSequence& u, std::span<const double> omega,
                                         double gamma, std::span<const int> g, int n_min, int n_max,
                                         std::span<const double> t_grid, double eps_div) {
    auto xi = trajectory_grid(omega, gamma, g, n_min, n_max, t_grid);
    return profile_time_derivative(u, omega, g, gamma, xi, eps_div);
}

WaveSampler::WaveSampler(const FourierSequence& u, std::span<const double> omega, double b,
                         double gamma, std::span<const int> g, double eps_div)
    : b_(b) {
    for (const auto& [m, v] : u.reps()) {
        if (m.is_zero()) {
            if (v != 0.0)
                throw PwError(ErrorCode::internal_inconsistency, "sampler input has a mode-0 entry");
            continue;
        }
        double full = omega_dot(omega, m);
        double s = std::sin(reduce_mod_2pi(full) / 2.0);
        double k = std::nearbyint(full / (2.0 * M_PI));
        if (std::fmod(std::abs(k), 2.0) == 1.0) s = -s;
        if (std::abs(s) < eps_div)
            throw PwError(ErrorCode::resonance, "resonant mode " + m.to_string() + " in sampler");
        amp_.push_back(-v / s);
        m_omega_.push_back(full);
        m_g_gamma_.push_back(static_cast<double>(g_dot(g, m)) * gamma);
    }
}

double WaveSampler::position(int n, double t) const {
    double x = b_ * n;
    for (std::size_t k = 0; k < amp_.size(); ++k)
        x += amp_[k] * std::sin(m_omega_[k] * n - m_g_gamma_[k] * t);
    return x;
}

double WaveSampler::velocity(int n, double t) const {
    double v = 0.0;
    for (std::size_t k = 0; k < amp_.size(); ++k)
        v += amp_[k] * std::cos(m_omega_[k] * n - m_g_gamma_[k] * t) * (-m_g_gamma_[k]);
    return v;
}

}  // namespace phasewave
