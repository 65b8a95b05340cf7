#include "phasewave/spectral.hpp"

#include <cmath>
#include <limits>

#include "phasewave/parallel.hpp"

namespace phasewave {

namespace {
constexpr double kBoundaryTol = 1e-9;   // relative tolerance for the A2 boundary
constexpr double kTolEntry = 1e-8;      // A4: smallest admissible |Omega entry|
constexpr double kTolDet = 1e-10;       // A4: smallest admissible |det Omega|

// 2 pi = kTwoPiHi + kTwoPiLo to beyond double precision.
constexpr double kTwoPiHi = 6.283185307179586476925286766559;
constexpr double kTwoPiLo = 2.4492935982947063545443076996889e-16;

int g_dot(const std::vector<int>& g, const ModeIndex& m) {
    int s = 0;
    for (int i = 0; i < m.nu(); ++i) s += g[static_cast<std::size_t>(i)] * m[i];
    return s;
}

double omega_dot(std::span<const double> omega, const ModeIndex& m) {
    double s = 0.0;
    for (int i = 0; i < m.nu(); ++i) s += omega[static_cast<std::size_t>(i)] * m[i];
    return s;
}

}  // namespace

double reduce_mod_2pi(double x) {
    double k = std::nearbyint(x / kTwoPiHi);
    double r = (x - k * kTwoPiHi) - k * kTwoPiLo;
    // One correction step keeps r in (-pi, pi].
    if (r > kTwoPiHi / 2) r -= kTwoPiHi;
    if (r <= -kTwoPiHi / 2) r += kTwoPiHi;
    return r;
}

int phase_count(double alpha1, double gamma) {
    if (!(gamma > 0.0) || !(alpha1 > 0.0))
        throw PwError(ErrorCode::domain_error, "phase count requires gamma > 0 and alpha_1 > 0");
    double ratio = 2.0 * std::sqrt(alpha1) / gamma;
    double nearest = std::nearbyint(ratio);
    if (nearest >= 1.0 && std::abs(ratio - nearest) <= kBoundaryTol * std::max(1.0, ratio))
        throw PwError(ErrorCode::a2_violation,
                      "assumption A2 violated: 2 sqrt(alpha_1) is an integer multiple of gamma",
                      {{"ratio", num_str(ratio)}});
    int nu = static_cast<int>(std::floor(ratio));
    if (nu < 1)
        throw PwError(ErrorCode::nu_zero,
                      "no bounded travelling waves: gamma >= 2 sqrt(alpha_1)",
                      {{"ratio", num_str(ratio)}});
    return nu;
}

std::vector<double> omega0_vector(double alpha1, double gamma, int nu) {
    std::vector<double> w(static_cast<std::size_t>(nu));
    for (int j = 1; j <= nu; ++j) {
        double arg = static_cast<double>(j) * gamma / (2.0 * std::sqrt(alpha1));
        if (!(arg < 1.0))
            throw PwError(ErrorCode::internal_inconsistency,
                          "arcsin argument >= 1; phase count inconsistent with gamma");
        w[static_cast<std::size_t>(j - 1)] = 2.0 * std::asin(arg);
    }
    return w;
}

DispersionData make_dispersion_for(double alpha1, double gamma, const std::vector<int>& g) {
    DispersionData d;
    d.nu = static_cast<int>(g.size());
    d.gamma = gamma;
    d.alpha1 = alpha1;
    d.g = g;
    d.omega0.resize(g.size());
    d.Lambda.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        double arg = static_cast<double>(g[j]) * gamma / (2.0 * std::sqrt(alpha1));
        if (!(arg > 0.0 && arg < 1.0))
            throw PwError(ErrorCode::internal_inconsistency, "invalid kernel label in dispersion data");
        double w = 2.0 * std::asin(arg);
        d.omega0[j] = w;
        double s = std::sin(w / 2.0), c = std::cos(w / 2.0);
        double lg = static_cast<double>(g[j]) * gamma;
        d.Lambda[j] = lg * lg * c / (4.0 * s * s * s);
    }
    return d;
}

DispersionData make_dispersion(double alpha1, double gamma) {
    int nu = phase_count(alpha1, gamma);
    std::vector<int> g(static_cast<std::size_t>(nu));
    for (int j = 0; j < nu; ++j) g[static_cast<std::size_t>(j)] = j + 1;
    return make_dispersion_for(alpha1, gamma, g);
}

DispersionData subproblem(const DispersionData& d, const std::vector<int>& active) {
    std::vector<int> g;
    g.reserve(active.size());
    for (int j : active) g.push_back(d.g[static_cast<std::size_t>(j)]);
    return make_dispersion_for(d.alpha1, d.gamma, g);
}

double V_scalar(double alpha1, double gamma, int l, double theta) {
    if (l == 0) return alpha1;
    double r = reduce_mod_2pi(theta);
    double s = std::sin(r / 2.0);  // |sin(theta/2)| = |sin(r/2)|
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    double lg = static_cast<double>(l) * gamma;
    return alpha1 - lg * lg / (4.0 * s * s);
}

double V_of_omega(const DispersionData& d, std::span<const double> omega, const ModeIndex& m) {
    return V_scalar(d.alpha1, d.gamma, std::abs(g_dot(d.g, m)), omega_dot(omega, m));
}

double V_of_theta(const DispersionData& d, double theta, std::span<const double> omega,
                  const ModeIndex& m) {
    return V_scalar(d.alpha1, d.gamma, std::abs(g_dot(d.g, m)), theta + omega_dot(omega, m));
}

std::vector<double> lambda_vector(const DispersionData& d) { return d.Lambda; }

OmegaMatrix omega_matrix(const ForceLaw& F, const DispersionData& d) {
    const int nu = d.nu;
    if (F.order() < 3)
        throw PwError(ErrorCode::domain_error, "Omega matrix needs Taylor order K >= 3");
    double F2 = 2.0 * F.alpha[2];  // F''(-b)
    double F3 = 6.0 * F.alpha[3];  // F'''(-b)

    OmegaMatrix out;
    out.entries.resize(nu, nu);
    auto Vat = [&](const ModeIndex& m) {
        double v = V_of_omega(d, d.omega0, m);
        if (!std::isfinite(v) || v == 0.0)
            throw PwError(ErrorCode::internal_inconsistency,
                          "degenerate divisor in Omega matrix at mode " + m.to_string());
        return v;
    };
    for (int j = 0; j < nu; ++j) {
        for (int l = 0; l < nu; ++l) {
            ModeIndex ej = ModeIndex::unit(nu, j), el = ModeIndex::unit(nu, l);
            double lam = d.Lambda[static_cast<std::size_t>(l)];
            if (j == l) {
                out.entries(j, l) = 3.0 / lam * (F2 * F2 / Vat(el + el) - F3);
            } else {
                out.entries(j, l) =
                    2.0 / lam * (F2 * F2 * (1.0 / Vat(ej + el) + 1.0 / Vat(ej - el)) - F3);
            }
        }
    }
    out.determinant = out.entries.determinant();
    out.min_abs_entry = out.entries.cwiseAbs().minCoeff();
    return out;
}

AssumptionReport check_assumptions(const ForceLaw& F, double gamma, double tau, int cutoff) {
    if (cutoff < 1) throw PwError(ErrorCode::domain_error, "cutoff must be >= 1");
    AssumptionReport rep;
    rep.cutoff = cutoff;
    rep.tau = tau;

    double alpha1 = F.alpha1();
    rep.a1_ok = alpha1 > 0.0;

    int nu = 0;
    if (rep.a1_ok && gamma > 0.0) {
        try {
            nu = phase_count(alpha1, gamma);
            rep.a2_ok = true;
        } catch (const PwError&) {
            rep.a2_ok = false;
        }
    }
    if (!rep.a1_ok || !rep.a2_ok) return rep;

    DispersionData d = make_dispersion(alpha1, gamma);

    // A3: exhaustive scan over canonical representatives, 0 < |m| <= cutoff.
    std::vector<ModeIndex> ms;
    {
        std::vector<int> idx(static_cast<std::size_t>(nu), -cutoff);
        while (true) {
            ModeIndex m(nu);
            for (int i = 0; i < nu; ++i) m.set(i, idx[static_cast<std::size_t>(i)]);
            if (!m.is_zero() && m.is_canonical()) ms.push_back(m);
            int i = 0;
            for (; i < nu; ++i) {
                if (++idx[static_cast<std::size_t>(i)] <= cutoff) break;
                idx[static_cast<std::size_t>(i)] = -cutoff;
            }
            if (i == nu) break;
        }
    }
    rep.a3_margin.resize(ms.size());
    parallel_for(ms.size(), [&](std::size_t i) {
        const ModeIndex& m = ms[i];
        double dot = 0.0;
        for (int k = 0; k < nu; ++k) dot += d.omega0[static_cast<std::size_t>(k)] * m[k];
        double margin = dist_to_2pi(dot) * std::pow(static_cast<double>(m.max_norm()), tau);
        rep.a3_margin[i] = {m, margin};
    });
    rep.a3_min_scaled_margin = std::numeric_limits<double>::infinity();
    for (const auto& [m, v] : rep.a3_margin) rep.a3_min_scaled_margin = std::min(rep.a3_min_scaled_margin, v);

    // A4 under A1-A2 (the entries are then well defined).
    try {
        OmegaMatrix om = omega_matrix(F, d);
        rep.a4_ok = om.min_abs_entry >= kTolEntry && std::abs(om.determinant) > kTolDet;
    } catch (const PwError&) {
        rep.a4_ok = false;
    }
    return rep;
}

}  // namespace phasewave
