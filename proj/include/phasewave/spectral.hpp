#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "phasewave/forcelaw.hpp"

namespace phasewave {

/// Linear dispersion data. The standard construction has g = (1, ..., nu);
/// sub-vectors of g arise when vanishing amplitudes remove phases from a
/// solve and the remaining phases keep their original integer labels.
struct DispersionData {
    int nu = 0;
    double gamma = 0.0;   // driving frequency > 0
    double alpha1 = 0.0;  // F'(-b)
    std::vector<int> g;               // integer labels, strictly increasing
    std::vector<double> omega0;       // omega^(0)_j = 2 asin(g_j gamma / (2 sqrt(alpha1)))
    std::vector<double> Lambda;       // V'_{g_j}(omega^(0)_j) > 0
};

/// Unique nu with nu gamma < 2 sqrt(alpha1) < (nu+1) gamma. Errors when
/// 2 sqrt(alpha1) is a multiple of gamma (A2 boundary) or when no bounded
/// wave exists (gamma >= 2 sqrt(alpha1)).
int phase_count(double alpha1, double gamma);

std::vector<double> omega0_vector(double alpha1, double gamma, int nu);

DispersionData make_dispersion(double alpha1, double gamma);
DispersionData make_dispersion_for(double alpha1, double gamma, const std::vector<int>& g);

/// Restriction to the phases listed in `active` (zero-based indices).
DispersionData subproblem(const DispersionData& d, const std::vector<int>& active);

/// Signed distance representative of x to 2 pi Z, computed with a two-term
/// split of 2 pi to avoid cancellation for large |x|. Returns r in (-pi, pi]
/// with x = r (mod 2 pi) up to rounding.
double reduce_mod_2pi(double x);
inline double dist_to_2pi(double x) { return std::abs(reduce_mod_2pi(x)); }

/// V(omega)(m) = alpha1 if <g,m> = 0, else
/// alpha1 - <g,m>^2 gamma^2 / (4 sin^2(<omega,m>/2)); +infinity sentinel when
/// the sine vanishes with <g,m> != 0.
double V_of_omega(const DispersionData& d, std::span<const double> omega, const ModeIndex& m);

/// Theta-shifted divisor V(theta, omega)(m) = V_{|<m,g>|}(theta + <omega,m>).
double V_of_theta(const DispersionData& d, double theta, std::span<const double> omega,
                  const ModeIndex& m);

/// V_l(theta) = alpha1 - l^2 gamma^2 / (4 sin^2(theta/2)).
double V_scalar(double alpha1, double gamma, int l, double theta);

std::vector<double> lambda_vector(const DispersionData& d);

struct OmegaMatrix {
    Eigen::MatrixXd entries;
    double determinant = 0.0;
    double min_abs_entry = 0.0;
};

/// Second-order coefficient matrix of the dispersion map; row j is the
/// second-derivative direction, column l the frequency component.
OmegaMatrix omega_matrix(const ForceLaw& F, const DispersionData& d);

struct AssumptionReport {
    bool a1_ok = false;
    bool a2_ok = false;
    bool a4_ok = false;
    /// (m, dist(<omega0,m>, 2 pi Z) * |m|^tau) for all 0 < |m| <= cutoff,
    /// one entry per +- pair.
    std::vector<std::pair<ModeIndex, double>> a3_margin;
    double a3_min_scaled_margin = 0.0;
    int cutoff = 0;
    double tau = 0.0;
};

/// Finite checker for assumptions A1-A4: a certificate scan, not a proof.
/// Failures are reported in the result, never thrown.
AssumptionReport check_assumptions(const ForceLaw& F, double gamma, double tau, int cutoff);

}  // namespace phasewave
