#pragma once

#include <span>

#include "phasewave/spectral.hpp"

namespace phasewave {

/// lambda = (a, omega): amplitudes and frequency vector of one solve.
struct WaveParameters {
    std::vector<double> a;
    std::vector<double> omega;
};

/// P-supported sequence: vanishes on {0} and on the kernel set S = {+-e_j}.
/// Even real symmetry is inherited from FourierSequence.
class ReducedSequence {
  public:
    ReducedSequence() = default;
    explicit ReducedSequence(int nu) : seq_(nu) {}
    explicit ReducedSequence(FourierSequence s);

    const FourierSequence& seq() const { return seq_; }
    FourierSequence& seq() { return seq_; }
    int nu() const { return seq_.nu(); }

  private:
    static void check(const FourierSequence& s);
    FourierSequence seq_;
};

/// Residual diagnostics of a converged (or attempted) solve.
struct ResidualReport {
    double p_residual_norm = 0.0;
    std::vector<double> q_residual;  // Q functional at e_j
    double min_divisor = 0.0;        // smallest |V(omega)(m)| over the mode set
    ModeIndex worst_mode;
};

/// Kernel parameterization phi(a)(+-e_j) = a_j.
FourierSequence phi(std::span<const double> a);

/// Q keeps the kernel modes +-e_j; P zeroes {0} and the kernel set.
FourierSequence project_Q(const FourierSequence& u);
ReducedSequence project_P(const FourierSequence& u);

/// P(v, lambda) = D(omega) v + P W(phi(a) + v), D(omega)(m,m) = V(omega)(m).
/// Any support mode with <g,m> != 0 and |sin(<omega,m>/2)| < eps_div raises a
/// resonance error naming the mode.
ReducedSequence P_functional(const ForceLaw& F, const DispersionData& d, const ReducedSequence& v,
                             const WaveParameters& lambda, const WeightSpec& spec,
                             double eps_div = 1e-8);

/// Q(v, lambda) at the kernel modes: h_j = a_j V_j(omega_j) + W(phi(a)+v)(e_j).
std::vector<double> Q_functional(const ForceLaw& F, const DispersionData& d,
                                 const ReducedSequence& v, const WaveParameters& lambda,
                                 const WeightSpec& spec, double eps_div = 1e-8);

/// Full equation residual V(omega)(m) u(m) + W(u)(m) on the union support
/// (mode 0 excluded). The linear-exactness and ODE-consistency checks read
/// this directly.
FourierSequence full_residual(const ForceLaw& F, const DispersionData& d, const FourierSequence& u,
                              std::span<const double> omega, const WeightSpec& spec,
                              double eps_div = 1e-8);

/// Profile chi(xi) = sum_m u(m) / (-2 i sin(<omega,m>/2)) e^{i <m, xi + zeta>}.
/// Summed in complex arithmetic over the full support; the imaginary part is
/// asserted below 1e-12 (relative) and discarded.
std::vector<double> reconstruct_profile(const FourierSequence& u, std::span<const double> omega,
                                        const std::vector<std::vector<double>>& xi_grid,
                                        double eps_div = 1e-8,
                                        const std::vector<double>* zeta = nullptr);

/// d chi / dt along xi(t) = omega n - g gamma t, evaluated at the grid points:
/// sum_m u(m) (-i <m,g> gamma) / (-2 i sin(<omega,m>/2)) e^{i<m,xi>}.
std::vector<double> profile_time_derivative(const FourierSequence& u, std::span<const double> omega,
                                            std::span<const int> g, double gamma,
                                            const std::vector<std::vector<double>>& xi_grid,
                                            double eps_div = 1e-8);

/// Trajectory samples x_n(t) = n b + chi(omega n - g gamma t) for n in
/// [n_min, n_max] x t_grid; row-major over (n, t).
std::vector<double> sample_wave(const FourierSequence& u, std::span<const double> omega, double b,
                                double gamma, std::span<const int> g, int n_min, int n_max,
                                std::span<const double> t_grid, double eps_div = 1e-8);

/// Velocities dx_n/dt on the same (n, t) grid, by term-wise differentiation.
std::vector<double> sample_wave_velocity(const FourierSequence& u, std::span<const double> omega,
                                         double gamma, std::span<const int> g, int n_min, int n_max,
                                         std::span<const double> t_grid, double eps_div = 1e-8);

/// Precomputed term table for repeated trajectory evaluation: each +-pair of
/// modes collapses to one real sine term
///   x_n(t) = n b - sum_reps u(m)/sin(<omega,m>/2) sin(<m, omega> n - <m,g> gamma t).
/// Agrees with sample_wave; used where the ansatz is evaluated many times.
class WaveSampler {
  public:
    WaveSampler(const FourierSequence& u, std::span<const double> omega, double b, double gamma,
                std::span<const int> g, double eps_div = 1e-8);

    double position(int n, double t) const;
    double velocity(int n, double t) const;

  private:
    double b_;
    std::vector<double> amp_;      // -u(m) / sin(<omega,m>/2)
    std::vector<double> m_omega_;  // <m, omega>
    std::vector<double> m_g_gamma_;
};

}  // namespace phasewave
