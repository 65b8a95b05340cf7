#pragma once

#include <Eigen/Dense>
#include <functional>

#include "phasewave/reduction.hpp"

namespace phasewave {

/// Finite window [n_min, n_max] of the infinite chain.
struct ChainState {
    int n_min = 0;
    int n_max = 0;
    Eigen::VectorXd x;  // positions
    Eigen::VectorXd v;  // velocities
    double t = 0.0;

    Eigen::Index size() const { return x.size(); }
};

/// Positions of the ghost sites n_min - 1 and n_max + 1 at time t.
using BoundaryProvider = std::function<std::pair<double, double>(double t)>;

/// Accelerations of the chain equation with the boundary positions supplied:
/// a_n = F(x_{n-1} - x_n) - F(x_n - x_{n+1}).
Eigen::VectorXd chain_rhs(const ForceLaw& F, const ChainState& state, double x_left,
                          double x_right);

/// Classical fourth-order one-step integration over [state.t, state.t + T]
/// with fixed step dt; the boundary provider is evaluated at the stage times.
/// `observer`, when set, is called after every step.
ChainState integrate(const ForceLaw& F, ChainState state, const BoundaryProvider& boundary,
                     double T, double dt,
                     const std::function<void(const ChainState&)>& observer = nullptr);

struct VerificationReport {
    double max_deviation = 0.0;  // sup over interior (n,t) of |x_integrated - x_ansatz|
    double energy_drift = 0.0;   // relative window-Hamiltonian drift after boundary-flux correction
    long steps = 0;
    double dt = 0.0;
    Eigen::VectorXd site_deviation;  // per-site sup deviation, whole window
};

/// Initializes the window from the wave ansatz at t = 0 (positions and
/// analytic velocities), integrates with the ansatz as the exact boundary
/// driver, and reports the sup deviation over interior sites (the outermost
/// `interior_margin` sites on each side are excluded from max_deviation but
/// still appear in site_deviation).
VerificationReport verify_travelling_wave(const ForceLaw& F, const DispersionData& d,
                                          const FourierSequence& u, std::span<const double> omega,
                                          double b, int n_min, int n_max, double T, double dt,
                                          int interior_margin = 2, double eps_div = 1e-8);

}  // namespace phasewave
