#pragma once

#include <functional>
#include <optional>

#include "phasewave/reduction.hpp"

namespace phasewave {

/// One fixed truncation scale: mode_set = {m : 0 < |m| <= N} minus the kernel
/// set, closed under negation; reduced_set holds the canonical half.
struct TruncationSpec {
    int N = 0;
    std::vector<ModeIndex> mode_set;
    std::vector<ModeIndex> reduced_set;
};

TruncationSpec make_truncation(int nu, int N);

struct SolverConfig {
    double tol_P = 1e-12;       // P-residual tolerance, weighted norm
    double tol_Q = 1e-13;       // tolerance on max_j |h~_j|
    int max_newton = 25;        // inner Newton cap
    int max_outer = 60;         // omega-update cap
    double eps_div = 1e-8;      // divisor floor
    WeightSpec weight;          // weight of all solver norms
    double damping = 1.0;       // initial damping factor in (0,1]

    void validate() const;
};

/// Converged wave: amplitudes, solved frequencies, reduced correction v,
/// diagnostics. newton_trace is the residual history of a from-zero Newton
/// run at the returned parameters (the contraction certificate).
struct WaveSolution {
    std::vector<double> a;
    std::vector<double> omega;
    std::vector<double> omega0;
    ReducedSequence v;
    ResidualReport report;
    std::vector<double> newton_trace;
};

/// Dense linearized operator on the reduced representative set with the
/// +-symmetry folded in: A(i,j) = V(omega)(m_i) delta_ij + r(m_i - m_j)
/// + r(m_i + m_j), where r is the DW symbol at phi(a) + v.
Eigen::MatrixXd assemble_linearized(const ForceLaw& F, const DispersionData& d,
                                    const WaveParameters& lambda, const ReducedSequence& v,
                                    const TruncationSpec& trunc, const WeightSpec& spec,
                                    double eps_div = 1e-8);

struct NewtonResult {
    ReducedSequence v;
    std::vector<double> trace;  // full P-residual norm per iteration
};

/// Modified Newton iteration for the P-equation at fixed lambda: iterates
/// v <- v - T^{-1} P(v, lambda) with T restricted to the truncated mode set.
/// Stops when the full weighted residual is below tol_P.
NewtonResult newton_P(const ForceLaw& F, const DispersionData& d, const WaveParameters& lambda,
                      const TruncationSpec& trunc, const SolverConfig& config,
                      const ReducedSequence* warm_start = nullptr);

/// Solves h~(a, omega) = 0 for omega, where h~_j = V_j(omega_j) +
/// W(phi(a)+v)(e_j)/a_j and v = v_provider(omega) is the P-solution at the
/// trial frequency. Requires all a_j != 0. The Jacobian starts as diag(Lambda)
/// and is refined by forward differences near convergence.
std::vector<double> solve_Q_for_omega(
    const ForceLaw& F, const DispersionData& d, std::span<const double> a,
    const std::function<const ReducedSequence&(std::span<const double>)>& v_provider,
    const SolverConfig& config, std::optional<std::vector<double>> omega_start = std::nullopt);

/// Combined solve: alternates P-solves and omega updates until both
/// tolerances hold. Vanishing amplitudes remove their phases and the lower
/// phase-count problem is solved on the complementary sublattice; removed
/// components report omega_j = omega0_j (their Q-component vanishes
/// identically).
WaveSolution solve_wave(const ForceLaw& F, double gamma, double b, std::span<const double> a,
                        const TruncationSpec& trunc, const SolverConfig& config);

struct SecondOrderCheck {
    Eigen::MatrixXd fd;          // fd(j,l) ~ d^2 omega_l / d a_j^2 (0)
    Eigen::MatrixXd omega_mat;   // Omega
    double max_diag_abs_err = 0.0;    // max_{j,l} |fd(j,l) - Omega(j,l)|
    double max_diag_rel_err = 0.0;    // per entry, relative
    double max_mixed = 0.0;           // max |d^2 omega_l / d a_j d a_k|, j != k
    double h_fd = 0.0;
};

/// Finite-difference probe of the second-order dispersion structure against
/// the Omega matrix. Stencils are offset to the base point h (1,...,1) so
/// every solve keeps all amplitudes nonzero:
///   d^2 omega_l / d a_j^2 (0)  ~  2 [omega_l(base + h e_j) - omega_l(base)] / (3 h^2),
/// exact to O(h^2) because omega is even in each amplitude coordinate.
SecondOrderCheck second_order_check(const ForceLaw& F, double gamma, double b,
                                    const TruncationSpec& trunc, const SolverConfig& config,
                                    double h_fd);

struct SweepRow {
    std::size_t direction_index = 0;
    double magnitude = 0.0;
    std::vector<double> a;
    bool ok = false;
    std::vector<double> omega;
    std::vector<double> omega0;
    double p_residual = 0.0;
    double max_q_residual = 0.0;
    std::string error;  // error code name on failure
};

/// Grid of solves for regression and CSV output; failed rows carry the error
/// tag instead of values. Rows run concurrently (PHASEWAVE_THREADS).
std::vector<SweepRow> amplitude_sweep(const ForceLaw& F, double gamma, double b,
                                      const std::vector<std::vector<double>>& directions,
                                      std::span<const double> magnitudes,
                                      const TruncationSpec& trunc, const SolverConfig& config);

}  // namespace phasewave
