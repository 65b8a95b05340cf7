#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "phasewave/errors.hpp"

namespace phasewave {

/// Banach fixed point of Prop-style hypotheses: given F with
/// ||DF(x) - I|| <= 1/5 on the eta-ball around x0 and |F(x0)| <= 2 eta / 5,
/// the contraction T(x) = x - DF(x0)^{-1} F(x) has a unique zero y with
/// |y - x0| <= (5/2) |F(x0)|. Hypotheses are sampled numerically at x0;
/// violations throw. Norms are max norms.
struct FixedPointResult {
    Eigen::VectorXcd y;
    double f_x0_norm = 0.0;
    double df_deviation = 0.0;  // ||DF(x0) - I||_inf
    int iterations = 0;
};

FixedPointResult banach_fixed_point(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& F, const Eigen::VectorXcd& x0,
    double eta, double tol = 1e-14, int max_iter = 200);

/// Analytic input f(z, lambda) = z^d + sum_{j<d} a_j(lambda) z^j + r(z, lambda)
/// on |z| < delta, lambda near lambda0. a_j and r are callables; r must be
/// analytic in z on the closed delta-disc.
struct WeierstrassProblem {
    int d = 1;
    double delta = 1.0;  // z-domain radius, <= 1
    double rho = 0.1;    // lambda-domain radius (hypothesis bookkeeping only)
    Eigen::VectorXd lambda0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> poly_coeffs;  // a_0..a_{d-1}
    std::function<std::complex<double>(std::complex<double>, const Eigen::VectorXd&)> remainder;
    std::vector<Eigen::VectorXd> lambda_grid;
    std::vector<std::complex<double>> z_verify;  // verification points, |z| <= delta/4
    int taylor_order = 12;                       // split order B2 of the remainder
    int quad_nodes = 256;                        // trapezoid nodes per contour
};

/// Factorization f = (1 + Q) (z^d + sum b_j z^j) with certificates
/// |Q| <= 1/10 and |b_j| <= 1/(2d) on the verification grid.
struct PreparationResult {
    std::vector<Eigen::VectorXd> b_coefficients;  // one vector per lambda grid point
    double q_factor_bound = 0.0;                  // sup |Q| on the verification grid
    double residual = 0.0;                        // sup |f - (1+Q) p_b|
    double epsilon = 0.0;                         // measured remainder bound
    bool q_certificate = false;                   // |Q| <= 1/10
    bool b_certificate = false;                   // |b_j| <= 1/(2d)
};

/// Two-stage preparation: stage one prepares the polynomial Taylor part of
/// the remainder on the unit contour, stage two corrects for the analytic
/// tail on a contour |s| = alpha in (delta/2, delta) kept away from the roots
/// of the stage-one polynomial. Q is recovered by contour quadrature.
PreparationResult weierstrass_prepare(const WeierstrassProblem& prob);

}  // namespace phasewave
