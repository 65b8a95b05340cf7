#include "phasewave/weierstrass.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>

namespace phasewave {

namespace {

using Cplx = std::complex<double>;

double max_norm(const Eigen::VectorXcd& v) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v(i)));
    return m;
}

Eigen::MatrixXcd numeric_jacobian(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& F,
                                  const Eigen::VectorXcd& x, double step) {
    Eigen::VectorXcd f0 = F(x);
    Eigen::MatrixXcd J(f0.size(), x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        Eigen::VectorXcd xp = x;
        xp(k) += step;
        J.col(k) = (F(xp) - f0) / step;
    }
    return J;
}

double inf_norm_dev_from_identity(const Eigen::MatrixXcd& J) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < J.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < J.cols(); ++j) {
            Cplx v = J(i, j) - (i == j ? Cplx(1.0) : Cplx(0.0));
            row += std::abs(v);
        }
        worst = std::max(worst, row);
    }
    return worst;
}

}  // namespace

FixedPointResult banach_fixed_point(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& F, const Eigen::VectorXcd& x0,
    double eta, double tol, int max_iter) {
    FixedPointResult out;
    Eigen::VectorXcd f0 = F(x0);
    out.f_x0_norm = max_norm(f0);

    Eigen::MatrixXcd J = numeric_jacobian(F, x0, 1e-7);
    out.df_deviation = inf_norm_dev_from_identity(J);
    if (out.df_deviation > 0.2)
        throw PwError(ErrorCode::hypothesis_violation,
                      "contraction certificate failed: ||DF - I|| > 1/5",
                      {{"deviation", num_str(out.df_deviation)}});
    if (out.f_x0_norm > 0.4 * eta)
        throw PwError(ErrorCode::hypothesis_violation,
                      "fixed point seed too far: |F(x0)| > 2 eta / 5",
                      {{"f_x0", num_str(out.f_x0_norm)}, {"eta", num_str(eta)}});

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    Eigen::VectorXcd x = x0;
    Eigen::VectorXcd fx = f0;
    for (int it = 0; it < max_iter; ++it) {
        if (max_norm(fx) <= tol) {
            out.y = x;
            out.iterations = it;
            if (max_norm(x - x0) > 2.5 * out.f_x0_norm + 10 * tol)
                throw PwError(ErrorCode::internal_inconsistency,
                              "fixed point violates |y - x0| <= (5/2) |F(x0)|");
            return out;
        }
        x -= lu.solve(fx);
        fx = F(x);
    }
    throw PwError(ErrorCode::non_convergence, "fixed point iteration cap reached",
                  {{"residual", num_str(max_norm(fx))}});
}

namespace {

Cplx poly_eval(const Eigen::VectorXcd& b, int d, Cplx z) {
    // p_b(z) = z^d + sum_{j<d} b_j z^j
    Cplx acc = 1.0;
    for (int k = 0; k < d; ++k) acc = acc * z + b(d - 1 - k);
    return acc;
}

/// q_k(b, s) = s^{d-1-k} + sum_{l=k+1}^{d-1} b_l s^{l-1-k}
Cplx q_eval(const Eigen::VectorXcd& b, int d, int k, Cplx s) {
    Cplx acc = std::pow(s, d - 1 - k);
    for (int l = k + 1; l < d; ++l) acc += b(l) * std::pow(s, l - 1 - k);
    return acc;
}

struct Contour {
    std::vector<Cplx> s;   // nodes
    std::vector<Cplx> ds;  // ds/(2 pi i) weights
};

Contour make_contour(double radius, int nodes) {
    Contour c;
    c.s.resize(static_cast<std::size_t>(nodes));
    c.ds.resize(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        double th = 2.0 * M_PI * k / nodes;
        Cplx sk = std::polar(radius, th);
        c.s[static_cast<std::size_t>(k)] = sk;
        // ds = i s dth; dth = 2 pi / nodes; ds/(2 pi i) = s / nodes
        c.ds[static_cast<std::size_t>(k)] = sk / static_cast<double>(nodes);
    }
    return c;
}

std::vector<double> roots_abs(const Eigen::VectorXcd& b, int d) {
    // Companion-matrix roots of p_b.
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int j = 0; j < d; ++j) C(j, d - 1) = -b(j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<double> out(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
    return out;
}

}  // namespace

PreparationResult weierstrass_prepare(const WeierstrassProblem& prob) {
    const int d = prob.d;
    const int B2 = prob.taylor_order;
    if (d < 1) throw PwError(ErrorCode::domain_error, "degree must be >= 1");
    if (!(prob.delta > 0.0 && prob.delta <= 1.0))
        throw PwError(ErrorCode::hypothesis_violation, "need 0 < delta <= 1");
    if (prob.lambda_grid.empty())
        throw PwError(ErrorCode::domain_error, "lambda grid must be nonempty");

    const Contour unit = make_contour(1.0, prob.quad_nodes);
    const Contour taylor = make_contour(0.8 * prob.delta, prob.quad_nodes);

    PreparationResult out;
    out.b_coefficients.resize(prob.lambda_grid.size());

    // Measured remainder bound epsilon over the Taylor contour and the grid.
    double eps = 0.0;
    for (const auto& lam : prob.lambda_grid)
        for (const auto& s : taylor.s) eps = std::max(eps, std::abs(prob.remainder(s, lam)));
    out.epsilon = eps;
    if (200.0 * d * eps >= 1.0)
        throw PwError(ErrorCode::hypothesis_violation, "remainder too large: 200 d epsilon >= 1",
                      {{"epsilon", num_str(eps)}});

    double worst_q = 0.0, worst_res = 0.0;
    Eigen::VectorXcd b_center;  // stage-one polynomial at the first grid point

    for (std::size_t gi = 0; gi < prob.lambda_grid.size(); ++gi) {
        const Eigen::VectorXd& lam = prob.lambda_grid[gi];
        Eigen::VectorXd a_re = prob.poly_coeffs(lam);
        if (a_re.size() != d)
            throw PwError(ErrorCode::dimension_mismatch, "poly_coeffs must return d coefficients");
        for (int j = 0; j < d; ++j)
            if (std::abs(a_re(j)) > 1.0 / (8.0 * d) + 1e-15)
                throw PwError(ErrorCode::hypothesis_violation,
                              "|a_j| exceeds 1/(8d) on the lambda grid",
                              {{"j", std::to_string(j)}, {"value", num_str(a_re(j))}});
        Eigen::VectorXcd a = a_re.cast<Cplx>();

        // Taylor coefficients c_j of the remainder at 0, j < B2.
        std::vector<Cplx> cj(static_cast<std::size_t>(B2), Cplx(0.0));
        {
            std::vector<Cplx> rs(taylor.s.size());
            for (std::size_t k = 0; k < taylor.s.size(); ++k) rs[k] = prob.remainder(taylor.s[k], lam);
            for (int j = 0; j < B2; ++j) {
                Cplx acc = 0.0;
                for (std::size_t k = 0; k < taylor.s.size(); ++k)
                    acc += rs[k] / std::pow(taylor.s[k], j + 1) * taylor.ds[k];
                cj[static_cast<std::size_t>(j)] = acc;
            }
        }

        auto taylor_part = [&](Cplx s) {
            Cplx acc = 0.0;
            for (int j = B2 - 1; j >= 0; --j) acc = acc * s + cj[static_cast<std::size_t>(j)];
            return acc;
        };
        auto r_tilde = [&](Cplx s) { return prob.remainder(s, lam) - taylor_part(s); };

        // Stage 1: R~_k(b) on the unit contour from the Taylor part.
        auto R_taylor = [&](const Eigen::VectorXcd& b) {
            Eigen::VectorXcd R = Eigen::VectorXcd::Zero(d);
            for (std::size_t n = 0; n < unit.s.size(); ++n) {
                Cplx s = unit.s[n];
                Cplx tp = taylor_part(s);
                Cplx pb = poly_eval(b, d, s);
                for (int k = 0; k < d; ++k) R(k) += tp * q_eval(b, d, k, s) / pb * unit.ds[n];
            }
            return R;
        };
        auto G_stage1 = [&](const Eigen::VectorXcd& b) -> Eigen::VectorXcd {
            return b - a - R_taylor(b);
        };
        FixedPointResult fp1 = banach_fixed_point(G_stage1, a, 1.0 / (4.0 * d));
        Eigen::VectorXcd b1 = fp1.y;
        if (gi == 0) b_center = b1;

        // Stage 2 contour radius away from the moduli of the stage-one roots.
        double alpha = 0.75 * prob.delta;
        {
            std::vector<double> mod = roots_abs(b_center, d);
            double best = -1.0;
            for (int c = 0; c <= 64; ++c) {
                double cand = prob.delta * (0.5 + 0.5 * (c + 0.5) / 65.0);
                double dist = 1e300;
                for (double m : mod) dist = std::min(dist, std::abs(cand - m));
                if (dist > best) {
                    best = dist;
                    alpha = cand;
                }
            }
        }
        const Contour outer = make_contour(alpha, prob.quad_nodes);

        auto R_tail = [&](const Eigen::VectorXcd& b) {
            Eigen::VectorXcd R = Eigen::VectorXcd::Zero(d);
            for (std::size_t n = 0; n < outer.s.size(); ++n) {
                Cplx s = outer.s[n];
                Cplx rt = r_tilde(s);
                Cplx pb = poly_eval(b, d, s);
                for (int k = 0; k < d; ++k) R(k) += rt * q_eval(b, d, k, s) / pb * outer.ds[n];
            }
            return R;
        };
        // Stage 2: x = b - b1 solves x - [R~(b1+x) - R~(b1)] - R_tail(b1+x) = 0.
        Eigen::VectorXcd Rt1 = R_taylor(b1);
        auto G_stage2 = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
            Eigen::VectorXcd b = b1 + x;
            return x - (R_taylor(b) - Rt1) - R_tail(b);
        };
        double eta2 = std::pow(prob.delta / (6.0 * d), d) / (4.0 * d);
        FixedPointResult fp2 =
            banach_fixed_point(G_stage2, Eigen::VectorXcd::Zero(d), std::max(eta2, 1e-6));
        Eigen::VectorXcd b = b1 + fp2.y;

        Eigen::VectorXd b_re(d);
        for (int j = 0; j < d; ++j) {
            if (std::abs(b(j).imag()) > 1e-9)
                throw PwError(ErrorCode::internal_inconsistency,
                              "prepared coefficients acquired an imaginary part");
            b_re(j) = b(j).real();
        }
        out.b_coefficients[gi] = b_re;

        // Q(z) on the verification grid and the factorization residual.
        for (const auto& z : prob.z_verify) {
            if (std::abs(z) > prob.delta / 4.0 + 1e-12)
                throw PwError(ErrorCode::domain_error, "verification points must satisfy |z| <= delta/4");
            Cplx Q = 0.0;
            for (std::size_t n = 0; n < unit.s.size(); ++n) {
                Cplx s = unit.s[n];
                Q += taylor_part(s) / (poly_eval(b, d, s) * (s - z)) * unit.ds[n];
            }
            for (std::size_t n = 0; n < outer.s.size(); ++n) {
                Cplx s = outer.s[n];
                Q += r_tilde(s) / (poly_eval(b, d, s) * (s - z)) * outer.ds[n];
            }
            worst_q = std::max(worst_q, std::abs(Q));

            Cplx f = std::pow(z, d) + prob.remainder(z, lam);
            for (int j = 0; j < d; ++j) f += a(j) * std::pow(z, j);
            Cplx rhs = (Cplx(1.0) + Q) * poly_eval(b, d, z);
            worst_res = std::max(worst_res, std::abs(f - rhs));
        }
    }

    out.q_factor_bound = worst_q;
    out.residual = worst_res;
    out.q_certificate = worst_q <= 0.1 + 1e-12;
    out.b_certificate = true;
    for (const auto& bv : out.b_coefficients)
        for (int j = 0; j < d; ++j)
            if (std::abs(bv(j)) > 1.0 / (2.0 * d) + 1e-12) out.b_certificate = false;
    return out;
}

}  // namespace phasewave
