#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "phasewave/errors.hpp"

namespace phasewave {

/// Bivariate polynomial sum_{i,j} coef(i,j) x^i y^j.
struct BivarPoly {
    Eigen::MatrixXd coef;
    std::complex<double> eval(std::complex<double> x, std::complex<double> y) const;
};

/// r = p (-) q: the monic degree-d1*d2 polynomial with
/// r(x - y) = R1(x, y) p(x) + R2(x, y) q(y).
struct ResultantTriple {
    std::vector<double> r;  // ascending coefficients, monic
    BivarPoly R1;
    BivarPoly R2;
};

/// Constructs r as the characteristic polynomial of multiplication by (x - y)
/// on C[x,y]/(p(x), q(y)) with basis x^i y^j, and the cofactors R1, R2 from
/// the division sequences z^s = g_s p + v_s, z^s = h_s q + w_s.
/// p and q are ascending monic coefficient lists.
ResultantTriple resultant_ominus(const std::vector<double>& p, const std::vector<double>& q);

/// Max over random complex sample pairs in the unit bidisc of
/// |r(x-y) - R1 p(x) - R2 q(y)| / max(1, |terms|).
double verify_resultant_identity(const ResultantTriple& triple, const std::vector<double>& p,
                                 const std::vector<double>& q, int samples, std::uint64_t seed);

double poly_eval(const std::vector<double>& coeffs, double x);
std::complex<double> poly_eval(const std::vector<double>& coeffs, std::complex<double> x);

/// Monic polynomial with the given roots.
std::vector<double> poly_from_roots(const std::vector<double>& roots);

/// Matrix of multiplication by (x - y) on C[x,y]/(p(x), q(y)) in the basis
/// x^i y^j; its spectrum is the set of pairwise root differences.
Eigen::MatrixXd resultant_multiplication_matrix(const std::vector<double>& p,
                                                const std::vector<double>& q);

}  // namespace phasewave
