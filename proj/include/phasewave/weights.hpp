#pragma once

#include <Eigen/Dense>
#include <vector>

#include "phasewave/sequence.hpp"

namespace phasewave {

enum class WeightFamily { subexponential, exponential };

/// Weight w on Z^nu: the subexponential family is D_N e^{sigma |n|^c}, the
/// exponential family D_N (1+|n|)^{nu+1} e^{sigma |n|}; |n| is the max norm.
struct WeightSpec {
    int nu = 1;
    WeightFamily family = WeightFamily::subexponential;
    double sigma = 1.0;
    double c_exponent = 0.01;
    double normalizer = 1.0;  // D_N >= 1

    void validate() const;
};

double weight_value(const WeightSpec& spec, const ModeIndex& m);

/// Weighted l1 norm: sum_m w(m) |u(m)| over the full (+-expanded) support.
double seq_norm(const WeightSpec& spec, const FourierSequence& u);

/// Diagonal-plus-Toeplitz operator on an ordered finite mode set:
/// T(m,n) = diagonal(m) delta_{m,n} + toeplitz(m-n). An infinite diagonal
/// entry is stored as +infinity (the singular-divisor sentinel).
struct LatticeOperator {
    std::vector<ModeIndex> mode_set;
    std::vector<double> diagonal;  // aligned with mode_set
    FourierSequence toeplitz;

    double entry(std::size_t i, std::size_t j) const {
        double t = toeplitz.at(mode_set[i] - mode_set[j]);
        return i == j ? diagonal[i] + t : t;
    }
    Eigen::MatrixXd dense() const;
};

/// Weighted operator norm sup_n sum_m w(m-n) |T(m,n)| over the mode set.
double op_norm(const WeightSpec& spec, const LatticeOperator& T);
double op_norm(const WeightSpec& spec, const std::vector<ModeIndex>& modes,
               const Eigen::MatrixXd& T);

/// Truncated numerical estimate of the convolution constant D_{nu,x}: the
/// maximum over |n| <= cutoff and a sigma grid of
/// sum_{|m| <= 2 cutoff} w(n) / (w(m) w(n-m)) with D_N = 1 weights.
/// A lower estimate of the true supremum; nondecreasing in the cutoff.
double estimate_convolution_constant(int nu, WeightFamily family, int cutoff);

/// max over both families of the cutoff-16 estimate, rounded up; the default
/// normalizer used when a configuration asks for "auto". Smaller cutoffs are
/// used for nu >= 3 to keep the scan affordable.
double default_normalizer(int nu);

}  // namespace phasewave
