#pragma once

#include "phasewave/weights.hpp"

namespace phasewave {

/// Block data for one site n: local neighborhood U(n) containing n, a bound
/// C_n on the weighted norm of the local inverse, the distance bound l_n to
/// the complement, and the weight-gap mu_n in [0, sigma - sigma~].
struct CoverBlock {
    std::vector<std::size_t> block;  // indices into the operator's mode set
    double inverse_bound = 0.0;      // C_n
    double distance = 0.0;           // l_n (may be +infinity when U(n) = Lambda)
    double weight_gap = 0.0;         // mu_n
};

struct BlockCover {
    std::vector<CoverBlock> blocks;  // one per site, aligned with the mode set
};

/// Result of the parametrix construction: the inverse G = P (I+K)^{-1}, the
/// verified coupling norm ||K||, and the certificate
/// ||G|| <= (1 + w(0)) max_n C_n in the sigma~ norm.
struct CouplingResult {
    Eigen::MatrixXd inverse;
    double coupling_norm = 0.0;    // ||K||_{sigma~}
    double inverse_norm = 0.0;     // ||G||_{sigma~}
    double certificate = 0.0;      // (1 + w_{sigma~}(0)) sup C_n
    double max_defect = 0.0;       // max entry |G T - I|
};

/// Inverts T = D + R on its finite mode set by pasting local block inverses:
/// columns of the parametrix P are columns of the local inverses, the defect
/// K = T P - I is supported off the blocks, and ||K|| <= 1/2 upgrades P to
/// the exact inverse through the Neumann series. Hypotheses are checked
/// numerically; violations name the failing site.
CouplingResult coupling_invert(const LatticeOperator& T, const BlockCover& cover, double sigma,
                               double sigma_tilde, const WeightSpec& spec);

/// Cover construction from divisor magnitudes: sites with |T(n,n)| above the
/// threshold get singleton blocks with C_n = w(0)/(|T(n,n)| - ||R||); sites
/// below it are clustered (max-norm adjacency within `cluster_distance`) and
/// share one block, dilated until the coupling hypothesis holds.
BlockCover build_cover(const LatticeOperator& T, double divisor_threshold, double sigma,
                       double sigma_tilde, const WeightSpec& spec, int cluster_distance = 2);

}  // namespace phasewave
