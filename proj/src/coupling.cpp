#include "phasewave/coupling.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <set>

namespace phasewave {

namespace {

double site_distance(const ModeIndex& a, const ModeIndex& b) {
    return static_cast<double>((a - b).max_norm());
}

/// Weighted operator norm of a dense block indexed by a site subset.
double block_norm(const WeightSpec& w, const std::vector<ModeIndex>& sites,
                  const std::vector<std::size_t>& block, const Eigen::MatrixXd& M) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        double col = 0.0;
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            col += weight_value(w, sites[block[static_cast<std::size_t>(i)]] -
                                       sites[block[static_cast<std::size_t>(j)]]) *
                   std::abs(M(i, j));
        best = std::max(best, col);
    }
    return best;
}

Eigen::MatrixXd submatrix(const LatticeOperator& T, const std::vector<std::size_t>& block) {
    const auto n = static_cast<Eigen::Index>(block.size());
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            M(i, j) = T.entry(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]);
    return M;
}

/// Off-diagonal Toeplitz part; the full diagonal (including r(0)) is folded
/// into D for the purposes of the lemma.
double off_diagonal_norm(const WeightSpec& w, const LatticeOperator& T) {
    const std::size_t n = T.mode_set.size();
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != j)
                col += weight_value(w, T.mode_set[i] - T.mode_set[j]) *
                       std::abs(T.toeplitz.at(T.mode_set[i] - T.mode_set[j]));
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

CouplingResult coupling_invert(const LatticeOperator& T, const BlockCover& cover, double sigma,
                               double sigma_tilde, const WeightSpec& spec) {
    const std::size_t n = T.mode_set.size();
    if (cover.blocks.size() != n)
        throw PwError(ErrorCode::dimension_mismatch, "cover must assign one block per site");
    if (!(sigma >= sigma_tilde && sigma_tilde >= 0.25))
        throw PwError(ErrorCode::domain_error, "need sigma >= sigma~ >= 1/4");

    WeightSpec w_sig = spec;
    w_sig.sigma = sigma;
    WeightSpec w_til = spec;
    w_til.sigma = sigma_tilde;

    const double norm_R = off_diagonal_norm(w_sig, T);
    const double c = spec.c_exponent;

    // Hypothesis pass: local inverses, their weighted norms, distances, and
    // the smallness condition C_n e^{-mu_n l_n^c} ||R|| <= 1/2.
    std::vector<Eigen::MatrixXd> local_inv(n);
    std::vector<std::map<std::size_t, Eigen::Index>> pos(n);
    for (std::size_t s = 0; s < n; ++s) {
        const CoverBlock& blk = cover.blocks[s];
        bool contains = false;
        for (std::size_t i : blk.block) contains |= (i == s);
        if (!contains)
            throw PwError(ErrorCode::hypothesis_violation,
                          "block of site " + T.mode_set[s].to_string() + " does not contain the site");
        if (blk.weight_gap < 0.0 || blk.weight_gap > sigma - sigma_tilde + 1e-15)
            throw PwError(ErrorCode::hypothesis_violation,
                          "weight gap outside [0, sigma - sigma~] at site " + T.mode_set[s].to_string());

        // dist(n, Lambda \ U(n))
        std::set<std::size_t> in_block(blk.block.begin(), blk.block.end());
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            if (!in_block.count(i)) dist = std::min(dist, site_distance(T.mode_set[s], T.mode_set[i]));
        if (dist < blk.distance - 1e-12)
            throw PwError(ErrorCode::hypothesis_violation,
                          "distance bound violated at site " + T.mode_set[s].to_string(),
                          {{"claimed", num_str(blk.distance)}, {"actual", num_str(dist)}});

        Eigen::MatrixXd M = submatrix(T, blk.block);
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            if (!std::isfinite(M(i, i)))
                throw PwError(ErrorCode::singular_entry,
                              "singular diagonal inside block of " + T.mode_set[s].to_string());
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        if (!lu.isInvertible())
            throw PwError(ErrorCode::hypothesis_violation,
                          "local block at site " + T.mode_set[s].to_string() + " is not invertible");
        local_inv[s] = lu.inverse();

        WeightSpec w_loc = spec;
        w_loc.sigma = sigma_tilde + blk.weight_gap;
        double inv_norm = block_norm(w_loc, T.mode_set, blk.block, local_inv[s]);
        if (inv_norm > blk.inverse_bound * (1.0 + 1e-12))
            throw PwError(ErrorCode::hypothesis_violation,
                          "local inverse norm exceeds C_n at site " + T.mode_set[s].to_string(),
                          {{"claimed", num_str(blk.inverse_bound)},
                           {"actual", num_str(inv_norm)}});

        double decay = std::isinf(blk.distance)
                           ? 0.0
                           : std::exp(-blk.weight_gap * std::pow(blk.distance, c));
        if (blk.inverse_bound * decay * norm_R > 0.5 + 1e-12)
            throw PwError(ErrorCode::hypothesis_violation,
                          "smallness condition fails at site " + T.mode_set[s].to_string(),
                          {{"lhs", num_str(blk.inverse_bound * decay * norm_R)}});

        for (std::size_t i = 0; i < blk.block.size(); ++i)
            pos[s][blk.block[i]] = static_cast<Eigen::Index>(i);
    }

    // Parametrix columns and coupling defect K = T P - I, supported outside
    // the blocks by construction.
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < n; ++s) {
        Eigen::Index col = pos[s].at(s);
        for (std::size_t i = 0; i < cover.blocks[s].block.size(); ++i)
            P(static_cast<Eigen::Index>(cover.blocks[s].block[i]), static_cast<Eigen::Index>(s)) =
                local_inv[s](static_cast<Eigen::Index>(i), col);
    }
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < n; ++s) {
        std::set<std::size_t> in_block(cover.blocks[s].block.begin(), cover.blocks[s].block.end());
        for (std::size_t m = 0; m < n; ++m) {
            if (in_block.count(m)) continue;
            double acc = 0.0;
            for (std::size_t p : cover.blocks[s].block)
                acc += T.toeplitz.at(T.mode_set[m] - T.mode_set[p]) *
                       P(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s));
            K(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(s)) = acc;
        }
    }

    CouplingResult out;
    out.coupling_norm = op_norm(w_til, T.mode_set, K);
    if (out.coupling_norm > 0.5 + 1e-12)
        throw PwError(ErrorCode::coupling_failure, "coupling norm ||K|| exceeds 1/2",
                      {{"norm", num_str(out.coupling_norm)}});

    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.inverse = P * (I + K).partialPivLu().solve(I);
    out.inverse_norm = op_norm(w_til, T.mode_set, out.inverse);

    double max_C = 0.0;
    for (const auto& blk : cover.blocks) max_C = std::max(max_C, blk.inverse_bound);
    out.certificate = (1.0 + weight_value(w_til, ModeIndex(T.mode_set[0].nu()))) * max_C;

    out.max_defect = (out.inverse * T.dense() - I).cwiseAbs().maxCoeff();
    return out;
}

BlockCover build_cover(const LatticeOperator& T, double divisor_threshold, double sigma,
                       double sigma_tilde, const WeightSpec& spec, int cluster_distance) {
    const std::size_t n = T.mode_set.size();
    WeightSpec w_sig = spec;
    w_sig.sigma = sigma;
    const double norm_R = off_diagonal_norm(w_sig, T);
    const double w0 = spec.normalizer;  // w(0) for either family
    const double mu = sigma - sigma_tilde;

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = T.entry(i, i);

    // Cluster the small-divisor sites by max-norm adjacency.
    std::vector<int> cluster_of(n, -1);
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(diag[i]) > divisor_threshold || cluster_of[i] >= 0) continue;
        std::vector<std::size_t> stack{i};
        cluster_of[i] = static_cast<int>(clusters.size());
        std::vector<std::size_t> members;
        while (!stack.empty()) {
            std::size_t cur = stack.back();
            stack.pop_back();
            members.push_back(cur);
            for (std::size_t j = 0; j < n; ++j) {
                if (cluster_of[j] >= 0 || std::abs(diag[j]) > divisor_threshold) continue;
                if (site_distance(T.mode_set[cur], T.mode_set[j]) <= cluster_distance) {
                    cluster_of[j] = cluster_of[i];
                    stack.push_back(j);
                }
            }
        }
        clusters.push_back(std::move(members));
    }

    auto dilate = [&](const std::vector<std::size_t>& core, int radius) {
        std::set<std::size_t> blk(core.begin(), core.end());
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t cidx : core)
                if (site_distance(T.mode_set[j], T.mode_set[cidx]) <= radius) blk.insert(j);
        return std::vector<std::size_t>(blk.begin(), blk.end());
    };

    auto block_for = [&](const std::vector<std::size_t>& core, std::size_t site) -> CoverBlock {
        for (int radius = 1;; ++radius) {
            std::vector<std::size_t> blk = dilate(core, radius);
            std::set<std::size_t> in_block(blk.begin(), blk.end());
            double dist = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (!in_block.count(j)) dist = std::min(dist, site_distance(T.mode_set[site], T.mode_set[j]));

            Eigen::MatrixXd M = submatrix(T, blk);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
            if (lu.isInvertible()) {
                WeightSpec w_loc = spec;
                w_loc.sigma = sigma_tilde + mu;
                double C = block_norm(w_loc, T.mode_set, blk, lu.inverse());
                double decay = std::isinf(dist) ? 0.0 : std::exp(-mu * std::pow(dist, spec.c_exponent));
                if (C * decay * norm_R <= 0.5)
                    return CoverBlock{std::move(blk), C, dist, mu};
            }
            if (blk.size() == n)
                throw PwError(ErrorCode::hypothesis_violation,
                              "no admissible block found for site " + T.mode_set[site].to_string());
        }
    };

    BlockCover cover;
    cover.blocks.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (cluster_of[i] >= 0) {
            cover.blocks[i] = block_for(clusters[static_cast<std::size_t>(cluster_of[i])], i);
            continue;
        }
        // Regular site: singleton block with the analytic bound
        // C = w(0) / (|T(n,n)| - ||R||) when it is admissible.
        double denom = std::abs(diag[i]) - norm_R;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) dist = std::min(dist, site_distance(T.mode_set[i], T.mode_set[j]));
        if (denom > 0.0) {
            double C = w0 / denom;
            double decay = std::isinf(dist) ? 0.0 : std::exp(-mu * std::pow(dist, spec.c_exponent));
            if (C * decay * norm_R <= 0.5) {
                cover.blocks[i] = CoverBlock{{i}, C, dist, mu};
                continue;
            }
        }
        cover.blocks[i] = block_for({i}, i);
    }
    return cover;
}

}  // namespace phasewave
