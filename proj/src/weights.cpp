#include "phasewave/weights.hpp"

#include <cmath>
#include <limits>

namespace phasewave {

void WeightSpec::validate() const {
    if (nu < 1 || nu > kMaxNu)
        throw PwError(ErrorCode::dimension_mismatch, "weight spec: invalid phase count");
    if (sigma < 0.25) throw PwError(ErrorCode::domain_error, "weight spec: sigma must be >= 1/4");
    if (!(c_exponent > 0.0 && c_exponent < 1.0))
        throw PwError(ErrorCode::domain_error, "weight spec: c exponent must lie in (0,1)");
    if (normalizer < 1.0) throw PwError(ErrorCode::domain_error, "weight spec: normalizer must be >= 1");
}

namespace {

double unit_weight(WeightFamily family, int nu, double sigma, double c, int max_norm) {
    double n = static_cast<double>(max_norm);
    if (family == WeightFamily::subexponential) return std::exp(sigma * std::pow(n, c));
    return std::pow(1.0 + n, nu + 1) * std::exp(sigma * n);
}

}  // namespace

double weight_value(const WeightSpec& spec, const ModeIndex& m) {
    return spec.normalizer * unit_weight(spec.family, spec.nu, spec.sigma, spec.c_exponent, m.max_norm());
}

double seq_norm(const WeightSpec& spec, const FourierSequence& u) {
    double s = 0.0;
    for (const auto& [m, v] : u.reps()) {
        double term = weight_value(spec, m) * std::abs(v);
        s += m.is_zero() ? term : 2.0 * term;
    }
    return s;
}

Eigen::MatrixXd LatticeOperator::dense() const {
    const auto n = static_cast<Eigen::Index>(mode_set.size());
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            M(i, j) = entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return M;
}

double op_norm(const WeightSpec& spec, const LatticeOperator& T) {
    const std::size_t n = T.mode_set.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(T.diagonal[i]))
            throw PwError(ErrorCode::singular_entry,
                          "operator norm of matrix with singular diagonal entry at " +
                              T.mode_set[i].to_string());
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            col += weight_value(spec, T.mode_set[i] - T.mode_set[j]) * std::abs(T.entry(i, j));
        best = std::max(best, col);
    }
    return best;
}

double op_norm(const WeightSpec& spec, const std::vector<ModeIndex>& modes,
               const Eigen::MatrixXd& T) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    double best = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double col = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double t = T(i, j);
            if (!std::isfinite(t))
                throw PwError(ErrorCode::singular_entry, "operator norm of matrix with non-finite entry");
            col += weight_value(spec, modes[static_cast<std::size_t>(i)] - modes[static_cast<std::size_t>(j)]) * std::abs(t);
        }
        best = std::max(best, col);
    }
    return best;
}

double estimate_convolution_constant(int nu, WeightFamily family, int cutoff) {
    if (cutoff < 0) throw PwError(ErrorCode::domain_error, "cutoff must be >= 0");
    constexpr double kSigmaGrid[] = {0.25, 0.5, 1.0, 2.0};
    const double c = 0.01;
    const int R = cutoff, M = 2 * cutoff;

    // Enumerate n over the cutoff box (canonical half suffices by symmetry).
    std::vector<ModeIndex> ns;
    {
        ModeIndex n(nu);
        std::vector<int> idx(static_cast<std::size_t>(nu), -R);
        while (true) {
            for (int i = 0; i < nu; ++i) n.set(i, idx[static_cast<std::size_t>(i)]);
            if (n.is_canonical()) ns.push_back(n);
            int i = 0;
            for (; i < nu; ++i) {
                if (++idx[static_cast<std::size_t>(i)] <= R) break;
                idx[static_cast<std::size_t>(i)] = -R;
            }
            if (i == nu) break;
        }
    }

    double best = 0.0;
    for (double sigma : kSigmaGrid) {
        for (const auto& n : ns) {
            double wn = unit_weight(family, nu, sigma, c, n.max_norm());
            double sum = 0.0;
            std::vector<int> idx(static_cast<std::size_t>(nu), -M);
            while (true) {
                ModeIndex m(nu);
                for (int i = 0; i < nu; ++i) m.set(i, idx[static_cast<std::size_t>(i)]);
                sum += wn / (unit_weight(family, nu, sigma, c, m.max_norm()) *
                             unit_weight(family, nu, sigma, c, (n - m).max_norm()));
                int i = 0;
                for (; i < nu; ++i) {
                    if (++idx[static_cast<std::size_t>(i)] <= M) break;
                    idx[static_cast<std::size_t>(i)] = -M;
                }
                if (i == nu) break;
            }
            best = std::max(best, sum);
        }
    }
    return best;
}

double default_normalizer(int nu) {
    int cutoff = nu <= 2 ? 16 : (nu == 3 ? 6 : 4);
    double d = std::max(estimate_convolution_constant(nu, WeightFamily::subexponential, cutoff),
                        estimate_convolution_constant(nu, WeightFamily::exponential, cutoff));
    return std::ceil(std::max(1.0, d));
}

}  // namespace phasewave
