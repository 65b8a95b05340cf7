#include "phasewave/forcelaw.hpp"

#include <cmath>
#include <limits>

namespace phasewave {

LawType law_type_from_string(const std::string& s) {
    if (s == "toda") return LawType::toda;
    if (s == "quadratic") return LawType::quadratic;
    if (s == "cubic") return LawType::cubic;
    if (s == "custom") return LawType::custom;
    throw PwError(ErrorCode::schema_error, "unknown force law type '" + s + "'");
}

const char* law_type_name(LawType t) {
    switch (t) {
        case LawType::toda: return "toda";
        case LawType::quadratic: return "quadratic";
        case LawType::cubic: return "cubic";
        case LawType::custom: return "custom";
    }
    return "?";
}

double ForceLaw::eval(double y) const { return eval_shifted(y + base_point); }

double ForceLaw::eval_shifted(double s) const {
    if (std::abs(s) >= radius)
        throw PwError(ErrorCode::domain_error,
                      "force law argument outside convergence radius",
                      {{"argument_offset", num_str(s)}, {"radius", num_str(radius)}});
    double acc = 0.0;
    for (std::size_t k = alpha.size(); k-- > 0;) acc = acc * s + alpha[k];
    return acc;
}

namespace {

// Binomial expansion of a polynomial sum c_p x^p about -b: coefficients of
// sum c_p ((s - b))^p in s.
std::vector<double> shift_polynomial(const std::vector<double>& c, double b, int K) {
    std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
    for (std::size_t p = 0; p < c.size(); ++p) {
        if (c[p] == 0.0) continue;
        // (s - b)^p
        std::vector<double> term(p + 1, 0.0);
        term[0] = 1.0;
        for (std::size_t i = 0; i < p; ++i) {
            std::vector<double> next(term.size() + 1, 0.0);
            for (std::size_t j = 0; j < term.size(); ++j) {
                next[j + 1] += term[j];
                next[j] += term[j] * (-b);
            }
            term = next;
        }
        for (std::size_t j = 0; j < term.size() && j < out.size(); ++j) out[j] += c[p] * term[j];
    }
    return out;
}

double ratio_test_radius(const std::vector<double>& alpha) {
    // limsup |alpha_k|^{1/k} over the available tail; infinite for polynomials.
    double sup = 0.0;
    for (std::size_t k = 2; k < alpha.size(); ++k) {
        if (alpha[k] == 0.0) continue;
        sup = std::max(sup, std::pow(std::abs(alpha[k]), 1.0 / static_cast<double>(k)));
    }
    if (sup == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / sup;
}

}  // namespace

ForceLaw builtin_force_law(LawType type, double b, int K,
                           const std::vector<double>& custom_coefficients) {
    if (K < 3) throw PwError(ErrorCode::domain_error, "truncation order K must be >= 3");
    ForceLaw F;
    F.type = type;
    F.base_point = b;
    F.alpha.assign(static_cast<std::size_t>(K) + 1, 0.0);
    switch (type) {
        case LawType::toda: {
            // e^y = e^{-b} sum (y+b)^k / k!
            double c = std::exp(-b);
            double fact = 1.0;
            for (int k = 0; k <= K; ++k) {
                F.alpha[static_cast<std::size_t>(k)] = c / fact;
                fact *= static_cast<double>(k + 1);
            }
            F.radius = 1.0;
            break;
        }
        case LawType::quadratic:
            F.alpha = shift_polynomial({0.0, 1.0, 1.0}, b, K);
            F.radius = 1.0;
            break;
        case LawType::cubic:
            F.alpha = shift_polynomial({0.0, 1.0, 0.0, 1.0}, b, K);
            F.radius = 1.0;
            break;
        case LawType::custom: {
            if (custom_coefficients.size() < 2)
                throw PwError(ErrorCode::schema_error, "custom force law needs at least alpha_0, alpha_1");
            for (std::size_t k = 0; k < custom_coefficients.size() && k <= static_cast<std::size_t>(K); ++k)
                F.alpha[k] = custom_coefficients[k];
            F.radius = std::min(1.0, ratio_test_radius(F.alpha));
            break;
        }
    }
    if (!(F.alpha[1] > 0.0))
        throw PwError(ErrorCode::a1_violation,
                      "assumption A1 violated: F'(-b) = " + num_str(F.alpha[1]) + " <= 0");
    return F;
}

ConvolutionPowers::ConvolutionPowers(const FourierSequence& u, int kmax) {
    powers_.reserve(static_cast<std::size_t>(std::max(kmax, 1)));
    powers_.push_back(u);
    for (int k = 2; k <= kmax; ++k) powers_.push_back(convolve(powers_.back(), u));
}

const FourierSequence& ConvolutionPowers::power(int k) const {
    return powers_[static_cast<std::size_t>(k - 1)];
}

double w_quadratic_bound(const ForceLaw& F) {
    double s = 0.0;
    double half = F.radius / 2.0;
    for (std::size_t k = 2; k < F.alpha.size(); ++k)
        s += std::abs(F.alpha[k]) * std::pow(half, static_cast<double>(k) - 2.0) *
             std::pow(2.0, static_cast<double>(k));
    return s;
}

namespace {

int highest_nonzero_order(const ForceLaw& F) {
    int kmax = 1;
    for (std::size_t k = 2; k < F.alpha.size(); ++k)
        if (F.alpha[k] != 0.0) kmax = static_cast<int>(k);
    return kmax;
}

void check_domain(const ForceLaw& F, double norm) {
    if (!(norm < F.radius / 2.0))
        throw PwError(ErrorCode::convergence_domain,
                      "sequence norm outside the convergence domain of W",
                      {{"norm", num_str(norm)}, {"radius_half", num_str(F.radius / 2.0)}});
}

}  // namespace

NonlinearResidual apply_W(const ForceLaw& F, const FourierSequence& u, const WeightSpec& spec) {
    NonlinearResidual out;
    out.input_norm = seq_norm(spec, u);
    out.d_w_bound = w_quadratic_bound(F);
    out.value = FourierSequence(u.nu());
    int kmax = highest_nonzero_order(F);
    if (kmax < 2) return out;  // W vanishes identically; no domain to leave
    check_domain(F, out.input_norm);
    ConvolutionPowers powers(u, kmax);
    for (int k = 2; k <= kmax; ++k)
        if (F.alpha[static_cast<std::size_t>(k)] != 0.0)
            out.value.add_scaled(powers.power(k), F.alpha[static_cast<std::size_t>(k)]);
    return out;
}

FourierSequence apply_DW(const ForceLaw& F, const FourierSequence& u) {
    FourierSequence r(u.nu());
    int kmax = highest_nonzero_order(F);
    if (kmax < 2) return r;
    ConvolutionPowers powers(u, kmax - 1);
    for (int k = 2; k <= kmax; ++k)
        if (F.alpha[static_cast<std::size_t>(k)] != 0.0)
            r.add_scaled(powers.power(k - 1), static_cast<double>(k) * F.alpha[static_cast<std::size_t>(k)]);
    return r;
}

FourierSequence apply_DjW(const ForceLaw& F, const FourierSequence& u,
                          const std::vector<FourierSequence>& args) {
    const int j = static_cast<int>(args.size());
    if (j < 1) throw PwError(ErrorCode::domain_error, "DjW needs at least one direction");
    FourierSequence out(u.nu());
    const int K = F.order();
    if (j > K) return out;

    FourierSequence dirs = args[0];
    for (int i = 1; i < j; ++i) dirs = convolve(dirs, args[static_cast<std::size_t>(i)]);

    int kmax = highest_nonzero_order(F);
    int klo = std::max(2, j);
    if (kmax < klo) return out;
    ConvolutionPowers powers(u, std::max(1, kmax - j));
    for (int k = klo; k <= kmax; ++k) {
        double a = F.alpha[static_cast<std::size_t>(k)];
        if (a == 0.0) continue;
        double falling = 1.0;  // k!/(k-j)!
        for (int i = 0; i < j; ++i) falling *= static_cast<double>(k - i);
        if (k == j) {
            out.add_scaled(dirs, falling * a);
        } else {
            out.add_scaled(convolve(powers.power(k - j), dirs), falling * a);
        }
    }
    return out;
}

WEvaluation apply_W_and_DW(const ForceLaw& F, const FourierSequence& u, const WeightSpec& spec) {
    WEvaluation out{FourierSequence(u.nu()), FourierSequence(u.nu())};
    int kmax = highest_nonzero_order(F);
    if (kmax < 2) return out;
    check_domain(F, seq_norm(spec, u));
    ConvolutionPowers powers(u, kmax);
    for (int k = 2; k <= kmax; ++k) {
        double a = F.alpha[static_cast<std::size_t>(k)];
        if (a == 0.0) continue;
        out.w.add_scaled(powers.power(k), a);
        out.dw_symbol.add_scaled(powers.power(k - 1), static_cast<double>(k) * a);
    }
    return out;
}

}  // namespace phasewave
