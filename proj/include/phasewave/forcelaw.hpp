#pragma once

#include <string>
#include <vector>

#include "phasewave/weights.hpp"

namespace phasewave {

enum class LawType { toda, quadratic, cubic, custom };

LawType law_type_from_string(const std::string& s);
const char* law_type_name(LawType t);

/// Analytic force law as a Taylor series about -b:
///   F(y) = sum_{k=0}^{K} alpha_k (y + b)^k,  restoring force alpha_1 > 0.
/// `radius` is the convergence radius bound, clamped to (0, 1].
struct ForceLaw {
    LawType type = LawType::custom;
    double base_point = 0.0;          // b
    std::vector<double> alpha;        // alpha_0 .. alpha_K
    double radius = 1.0;              // r_{F,b} in (0,1]

    int order() const { return static_cast<int>(alpha.size()) - 1; }
    double alpha1() const { return alpha[1]; }

    /// F(y) for |y + b| < radius.
    double eval(double y) const;
    /// F(-b + s) = sum alpha_k s^k; throws outside the convergence radius.
    double eval_shifted(double s) const;
};

/// toda: F(x)=e^x; quadratic: F(x)=x+x^2; cubic: F(x)=x+x^3; expanded about -b.
ForceLaw builtin_force_law(LawType type, double b, int K,
                           const std::vector<double>& custom_coefficients = {});

/// W(u)(m) and its input norm; `d_w_bound` is the reported constant with
/// ||W(u)|| <= d_w_bound ||u||^2 on the half-radius domain.
struct NonlinearResidual {
    FourierSequence value;
    double input_norm = 0.0;
    double d_w_bound = 0.0;
};

/// Cached convolution powers u, u*u, ..., u^{*kmax} of one iterate; lets one
/// pass serve W, the DW symbol and higher derivatives.
struct ConvolutionPowers {
    explicit ConvolutionPowers(const FourierSequence& u, int kmax);
    const FourierSequence& power(int k) const;  // k >= 1

  private:
    std::vector<FourierSequence> powers_;
};

/// Quadratic bound constant: sum_{k>=2} |alpha_k| (radius/2)^{k-2} 2^k.
double w_quadratic_bound(const ForceLaw& F);

/// W(u) = sum_{k=2}^{K} alpha_k u^{*k}. Requires seq_norm(spec,u) < radius/2.
NonlinearResidual apply_W(const ForceLaw& F, const FourierSequence& u, const WeightSpec& spec);

/// Toeplitz symbol r of DW(u): r(k) = sum_p p alpha_p u^{*(p-1)}(k); the
/// operator is R(m,n) = r(m-n).
FourierSequence apply_DW(const ForceLaw& F, const FourierSequence& u);

/// j-th derivative applied to args: sum_{k >= max(2,j)} k!/(k-j)! alpha_k
/// u^{*(k-j)} * y_1 * ... * y_j. j beyond the truncation order gives zero.
FourierSequence apply_DjW(const ForceLaw& F, const FourierSequence& u,
                          const std::vector<FourierSequence>& args);

/// One-pass evaluation of W(u) and the DW symbol from shared powers.
struct WEvaluation {
    FourierSequence w;
    FourierSequence dw_symbol;
};
WEvaluation apply_W_and_DW(const ForceLaw& F, const FourierSequence& u, const WeightSpec& spec);

}  // namespace phasewave
