#pragma once

#include <functional>
#include <vector>

#include "phasewave/errors.hpp"

namespace phasewave {

/// Analytic excision bound: if |g^(k)| >= k! delta^k on J, the sublevel set
/// {|g| < t} is a union of at most k intervals of total length
/// <= (2k/delta) t^{1/k}.
double excision_bound(int k, double delta, double t);

struct ExcisionInput {
    std::function<double(double)> g;
    /// k-th derivative, used to verify the floor |g^(k)| >= k! delta^k by
    /// sampling. Optional: when absent the floor is estimated by central
    /// finite differences of g.
    std::function<double(double)> g_deriv_k;
    int k = 1;
    double delta = 1.0;
};

struct ExcisionResult {
    double measure = 0.0;
    int components = 0;
    double bound = 0.0;
    bool hypothesis_ok = true;  // derivative floor verified at the samples
    std::vector<std::pair<double, double>> intervals;
};

/// Lebesgue measure of {x in J : |g(x)| < t} by sampling at `resolution`
/// points and bracketing the crossings of |g| = t by bisection to 1e-10
/// width. The component count is certified only up to the resolution.
ExcisionResult excision_measure(const ExcisionInput& input, double lo, double hi, double t,
                                int resolution);

}  // namespace phasewave
