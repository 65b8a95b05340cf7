#include "phasewave/excision.hpp"

#include <cmath>

namespace phasewave {

double excision_bound(int k, double delta, double t) {
    if (k < 1 || !(delta > 0.0) || !(t > 0.0))
        throw PwError(ErrorCode::domain_error, "excision bound needs k >= 1, delta > 0, t > 0");
    return 2.0 * k / delta * std::pow(t, 1.0 / k);
}

namespace {

double fd_derivative(const std::function<double(double)>& g, double x, int k, double h) {
    // Central k-th difference.
    double acc = 0.0;
    double sign = 1.0;
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
        acc += sign * binom * g(x + (k / 2.0 - i) * h);
        sign = -sign;
        binom = binom * (k - i) / (i + 1);
    }
    return acc / std::pow(h, k);
}

double bisect_crossing(const std::function<double(double)>& f, double a, double b) {
    // The inside/outside classification is f < 0, matching the sampler;
    // returns the bracket midpoint at width 1e-10.
    bool side_a = f(a) < 0.0;
    for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
        double m = 0.5 * (a + b);
        if ((f(m) < 0.0) == side_a) {
            a = m;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

ExcisionResult excision_measure(const ExcisionInput& input, double lo, double hi, double t,
                                int resolution) {
    if (!(hi > lo) || resolution < 8)
        throw PwError(ErrorCode::domain_error, "excision measure needs hi > lo and resolution >= 8");
    ExcisionResult out;
    out.bound = excision_bound(input.k, input.delta, t);

    const double floor = std::tgamma(input.k + 1.0) * std::pow(input.delta, input.k);
    const double fd_h = (hi - lo) / (8.0 * resolution);
    for (int i = 0; i <= resolution; ++i) {
        double x = lo + (hi - lo) * i / resolution;
        double dk = input.g_deriv_k ? input.g_deriv_k(x) : fd_derivative(input.g, x, input.k, fd_h);
        if (std::abs(dk) < floor * (1.0 - 1e-9)) {
            out.hypothesis_ok = false;
            break;
        }
    }

    auto f = [&](double x) { return std::abs(input.g(x)) - t; };
    double prev_x = lo;
    bool inside = f(lo) < 0.0;
    double open_at = inside ? lo : 0.0;
    for (int i = 1; i <= resolution; ++i) {
        double x = lo + (hi - lo) * i / resolution;
        if ((f(x) < 0.0) != inside) {
            double cross = bisect_crossing(f, prev_x, x);
            if (inside) {
                out.intervals.emplace_back(open_at, cross);
            } else {
                open_at = cross;
            }
            inside = !inside;
        }
        prev_x = x;
    }
    if (inside) out.intervals.emplace_back(open_at, hi);

    out.components = static_cast<int>(out.intervals.size());
    for (const auto& [a, b] : out.intervals) out.measure += b - a;
    return out;
}

}  // namespace phasewave
