// Test-only reference implementations, independent of the library's
// canonical-fold storage and dense-box convolution. Expected values marked
// as derived in the test files were computed with these oracles.
#pragma once

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "phasewave/forcelaw.hpp"
#include "phasewave/sequence.hpp"

namespace oracle {

using phasewave::FourierSequence;
using phasewave::ModeIndex;

/// Plain map over the full lattice support (both signs stored explicitly).
using FullMap = std::map<std::uint64_t, double>;

inline FullMap to_full(const FourierSequence& u) {
    FullMap m;
    for (const auto& [k, v] : u.full_support()) m[k.key()] = v;
    return m;
}

/// Brute-force convolution on full supports, accumulated in a map.
inline FullMap ref_convolve(const FullMap& a, const FullMap& b, int nu) {
    FullMap out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            ModeIndex m = ModeIndex::from_key(nu, ka) + ModeIndex::from_key(nu, kb);
            out[m.key()] += va * vb;
        }
    return out;
}

inline FullMap ref_power(const FullMap& a, int k, int nu) {
    FullMap p = a;
    for (int i = 1; i < k; ++i) p = ref_convolve(p, a, nu);
    return p;
}

inline double ref_at(const FullMap& m, const ModeIndex& idx) {
    auto it = m.find(idx.key());
    return it == m.end() ? 0.0 : it->second;
}

/// W(u) = sum_{k>=2} alpha_k u^{*k} by direct power summation.
inline FullMap ref_W(const phasewave::ForceLaw& F, const FourierSequence& u) {
    FullMap acc;
    FullMap base = to_full(u);
    FullMap pw = base;
    for (int k = 2; k <= F.order(); ++k) {
        pw = ref_convolve(pw, base, u.nu());
        double a = F.alpha[static_cast<std::size_t>(k)];
        if (a != 0.0)
            for (const auto& [key, v] : pw) acc[key] += a * v;
    }
    return acc;
}

inline double max_diff(const FullMap& a, const FullMap& b, int nu) {
    double worst = 0.0;
    for (const auto& [k, v] : a) worst = std::max(worst, std::abs(v - ref_at(b, ModeIndex::from_key(nu, k))));
    for (const auto& [k, v] : b) worst = std::max(worst, std::abs(v - ref_at(a, ModeIndex::from_key(nu, k))));
    return worst;
}

inline double max_diff(const FullMap& a, const FourierSequence& u) {
    double worst = 0.0;
    FullMap b = to_full(u);
    for (const auto& [k, v] : a) worst = std::max(worst, std::abs(v - ref_at(b, ModeIndex::from_key(u.nu(), k))));
    for (const auto& [k, v] : b) worst = std::max(worst, std::abs(v - ref_at(a, ModeIndex::from_key(u.nu(), k))));
    return worst;
}

/// Random symmetric sequence with dyadic values (k/16), so that convolution
/// identities hold exactly in double precision.
inline FourierSequence random_dyadic_sequence(std::mt19937_64& rng, int nu, int support,
                                              int radius) {
    std::uniform_int_distribution<int> coord(-radius, radius);
    std::uniform_int_distribution<int> num(-64, 64);
    FourierSequence u(nu);
    for (int s = 0; s < support; ++s) {
        ModeIndex m(nu);
        for (int i = 0; i < nu; ++i) m.set(i, coord(rng));
        int n = num(rng);
        if (n == 0) n = 1;
        u.set(m, n / 16.0);
    }
    return u;
}

/// Random symmetric sequence with smooth real values.
inline FourierSequence random_sequence(std::mt19937_64& rng, int nu, int support, int radius,
                                       double scale) {
    std::uniform_int_distribution<int> coord(-radius, radius);
    std::uniform_real_distribution<double> val(-scale, scale);
    FourierSequence u(nu);
    for (int s = 0; s < support; ++s) {
        ModeIndex m(nu);
        for (int i = 0; i < nu; ++i) m.set(i, coord(rng));
        u.set(m, val(rng));
    }
    return u;
}

}  // namespace oracle
