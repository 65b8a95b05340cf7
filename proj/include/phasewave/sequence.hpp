#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "phasewave/modes.hpp"

namespace phasewave {

/// Real even-symmetric sequence u: Z^nu -> R with finite support,
/// u(-m) = u(m). Storage keeps one value per +-pair at the canonical
/// representative (first nonzero component positive); reads at -m resolve
/// through the canonical key, so the symmetry holds structurally.
class FourierSequence {
  public:
    FourierSequence() : nu_(1) {}
    explicit FourierSequence(int nu) : nu_(nu) {
        if (nu < 1 || nu > kMaxNu)
            throw PwError(ErrorCode::dimension_mismatch, "invalid phase count " + std::to_string(nu));
    }

    int nu() const { return nu_; }

    double at(const ModeIndex& m) const {
        auto it = rep_.find(m.canonical().key());
        return it == rep_.end() ? 0.0 : it->second;
    }

    void set(const ModeIndex& m, double value) {
        if (value == 0.0) {
            rep_.erase(m.canonical().key());
        } else {
            rep_[m.canonical().key()] = value;
        }
    }

    void add(const ModeIndex& m, double value) { set(m, at(m) + value); }

    void scale(double s) {
        if (s == 0.0) {
            rep_.clear();
            return;
        }
        for (auto& [k, v] : rep_) v *= s;
    }

    /// this += s * other
    void add_scaled(const FourierSequence& other, double s) {
        for (const auto& [k, v] : other.rep_) {
            std::uint64_t key = k;
            auto it = rep_.find(key);
            double nv = (it == rep_.end() ? 0.0 : it->second) + s * v;
            if (nv == 0.0) {
                if (it != rep_.end()) rep_.erase(it);
            } else {
                rep_[key] = nv;
            }
        }
    }

    bool empty() const { return rep_.empty(); }
    std::size_t support_size() const { return rep_.size(); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [k, v] : rep_) m = std::max(m, std::abs(v));
        return m;
    }

    int support_radius() const {
        int r = 0;
        for (const auto& [k, v] : rep_) r = std::max(r, ModeIndex::from_key(nu_, k).max_norm());
        return r;
    }

    /// Canonical representatives in deterministic (key) order.
    std::vector<std::pair<ModeIndex, double>> reps() const {
        std::vector<std::pair<ModeIndex, double>> out;
        out.reserve(rep_.size());
        for (const auto& [k, v] : rep_) out.emplace_back(ModeIndex::from_key(nu_, k), v);
        return out;
    }

    /// Full +- expanded support (each nonzero pair contributes both signs).
    std::vector<std::pair<ModeIndex, double>> full_support() const {
        std::vector<std::pair<ModeIndex, double>> out;
        out.reserve(2 * rep_.size());
        for (const auto& [k, v] : rep_) {
            ModeIndex m = ModeIndex::from_key(nu_, k);
            out.emplace_back(m, v);
            if (!m.is_zero()) out.emplace_back(m.negated(), v);
        }
        return out;
    }

    bool operator==(const FourierSequence& o) const { return nu_ == o.nu_ && rep_ == o.rep_; }

  private:
    int nu_;
    std::map<std::uint64_t, double> rep_;
};

/// Exact full-sum convolution (u*v)(m) = sum_n u(m-n) v(n). Supports are
/// expanded to their +- closures and accumulated on the dense bounding box;
/// only canonical representatives are written back, which keeps the result
/// exactly symmetric.
FourierSequence convolve(const FourierSequence& u, const FourierSequence& v);

/// k-th convolution power, k >= 1 (k = 0 would be the delta at 0).
FourierSequence convolution_power(const FourierSequence& u, int k);

/// delta_0 sequence (identity element of the convolution algebra).
FourierSequence delta_sequence(int nu);

}  // namespace phasewave
